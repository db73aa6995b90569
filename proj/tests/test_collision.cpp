#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "fattail/collision.hpp"
#include "fattail/verify.hpp"

using namespace fattail;

namespace {

CVec random_state(const VelocityGrid& g, std::mt19937_64& rng)
{
    std::normal_distribution<double> N;
    CVec f(g.size());
    for (int i = 0; i < g.size(); ++i) f[i] = g.F[i] * cplx(N(rng), N(rng));
    return f;
}

std::vector<ModelParams> all_operators(double gamma)
{
    return {make_fokker_planck(1, gamma), make_scattering(1, gamma, 0.0),
            make_scattering(1, gamma, 1.0), make_scattering(1, gamma, 0.25, ScatteringKernel::PowerDifference),
            make_fractional(1, gamma, 1.0)};
}

GridPtr coarse_grid(const ModelParams& p, int n)
{
    GridOptions opts;
    opts.tol = 1e-6;
    return build_grid(p, n, opts);
}

}  // namespace

TEST_CASE("conservation and dissipativity on random states")
{
    std::mt19937_64 rng(11);
    for (double gamma : {0.5, 1.0, 3.0}) {
        for (const ModelParams& p : all_operators(gamma)) {
            CAPTURE(gamma);
            CAPTURE(to_string(p.op.kind));
            const CollisionOperator op = assemble_operator(p, coarse_grid(p, 200));
            const VelocityGrid& g = *op.grid;
            for (int trial = 0; trial < 20; ++trial) {
                const CVec f = random_state(g, rng);
                const CVec Lf = fattail::apply(op, f);
                const double nf = std::sqrt(inner(g, f, f).real());
                CHECK(std::abs(density(g, Lf)) <= 1e-8 * nf);
                CHECK(inner(g, Lf, f).real() <= 1e-10 * nf * nf);
            }
            CHECK(dissipativity_defect(op) <= 1e-10);
        }
    }
}

TEST_CASE("adjoint in the equilibrium-weighted space")
{
    std::mt19937_64 rng(5);
    for (const ModelParams& p : all_operators(1.5)) {
        const CollisionOperator op = assemble_operator(p, coarse_grid(p, 120));
        const VelocityGrid& g = *op.grid;
        const Mat Ls = adjoint_matrix(op);
        const CVec f = random_state(g, rng), h = random_state(g, rng);
        const CVec Ah = Ls.cast<cplx>() * h;
        const cplx lhs = inner(g, fattail::apply(op, f), h);
        const cplx rhs = inner(g, f, Ah);
        CHECK(std::abs(lhs - rhs) <= 1e-10 * std::abs(lhs) + 1e-14);
    }
}

TEST_CASE("Fokker-Planck Lyapunov identity")
{
    // F^{-1} L (F <v>^k) = k(d+gamma-k+2) <v>^{k-4} - k(gamma+2-k) <v>^{k-2}
    for (double gamma : {1.0, 3.0}) {
        for (double k : {0.5, 0.9}) {
            const ModelParams p = make_fokker_planck(1, gamma);
            const GridPtr grid = build_grid(p, 400);
            const CollisionOperator op = assemble_operator(p, grid);
            CVec f(grid->size());
            for (int i = 0; i < grid->size(); ++i) f[i] = grid->F[i] * std::pow(grid->jv[i], k);
            const CVec Lf = fattail::apply(op, f);
            double worst = 0.0;
            for (int i = 0; i < grid->size(); ++i) {
                // the outermost cells carry the zero-flux closure of the truncated domain
                if (std::abs(grid->nodes[i]) > 0.1 * grid->map.v_max) continue;
                const double J = grid->jv[i];
                const double exact = k * (3.0 + gamma - k) * std::pow(J, k - 4.0) - k * (gamma + 2.0 - k) * std::pow(J, k - 2.0);
                worst = std::max(worst, std::abs(Lf[i].real() / grid->F[i] - exact) / std::pow(J, k - 2.0));
            }
            CAPTURE(gamma);
            CAPTURE(k);
            CHECK(worst <= 1e-4);
        }
    }
}

TEST_CASE("separable scattering with beta = 0 is the relaxation operator")
{
    const ModelParams p = make_scattering(1, 1.0, 0.0);
    const CollisionOperator op = assemble_operator(p, coarse_grid(p, 200));
    const VelocityGrid& g = *op.grid;
    const Vec nu = collision_frequency(op);
    for (int i = 0; i < g.size(); ++i) CHECK(nu[i] == doctest::Approx(1.0).epsilon(1e-12));
    std::mt19937_64 rng(3);
    const CVec f = random_state(g, rng);
    // the kernel is normalized by the discrete mass of F
    const CVec expect = density(g, f) / g.mass(g.F) * g.F.cast<cplx>() - f;
    CHECK((fattail::apply(op, f) - expect).norm() <= 1e-12 * f.norm());
}

TEST_CASE("scattering gap is an equality for beta = 0")
{
    std::mt19937_64 rng(9);
    std::normal_distribution<double> N;
    const ModelParams p = make_scattering(1, 2.0, 0.0);
    const CollisionOperator op = assemble_operator(p, build_grid(p, 300));
    for (int trial = 0; trial < 10; ++trial) {
        Vec h(op.size());
        for (int i = 0; i < op.size(); ++i) h[i] = N(rng);
        const InequalitySides s = scattering_gap_sides(op, h);
        CHECK(std::abs(s.lhs - s.rhs) <= 1e-10 * s.rhs);
    }
}

TEST_CASE("scattering gap holds as an inequality for beta > 0")
{
    std::mt19937_64 rng(13);
    std::normal_distribution<double> N;
    for (ScatteringKernel kern : {ScatteringKernel::Separable, ScatteringKernel::PowerDifference}) {
        const ModelParams p = make_scattering(1, 2.0, 0.25, kern);
        const CollisionOperator op = assemble_operator(p, coarse_grid(p, 200));
        for (int trial = 0; trial < 10; ++trial) {
            Vec h(op.size());
            for (int i = 0; i < op.size(); ++i) h[i] = N(rng);
            const InequalitySides s = scattering_gap_sides(op, h);
            CHECK(s.lhs >= (1.0 - 1e-10) * s.rhs);
        }
    }
}

TEST_CASE("Hardy-Poincare inequality with constant d + gamma")
{
    std::mt19937_64 rng(21);
    std::normal_distribution<double> N;
    std::uniform_real_distribution<double> U(0.2, 5.0);
    for (double gamma : {0.5, 1.0, 2.0, 4.0}) {
        const GridPtr grid = build_grid(make_fokker_planck(1, gamma), 400);
        const VelocityGrid& g = *grid;
        const double C = hardy_poincare_constant(1, gamma);
        CHECK(C == doctest::Approx(1.0 + gamma));
        for (int trial = 0; trial < 50; ++trial) {
            const double a = N(rng), b = N(rng), c = N(rng), l = U(rng);
            Vec h(g.size());
            for (int i = 0; i < g.size(); ++i) {
                const double v = g.nodes[i];
                h[i] = a * std::tanh(v / l) + b * std::exp(-v * v / (l * l)) + c * v;
            }
            const InequalitySides s = hardy_poincare_sides(g, h);
            CHECK(s.lhs >= C * s.rhs * (1.0 - 1e-8));
        }
        // h = v attains the constant: int F = 1 and int v^2 F / <v>^2 = 1/(1+gamma)
        Vec h = g.nodes;
        const InequalitySides s = hardy_poincare_sides(g, h);
        CHECK(s.lhs / s.rhs == doctest::Approx(1.0 + gamma).epsilon(1e-6));
    }
    CHECK_THROWS_AS(hardy_poincare_constant(2, 1.0), DomainError);
}

TEST_CASE("Hardy-Poincare with constant 2(d + gamma) fails for h = v" * doctest::should_fail())
{
    const double gamma = 1.0;
    const GridPtr grid = build_grid(make_fokker_planck(1, gamma), 400);
    const InequalitySides s = hardy_poincare_sides(*grid, grid->nodes);
    CHECK(s.lhs >= 2.0 * (1.0 + gamma) * s.rhs);
}

TEST_CASE("half Laplacian of the Poisson kernel")
{
    const ModelParams p = make_fractional(1, 1.0, 1.0);
    const GridPtr grid = build_grid(p, 400);
    CVec P(grid->size());
    for (int i = 0; i < grid->size(); ++i) P[i] = poisson_kernel(grid->nodes[i]);
    const CVec D = fractional_laplacian(*grid, P, 1.0);
    double worst = 0.0;
    for (int i = 0; i < grid->size(); ++i) {
        const double v = grid->nodes[i];
        if (std::abs(v) > 10.0) continue;
        // (-Delta)^{1/2} P_a = -d/da P_a for P_a = a/(pi(a^2+v^2)); the library applies Delta^{1/2} = -(-Delta)^{1/2}
        const double exact = (v * v - 1.0) / (std::numbers::pi * (1.0 + v * v) * (1.0 + v * v));
        CHECK(poisson_half_laplacian(v) == doctest::Approx(exact).epsilon(1e-13));
        worst = std::max(worst, std::abs(D[i].real() - exact) / std::abs(exact));
    }
    CHECK(worst <= 1e-4);
}

TEST_CASE("force field balances the fractional equilibrium")
{
    for (auto [gamma, sigma] : {std::pair{1.0, 1.0}, std::pair{1.5, 0.7}}) {
        const ModelParams p = make_fractional(1, gamma, sigma);
        const GridPtr grid = build_grid(p, 400);
        const ForceField ff = build_force_field(p, grid);
        CAPTURE(gamma);
        CHECK(ff.residual <= 1e-3);
        double gmin = 1e300, gmax = 0.0;
        for (int i = 0; i < grid->size(); ++i) {
            if (std::abs(grid->nodes[i]) <= 1.0) continue;
            gmin = std::min(gmin, ff.G_values[i]);
            gmax = std::max(gmax, ff.G_values[i]);
        }
        CHECK(gmin > 0.0);
        CHECK(std::isfinite(gmax));
    }
}

TEST_CASE("asymmetric kernel breaks dissipativity")
{
    const ModelParams p = make_scattering(1, 1.0, 0.0);
    OperatorOptions bad;
    bad.asymmetry = 0.05;
    CHECK(dissipativity_defect(assemble_operator(p, coarse_grid(p, 200), bad)) > 1e-6);
}
