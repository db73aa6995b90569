#include <boost/math/quadrature/exp_sinh.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>

#include "doctest.h"
#include "fattail/grid.hpp"

using namespace fattail;

namespace {

double line_integral(double gamma, double k)
{
    boost::math::quadrature::exp_sinh<double> q;
    const double c = normalization_constant(1, gamma);
    return 2.0 * q.integrate([&](double v) { return std::pow(1.0 + v * v, 0.5 * (k - 1.0 - gamma)) * c; });
}

CVec random_state(const VelocityGrid& g, unsigned seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> N;
    CVec f(g.size());
    for (int i = 0; i < g.size(); ++i) f[i] = g.F[i] * cplx(N(rng), N(rng));
    return f;
}

}  // namespace

TEST_CASE("grid integrates the equilibrium to one")
{
    for (double gamma : {0.5, 1.0, 2.0, 4.0}) {
        CAPTURE(gamma);
        const GridPtr g = build_grid(make_scattering(1, gamma, 0.0), 400);
        CHECK(normalization_error(*g) < 1e-8);
        CHECK(g->size() == 400);
        for (int i = 0; i < g->size(); ++i) CHECK(g->nodes[i] == -g->nodes[g->size() - 1 - i]);
    }
}

TEST_CASE("radial grids integrate over R^d")
{
    for (int d : {2, 3}) {
        const GridPtr g = build_grid(make_scattering(d, 1.5, 0.0), 600);
        CAPTURE(d);
        CHECK(normalization_error(*g) < 1e-7);
    }
}

TEST_CASE("moments against independent quadrature")
{
    for (double gamma : {1.0, 3.0}) {
        for (double k : {0.0, 0.5, 0.9}) {
            CAPTURE(gamma);
            CAPTURE(k);
            const double oracle = line_integral(gamma, k);
            CHECK(equilibrium_moment(gamma, k) == doctest::Approx(oracle).epsilon(1e-10));
            const GridPtr g = build_grid(make_scattering(1, gamma, 0.0), 400);
            CHECK(moment(*g, k) == doctest::Approx(oracle).epsilon(1e-6));
        }
    }
    CHECK_THROWS_AS(equilibrium_moment(1.0, 1.0), DomainError);
}

TEST_CASE("tail mass of the equilibrium")
{
    boost::math::quadrature::exp_sinh<double> q;
    for (double gamma : {0.5, 1.0, 3.0}) {
        for (double V : {1.0, 10.0, 1e3}) {
            const double c = normalization_constant(1, gamma);
            const double oracle = 2.0 * q.integrate([&](double u) { return c * std::pow(1.0 + (V + u) * (V + u), -0.5 * (1.0 + gamma)); });
            CHECK(equilibrium_tail_mass(gamma, V) == doctest::Approx(oracle).epsilon(1e-9));
        }
    }
}

TEST_CASE("projection onto the equilibrium")
{
    const GridPtr grid = build_grid(make_scattering(1, 1.0, 0.0), 400);
    const VelocityGrid& g = *grid;
    const CVec f = random_state(g, 7);
    const CVec P = project_pi(g, f);
    const CVec PP = project_pi(g, P);
    CHECK((PP - P).norm() <= 1e-12 * P.norm());
    CHECK(std::abs(density(g, f - P)) <= 1e-12 * std::abs(density(g, f)) + 1e-14);
    CHECK(std::abs(inner(g, f - P, P)) <= 1e-12 * inner(g, f, f).real());
    // the weighted projection keeps the weighted moment
    const CVec Pk = project_pi_k(g, f, 0.5);
    CVec wf(g.size()), wp(g.size());
    for (int i = 0; i < g.size(); ++i) {
        wf[i] = std::sqrt(g.jv[i]) * f[i];
        wp[i] = std::sqrt(g.jv[i]) * Pk[i];
    }
    CHECK(std::abs(integrate(g, wf) - integrate(g, wp)) <= 1e-10 * std::abs(integrate(g, wf)));
}

TEST_CASE("odd integrands cancel on a wide grid")
{
    // gamma < 1: the first absolute moment diverges and the grid reaches far out
    const GridPtr grid = build_grid(make_scattering(1, 0.3, 0.0), 400);
    const VelocityGrid& g = *grid;
    CVec odd(g.size());
    for (int i = 0; i < g.size(); ++i) odd[i] = g.nodes[i] * g.F[i];
    CHECK(std::abs(integrate(g, odd)) == 0.0);
}

TEST_CASE("grid CSV round trip")
{
    const ModelParams p = make_scattering(1, 1.5, 0.0);
    const GridPtr g = build_grid(p, 200, 0.7);
    const auto path = (std::filesystem::temp_directory_path() / "fattail_grid_roundtrip.csv").string();
    write_grid_csv(*g, path);
    const GridPtr r = read_grid_csv(path, p);
    REQUIRE(r->size() == g->size());
    CHECK((r->nodes - g->nodes).cwiseAbs().maxCoeff() == 0.0);
    CHECK((r->weights - g->weights).cwiseAbs().maxCoeff() == 0.0);
    CHECK((r->F - g->F).cwiseAbs().maxCoeff() <= 1e-15);
    CHECK(r->map.scale == doctest::Approx(0.7).epsilon(1e-10));
    CHECK(r->map.h == doctest::Approx(g->map.h).epsilon(1e-10));
    CHECK_THROWS_AS(read_grid_csv(path, make_scattering(1, 2.0, 0.0)), GridError);
    std::remove(path.c_str());
}

TEST_CASE("weighted norms")
{
    const GridPtr grid = build_grid(make_scattering(1, 2.0, 0.0), 400);
    const VelocityGrid& g = *grid;
    const CVec F = g.F.cast<cplx>();
    // |F|^2 in L^2(<v>^k dmu) is the k-th moment
    CHECK(weighted_norm2(g, F, 0.5) == doctest::Approx(line_integral(2.0, 0.5)).epsilon(1e-6));
    CHECK(weighted_norm(g, F, 0.0) == doctest::Approx(1.0).epsilon(1e-8));
}
