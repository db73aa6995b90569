#include "fattail/collision.hpp"

#include <boost/math/special_functions/zeta.hpp>
#include <cmath>
#include <fstream>
#include <iomanip>

namespace fattail {

namespace {

// Finite-difference weights (Fornberg) for derivatives 0..m at z on nodes x.
Mat fornberg(double z, const Vec& x, int m)
{
    const int n = static_cast<int>(x.size());
    Mat c = Mat::Zero(n, m + 1);
    double c1 = 1.0;
    double c4 = x[0] - z;
    c(0, 0) = 1.0;
    for (int i = 1; i < n; ++i) {
        const int mn = std::min(i, m);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = x[i] - z;
        for (int j = 0; j < i; ++j) {
            const double c3 = x[i] - x[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k)
                    c(i, k) = c1 * (k * c(i - 1, k - 1) - c5 * c(i - 1, k)) / c2;
                c(i, 0) = -c1 * c5 * c(i - 1, 0) / c2;
            }
            for (int k = mn; k >= 1; --k) c(j, k) = (c4 * c(j, k) - k * c(j, k - 1)) / c3;
            c(j, 0) = c4 * c(j, 0) / c3;
        }
        c1 = c2;
    }
    return c;
}

Mat scattering_kernel(const ModelParams& p, const VelocityGrid& g, double& Z)
{
    const int n = g.size();
    const double beta = p.beta();
    Mat b(n, n);
    if (p.op.kernel == ScatteringKernel::Separable) {
        Vec a(n);
        for (int i = 0; i < n; ++i) a[i] = std::pow(g.jv[i], -beta);
        Z = 0.0;
        for (int i = 0; i < n; ++i) Z += g.weights[i] * a[i] * g.F[i];
        b = a * a.transpose() / Z;
    } else {
        Z = 1.0;
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j)
                b(i, j) = (i == j) ? 0.0 : std::pow(std::abs(g.nodes[i] - g.nodes[j]), -beta);
        }
    }
    return b;
}

CollisionOperator assemble_fokker_planck(const ModelParams& p, GridPtr grid)
{
    const VelocityGrid& g = *grid;
    if (g.map.kind != GridKind::Line) throw GridError("operators need a d = 1 grid");
    const int n = g.size();
    const Mat D = staggered_derivative(g);
    Vec C(n - 1);
    for (int e = 0; e < n - 1; ++e) {
        const double te = 0.5 * (g.t[e] + g.t[e + 1]);
        const double ve = g.map.scale * std::sinh(te);
        const double vte = g.map.scale * std::cosh(te);
        C[e] = g.map.h * equilibrium(1, g.gamma, ve) / vte;
    }
    Mat K = D.transpose() * C.asDiagonal() * D;
    CollisionOperator op;
    op.kind = OperatorKind::FokkerPlanck;
    op.params = p;
    op.grid = grid;
    op.matrix = -(g.weights.cwiseInverse().asDiagonal() * K * g.F.cwiseInverse().asDiagonal());
    return op;
}

CollisionOperator assemble_scattering(const ModelParams& p, GridPtr grid, const OperatorOptions& opts)
{
    const VelocityGrid& g = *grid;
    const int n = g.size();
    CollisionOperator op;
    op.kind = OperatorKind::Scattering;
    op.params = p;
    op.grid = grid;
    const Mat b = scattering_kernel(p, g, op.Z);
    op.nu_values.resize(n);
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += b(i, j) * g.weights[j] * g.F[j];
        op.nu_values[i] = s;
    }
    op.matrix.resize(n, n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            if (i == j) continue;
            double bij = b(i, j);
            if (opts.asymmetry != 0.0) bij *= 1.0 + opts.asymmetry * (i < j ? 1.0 : -1.0);
            op.matrix(i, j) = bij * g.weights[j] * g.F[i];
        }
    }
    for (int j = 0; j < n; ++j) {
        if (opts.asymmetry == 0.0) {
            op.matrix(j, j) = b(j, j) * g.weights[j] * g.F[j] - op.nu_values[j];
        } else {
            double s = 0.0;
            for (int i = 0; i < n; ++i)
                if (i != j) s += g.weights[i] * op.matrix(i, j);
            op.matrix(j, j) = -s / g.weights[j];
        }
    }
    op.pair_weights.resize(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            op.pair_weights(i, j) = b(i, j) * g.weights[i] * g.weights[j] * g.F[i] * g.F[j];
    return op;
}

CollisionOperator assemble_fractional(const ModelParams& p, GridPtr grid, const OperatorOptions& opts)
{
    const VelocityGrid& g = *grid;
    if (g.map.kind != GridKind::Line) throw GridError("operators need a d = 1 grid");
    const int n = g.size();
    const double sigma = p.sigma();
    const double C = fractional_constant(1, sigma);
    Mat A = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double a = C * g.weights[i] * g.weights[j] *
                             std::pow(g.nodes[j] - g.nodes[i], -1.0 - sigma);
            A(i, j) = A(j, i) = a;
        }
    }
    if (opts.neighbor_correction) {
        // the pair sum misses the near-diagonal part of the singular integral;
        // its leading term is a zeta-weighted nearest-neighbour coupling
        const double kappa = -C * boost::math::zeta(sigma - 1.0);
        const double h = g.map.h;
        for (int i = 0; i + 1 < n; ++i) {
            const double vt = g.map.scale * std::cosh(0.5 * (g.t[i] + g.t[i + 1]));
            const double b = kappa * std::pow(h * vt, 1.0 - sigma);
            A(i, i + 1) += b;
            A(i + 1, i) += b;
        }
    }
    Mat lap = A;
    for (int i = 0; i < n; ++i) lap(i, i) = -A.row(i).sum();
    lap = g.weights.cwiseInverse().asDiagonal() * lap;

    const Vec lapF = lap * g.F;
    // discrete flux through the cell faces; summed from the nearer end
    Vec J = Vec::Zero(n + 1);
    const int mid = n / 2;
    for (int i = 0; i < mid; ++i) J[i + 1] = J[i] - g.weights[i] * lapF[i];
    Vec Jr = Vec::Zero(n + 1);
    for (int i = n - 1; i >= mid; --i) Jr[i] = Jr[i + 1] + g.weights[i] * lapF[i];
    for (int i = mid + 1; i < n; ++i) J[i] = Jr[i];
    J[n] = 0.0;

    Mat drift = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        const double jp = J[i + 1];
        const double jm = J[i];
        const double inv = 1.0 / (2.0 * g.weights[i]);
        drift(i, i) += (jp - jm) * inv / g.F[i];
        if (i + 1 < n) drift(i, i + 1) += jp * inv / g.F[i + 1];
        if (i > 0) drift(i, i - 1) -= jm * inv / g.F[i - 1];
    }

    CollisionOperator op;
    op.kind = OperatorKind::FractionalFP;
    op.params = p;
    op.grid = grid;
    op.matrix = lap + drift;
    op.pair_weights = A;
    op.E_values.resize(n);
    for (int i = 0; i < n; ++i) op.E_values[i] = 0.5 * (J[i] + J[i + 1]) / g.F[i];
    return op;
}

}  // namespace

Mat staggered_derivative(const VelocityGrid& g)
{
    const int n = g.size();
    const double h = g.map.h;
    Mat D = Mat::Zero(n - 1, n);
    for (int e = 0; e < n - 1; ++e) {
        const int j = e;
        if (j >= 2 && j + 3 <= n - 1) {
            const double c[3] = {2250.0, -125.0, 9.0};
            for (int m = 0; m < 3; ++m) {
                D(e, j + 1 + m) += c[m] / (1920.0 * h);
                D(e, j - m) -= c[m] / (1920.0 * h);
            }
        } else if (j >= 1 && j + 2 <= n - 1) {
            D(e, j + 1) += 27.0 / (24.0 * h);
            D(e, j) -= 27.0 / (24.0 * h);
            D(e, j + 2) -= 1.0 / (24.0 * h);
            D(e, j - 1) += 1.0 / (24.0 * h);
        } else {
            D(e, j + 1) += 1.0 / h;
            D(e, j) -= 1.0 / h;
        }
    }
    return D;
}

Mat centered_derivative(const VelocityGrid& g, int order, int width)
{
    const int n = g.size();
    Mat D = Mat::Zero(n, n);
    const int half = width / 2;
    for (int i = 0; i < n; ++i) {
        int start = std::clamp(i - half, 0, n - width);
        Vec x(width);
        for (int k = 0; k < width; ++k) x[k] = g.t[start + k];
        const Mat c = fornberg(g.t[i], x, order);
        for (int k = 0; k < width; ++k) D(i, start + k) = c(k, order);
    }
    return D;
}

CollisionOperator assemble_operator(const ModelParams& params, GridPtr grid, const OperatorOptions& opts)
{
    params.validate();
    if (params.d != 1) throw DomainError("collision operators are assembled for d = 1 only");
    if (grid->d != 1 || grid->gamma != params.gamma)
        throw GridError("grid does not match the model parameters");
    switch (params.op.kind) {
    case OperatorKind::FokkerPlanck: return assemble_fokker_planck(params, grid);
    case OperatorKind::Scattering: return assemble_scattering(params, grid, opts);
    case OperatorKind::FractionalFP: return assemble_fractional(params, grid, opts);
    }
    throw DomainError("unknown operator");
}

CVec apply(const CollisionOperator& op, const CVec& f)
{
    CVec out(f.size());
    out.real() = op.matrix * f.real();
    out.imag() = op.matrix * f.imag();
    return out;
}

WeightedVector apply(const CollisionOperator& op, const WeightedVector& f)
{
    if (f.grid != op.grid) throw GridError("vector and operator live on different grids");
    return WeightedVector{f.grid, apply(op, f.values), f.weight_exponent};
}

static WeightedVector apply_checked(const CollisionOperator& op, const WeightedVector& f, OperatorKind kind)
{
    if (op.kind != kind) throw DomainError("operator kind mismatch");
    return apply(op, f);
}

WeightedVector apply_L1(const CollisionOperator& op, const WeightedVector& f)
{
    return apply_checked(op, f, OperatorKind::FokkerPlanck);
}

WeightedVector apply_L2(const CollisionOperator& op, const WeightedVector& f)
{
    return apply_checked(op, f, OperatorKind::Scattering);
}

WeightedVector apply_L3(const CollisionOperator& op, const WeightedVector& f)
{
    return apply_checked(op, f, OperatorKind::FractionalFP);
}

Mat adjoint_matrix(const CollisionOperator& op)
{
    const VelocityGrid& g = *op.grid;
    return g.F.cwiseQuotient(g.weights).asDiagonal() * op.matrix.transpose() *
           g.weights.cwiseQuotient(g.F).asDiagonal();
}

Vec collision_frequency(const CollisionOperator& op)
{
    if (op.kind != OperatorKind::Scattering) throw DomainError("collision frequency is a scattering quantity");
    return op.nu_values;
}

double dirichlet_fokker_planck(const VelocityGrid& g, const Vec& h)
{
    const Mat D = staggered_derivative(g);
    const Vec dh = D * h;
    double s = 0.0;
    for (int e = 0; e < g.size() - 1; ++e) {
        const double te = 0.5 * (g.t[e] + g.t[e + 1]);
        const double ve = g.map.scale * std::sinh(te);
        const double vte = g.map.scale * std::cosh(te);
        s += g.map.h * equilibrium(1, g.gamma, ve) / vte * dh[e] * dh[e];
    }
    return s;
}

double dirichlet_scattering(const CollisionOperator& op, const Vec& h)
{
    const VelocityGrid& g = *op.grid;
    const ModelParams& p = op.params;
    const int n = g.size();
    const double beta = p.beta();
    double s = 0.0;
    if (p.op.kernel == ScatteringKernel::Separable) {
        double Z = 0.0;
        for (int i = 0; i < n; ++i) Z += g.weights[i] * std::pow(g.jv[i], -beta) * g.F[i];
        for (int i = 0; i < n; ++i) {
            const double ai = std::pow(g.jv[i], -beta) * g.weights[i] * g.F[i];
            for (int j = 0; j < n; ++j) {
                const double aj = std::pow(g.jv[j], -beta) * g.weights[j] * g.F[j];
                const double d = h[i] - h[j];
                s += ai * aj * d * d;
            }
        }
        return 0.5 * s / Z;
    }
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            const double d = h[i] - h[j];
            s += std::pow(std::abs(g.nodes[i] - g.nodes[j]), -beta) * g.weights[i] * g.weights[j] *
                 g.F[i] * g.F[j] * d * d;
        }
    }
    return 0.5 * s;
}

double dirichlet_fractional(const CollisionOperator& op, const Vec& h)
{
    const VelocityGrid& g = *op.grid;
    const int n = g.size();
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            const double d = h[i] - h[j];
            s += op.pair_weights(i, j) * g.F[j] * d * d;
        }
    }
    return 0.5 * s;
}

double hardy_poincare_constant(int d, double gamma)
{
    if (d != 1) throw DomainError("the Hardy-Poincare constant is established here for d = 1");
    // h = v is extremal; the continuous spectrum starts at (2+gamma)^2/4 >= 1+gamma
    return d + gamma;
}

InequalitySides hardy_poincare_sides(const VelocityGrid& g, const Vec& h)
{
    InequalitySides s;
    s.lhs = dirichlet_fokker_planck(g, h);
    double num = 0.0;
    double den = 0.0;
    for (int i = 0; i < g.size(); ++i) {
        const double w = g.weights[i] * g.F[i] / (g.jv[i] * g.jv[i]);
        num += w * h[i];
        den += w;
    }
    const double mean = num / den;
    double r = 0.0;
    for (int i = 0; i < g.size(); ++i) {
        const double w = g.weights[i] * g.F[i] / (g.jv[i] * g.jv[i]);
        r += w * (h[i] - mean) * (h[i] - mean);
    }
    s.rhs = r;
    return s;
}

InequalitySides scattering_gap_sides(const CollisionOperator& op, const Vec& h)
{
    if (op.kind != OperatorKind::Scattering) throw DomainError("gap inequality needs a scattering operator");
    const VelocityGrid& g = *op.grid;
    const double beta = op.params.beta();
    const int n = g.size();
    InequalitySides s;
    s.lhs = 2.0 * dirichlet_scattering(op, h);
    // lower kernel bound b >= Z^{-1} <v>^{-beta} <v'>^{-beta}
    double Z = op.Z;
    if (op.params.op.kernel == ScatteringKernel::PowerDifference) Z = std::pow(2.0, beta);
    double mass = 0.0;
    double num = 0.0;
    for (int i = 0; i < n; ++i) {
        const double w = g.weights[i] * g.F[i] * std::pow(g.jv[i], -beta);
        mass += w;
        num += w * h[i];
    }
    const double mean = num / mass;
    double var = 0.0;
    for (int i = 0; i < n; ++i) {
        const double w = g.weights[i] * g.F[i] * std::pow(g.jv[i], -beta);
        var += w * (h[i] - mean) * (h[i] - mean);
    }
    s.rhs = 2.0 / Z * mass * var;
    return s;
}

void write_operator_csv(const CollisionOperator& op, const std::string& path)
{
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "# operator=" << to_string(op.kind) << " n=" << op.size() << "\n";
    out << std::setprecision(17);
    for (int i = 0; i < op.size(); ++i) {
        for (int j = 0; j < op.size(); ++j) {
            if (j) out << ',';
            out << op.matrix(i, j);
        }
        out << '\n';
    }
}

void write_force_field_csv(const VelocityGrid& g, const ForceField& ff, const std::string& path)
{
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "v,E,G\n" << std::setprecision(17);
    for (int i = 0; i < g.size(); ++i)
        out << g.nodes[i] << ',' << ff.E_values[i] << ',' << ff.G_values[i] << '\n';
}

}  // namespace fattail
