#include "fattail/coefficients.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <limits>
#include <numbers>

namespace fattail {

double SymbolFunctions::phi(double xi, double v_norm) const
{
    const double jv = japanese(v_norm);
    const double c = std::abs(1.0 + beta);
    return std::pow(jv, beta) / (1.0 + std::pow(jv, 2.0 * c) * xi * xi);
}

double SymbolFunctions::psi(double v_norm) const
{
    return 1.0 / (1.0 + v_norm * v_norm);
}

double default_eta(const ModelParams& params)
{
    const double beta = params.beta();
    return params.gamma > beta ? 0.0 - beta : -0.5 * params.gamma;
}

namespace {

// Sum with the geometric continuation of the outermost terms.
double closed_sum(const Vec& terms, bool both_ends)
{
    const int n = static_cast<int>(terms.size());
    double s = terms.sum();
    auto closure = [&](int last, int prev) {
        if (terms[prev] == 0.0) return 0.0;
        const double r = terms[last] / terms[prev];
        return (r > 0.0 && r < 1.0) ? terms[last] * r / (1.0 - r) : 0.0;
    };
    s += closure(n - 1, n - 2);
    if (both_ends) s += closure(0, 1);
    return s;
}

void check_eta(const ModelParams& params, double eta)
{
    if (!(eta > -params.gamma && eta < params.gamma))
        throw DomainError("eta must lie in (-gamma, gamma)");
    if (eta < -params.beta() - 1e-14)
        throw DomainError("eta must be at least -beta");
}

// Mean of |theta . e|^k over the unit sphere of R^d.
double angular_mean(int d, double k)
{
    return std::exp(std::lgamma(0.5 * d) + std::lgamma(0.5 * (k + 1.0)) -
                    0.5 * std::log(std::numbers::pi) - std::lgamma(0.5 * (d + k)));
}

}  // namespace

GridPtr coefficient_grid(const ModelParams& params, double xi_min, int n)
{
    if (!(xi_min > 0.0)) throw DomainError("xi_min must be positive");
    const double c = std::abs(1.0 + params.beta());
    GridOptions opts;
    const double scale_v = std::pow(xi_min, -1.0 / c) * 1e8;
    opts.v_floor = std::min(std::max(opts.v_floor, scale_v), 1e250);
    return build_grid(params, n, opts);
}

CoefficientSet compute_coefficients(const CollisionOperator& op, double xi, double eta)
{
    const ModelParams& p = op.params;
    check_eta(p, eta);
    const VelocityGrid& g = *op.grid;
    if (g.map.kind != GridKind::Line) return compute_coefficients_radial(p, g, std::abs(xi), eta);
    const int n = g.size();
    const SymbolFunctions sym{p.beta(), eta};

    Vec l0(n), l1(n), tl0(n), tl1(n), m2(n), tm1(n), tm2(n);
    Vec gmu(n), gla(n);
    for (int i = 0; i < n; ++i) {
        const double v = g.nodes[i];
        const double w = g.weights[i];
        const double F = g.F[i];
        const double psi = sym.psi(v);
        const double phi = sym.phi(xi, v);
        const double a = std::abs(v * xi);
        const double dual = std::pow(g.jv[i], -eta);
        l0[i] = w * psi * F;
        l1[i] = w * a * psi * F;
        tl0[i] = w * psi * psi * F * dual;
        tl1[i] = w * a * a * psi * psi * F * dual;
        m2[i] = w * a * a * phi * F;
        tm1[i] = w * a * a * phi * phi * F * dual;
        tm2[i] = w * a * a * a * a * phi * phi * F * dual;
        gmu[i] = v * xi * phi * F;
        gla[i] = psi * F;
    }

    CoefficientSet c;
    c.xi = xi;
    c.eta = eta;
    c.lambda0 = closed_sum(l0, true);
    // |v xi| has a kink at v = 0; remove the leading Euler-Maclaurin term of the
    // sinh-map rule there (midpoint when 0 falls between nodes, trapezoid otherwise)
    const double slope0 = g.map.scale * g.map.scale * std::abs(xi) * sym.psi(0.0) * equilibrium(1, g.gamma, 0.0);
    const double kink = g.map.h * g.map.h * slope0 * (n % 2 == 0 ? -1.0 / 12.0 : 1.0 / 6.0);
    c.lambda1 = closed_sum(l1, true) + kink;
    c.tlambda0 = std::sqrt(closed_sum(tl0, true));
    c.tlambda1 = std::sqrt(closed_sum(tl1, true));
    c.mu2 = closed_sum(m2, true);
    c.tmu1 = std::sqrt(closed_sum(tm1, true));
    c.tmu2 = std::sqrt(closed_sum(tm2, true));

    const Mat Ls = adjoint_matrix(op);
    const Vec dual = g.jv.array().pow(-eta);
    auto norm = [&](const Vec& f) {
        return std::sqrt((g.mu_weights.array() * dual.array() * f.array().square()).sum());
    };
    c.muL = norm(Ls * gmu);
    c.lambdaL = norm(Ls * gla);
    return c;
}

CoefficientSet compute_coefficients_radial(const ModelParams& p, const VelocityGrid& g,
                                           double xi, double eta)
{
    check_eta(p, eta);
    if (g.map.kind != GridKind::Radial) throw GridError("radial coefficients need a radial grid");
    const int n = g.size();
    const int d = g.d;
    const SymbolFunctions sym{p.beta(), eta};
    const bool separable =
        p.op.kind == OperatorKind::Scattering && p.op.kernel == ScatteringKernel::Separable;

    const double A1 = angular_mean(d, 1.0);
    const double A2 = angular_mean(d, 2.0);
    const double A4 = angular_mean(d, 4.0);

    Vec l0(n), l1(n), tl0(n), tl1(n), m2(n), tm1(n), tm2(n), za(n), zp(n);
    for (int i = 0; i < n; ++i) {
        const double r = g.nodes[i];
        const double w = g.weights[i];
        const double F = g.F[i];
        const double psi = sym.psi(r);
        const double phi = sym.phi(xi, r);
        const double a = r * xi;
        const double dual = std::pow(g.jv[i], -eta);
        l0[i] = w * psi * F;
        l1[i] = w * A1 * a * psi * F;
        tl0[i] = w * psi * psi * F * dual;
        tl1[i] = w * A2 * a * a * psi * psi * F * dual;
        m2[i] = w * A2 * a * a * phi * F;
        tm1[i] = w * A2 * a * a * phi * phi * F * dual;
        tm2[i] = w * A4 * a * a * a * a * phi * phi * F * dual;
        za[i] = w * std::pow(g.jv[i], -p.beta()) * F;
        zp[i] = w * std::pow(g.jv[i], -p.beta()) * psi * F;
    }

    CoefficientSet c;
    c.xi = xi;
    c.eta = eta;
    c.lambda0 = closed_sum(l0, false);
    c.lambda1 = closed_sum(l1, false);
    c.tlambda0 = std::sqrt(closed_sum(tl0, false));
    c.tlambda1 = std::sqrt(closed_sum(tl1, false));
    c.mu2 = closed_sum(m2, false);
    c.tmu1 = std::sqrt(closed_sum(tm1, false));
    c.tmu2 = std::sqrt(closed_sum(tm2, false));

    if (separable) {
        // with b = a(v) a(v') / Z the operator is self-adjoint, kills the
        // angular mean of odd functions and maps radial g to a (F <a g>/Z - g)
        const double Z = closed_sum(za, false);
        const double apsi = closed_sum(zp, false) / Z;
        Vec mu_terms(n), la_terms(n);
        for (int i = 0; i < n; ++i) {
            const double r = g.nodes[i];
            const double a = std::pow(g.jv[i], -p.beta());
            const double F = g.F[i];
            const double dual = std::pow(g.jv[i], -eta);
            const double gm = a * r * xi * sym.phi(xi, r) * F;
            const double gl = a * (F * apsi - sym.psi(r) * F);
            mu_terms[i] = g.weights[i] / F * dual * A2 * gm * gm;
            la_terms[i] = g.weights[i] / F * dual * gl * gl;
        }
        c.muL = std::sqrt(closed_sum(mu_terms, false));
        c.lambdaL = std::sqrt(closed_sum(la_terms, false));
    } else {
        c.muL = std::numeric_limits<double>::quiet_NaN();
        c.lambdaL = std::numeric_limits<double>::quiet_NaN();
    }
    return c;
}

double K_bound(const CoefficientSet& c)
{
    if (!(c.mu2 > 0.0)) throw DomainError("K needs mu2 > 0");
    const double cross = c.tlambda0 * c.mu2 + c.lambda0 * c.tmu2 + c.lambda0 * c.muL;
    return c.tlambda0 * c.tmu2 + c.tlambda1 * c.tmu1 + c.tlambda0 * c.muL + c.lambdaL * c.tmu1 +
           cross * cross / (2.0 * c.lambda0 * c.mu2);
}

Mu2Reference mu2_asymptotic_reference(const ModelParams& params, double xi)
{
    const double gamma = params.gamma;
    const double beta = params.beta();
    const int d = params.d;
    const double c = std::abs(1.0 + beta);
    Mu2Reference ref;
    ref.exponent = std::min(2.0, 2.0 + (gamma - beta - 2.0) / c);
    ref.log_corrected = std::abs(gamma - 2.0 - beta) < kCriticalTolerance;
    ref.statement_constant = 1.0 / (d * c);
    ref.derivation_constant = unit_sphere_area(d) * normalization_constant(d, gamma) / (c * d);
    const double ax = std::abs(xi);
    ref.value_shape = ref.log_corrected ? -ax * ax * std::log(ax) : std::pow(ax, ref.exponent);
    return ref;
}

double tmu_asymptotic_exponent(const ModelParams& params, double eta, int k, bool* log_case)
{
    const double beta = params.beta();
    const double c = std::abs(1.0 + beta);
    const double excess = params.gamma + eta - 2.0 * beta - 2.0 * k;
    if (log_case) *log_case = std::abs(excess) < kCriticalTolerance;
    return std::min(static_cast<double>(k), k + excess / (2.0 * c));
}

namespace {

void check_diffusion_regime(const ModelParams& p)
{
    if (p.op.kind != OperatorKind::Scattering || p.op.kernel != ScatteringKernel::Separable)
        throw RegimeError("the diffusion limit is set up for the separable scattering kernel");
    if (!(std::min(1.0, p.gamma) + p.beta() > 0.0))
        throw RegimeError("the diffusion limit needs min(1, gamma) + beta > 0");
}

template <class G>
double sphere_average_integral(int d, G&& fn)
{
    // integral over the unit sphere of fn(cos theta), theta the angle to e
    if (d == 1) return fn(1.0) + fn(-1.0);
    // the integrand peaks in a layer of width ~1/r around the equator
    boost::math::quadrature::tanh_sinh<double> ts;
    auto g = [&](double th) { return fn(std::cos(th)) * std::pow(std::sin(th), d - 2); };
    const double half = 0.5 * std::numbers::pi;
    const double s = ts.integrate(g, 0.0, half, 1e-13) + ts.integrate(g, half, std::numbers::pi, 1e-13);
    return unit_sphere_area(d - 1) * s;
}

}  // namespace

double diffusion_limit_coeff(const ModelParams& params, const VelocityGrid& g, double xi, double eps)
{
    check_diffusion_regime(params);
    if (!(eps > 0.0)) throw DomainError("eps must be positive");
    const double beta = params.beta();
    const double alpha = alpha_exponent(params.gamma, beta);
    const int n = g.size();
    Vec terms(n);
    for (int i = 0; i < n; ++i) {
        const double r = g.nodes[i];
        const double a = std::pow(g.jv[i], -beta);
        const double den0 = std::pow(g.jv[i], -2.0 * beta);
        if (g.map.kind == GridKind::Line) {
            const double q = r * xi;
            terms[i] = g.weights[i] * a * q * q * g.F[i] / (den0 + eps * eps * q * q);
        } else {
            // weights already carry the sphere area
            const double ang = sphere_average_integral(g.d, [&](double ct) {
                const double q = r * xi * ct;
                return q * q / (den0 + eps * eps * q * q);
            }) / unit_sphere_area(g.d);
            terms[i] = g.weights[i] * a * g.F[i] * ang;
        }
    }
    return std::pow(eps, 2.0 - alpha) * closed_sum(terms, g.map.kind == GridKind::Line);
}

double diffusion_kappa(const ModelParams& params)
{
    check_diffusion_regime(params);
    const double gamma = params.gamma;
    const double beta = params.beta();
    const int d = params.d;
    if (!(gamma < 2.0 + beta)) throw RegimeError("kappa is finite only for gamma < 2 + beta");
    const double c = normalization_constant(d, gamma);
    auto radial = [&](double r) {
        if (r <= 0.0) return 0.0;
        const double ang = sphere_average_integral(d, [&](double ct) {
            return ct * ct / (std::pow(r, -2.0 * beta) + r * r * ct * ct);
        });
        return std::pow(r, 1.0 - beta - gamma) * ang;
    };
    boost::math::quadrature::tanh_sinh<double> ts;
    boost::math::quadrature::exp_sinh<double> es;
    const double inner = ts.integrate(radial, 0.0, 1.0, 1e-12);
    const double outer = es.integrate([&](double u) { return radial(1.0 + u); }, 1e-12);
    return c * (inner + outer);
}

double diffusion_second_moment(const ModelParams& params)
{
    check_diffusion_regime(params);
    const double gamma = params.gamma;
    const double beta = params.beta();
    const int d = params.d;
    if (!(gamma > 2.0 + beta)) throw RegimeError("the second moment is finite only for gamma > 2 + beta");
    const double c = normalization_constant(d, gamma);
    boost::math::quadrature::exp_sinh<double> es;
    const double radial = es.integrate(
        [&](double r) { return std::pow(r, d + 1.0) * std::pow(1.0 + r * r, 0.5 * (beta - d - gamma)); },
        1e-12);
    return c * unit_sphere_area(d) * radial / d;
}

}  // namespace fattail
