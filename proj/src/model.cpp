#include "fattail/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace fattail {

namespace {

bool finite_positive(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

double ModelParams::beta() const
{
    switch (op.kind) {
    case OperatorKind::FokkerPlanck: return 2.0;
    case OperatorKind::Scattering: return op.beta;
    case OperatorKind::FractionalFP: return op.sigma - gamma;
    }
    return 0.0;
}

double ModelParams::beta_plus() const { return std::max(0.0, beta()); }

double ModelParams::sigma() const
{
    if (op.kind != OperatorKind::FractionalFP)
        throw DomainError("sigma requested for a non-fractional operator");
    return op.sigma;
}

void ModelParams::validate() const
{
    if (d < 1) throw DomainError("dimension must be >= 1");
    if (!finite_positive(gamma)) throw DomainError("gamma must be positive");
    if (op.kind == OperatorKind::FractionalFP && !(op.sigma > 0.0 && op.sigma < 2.0))
        throw DomainError("sigma must lie in (0,2)");
    const double b = beta();
    if (!std::isfinite(b)) throw DomainError("beta must be finite");
    if (!(gamma > std::max(0.0, -b)))
        throw RegimeError("gamma must exceed max(0, -beta)");
    if (!(k >= 0.0) || !std::isfinite(k)) throw DomainError("k must be >= 0");
    if (k >= gamma) throw DomainError("k must be < gamma");
    if (op.kind == OperatorKind::Scattering && op.kernel == ScatteringKernel::PowerDifference) {
        if (!(b >= 0.0 && b < 0.5 * d))
            throw RegimeError("power-difference kernel requires beta in [0, d/2)");
    }
}

void ModelParams::require_moment(double kk, const char* what) const
{
    if (!(kk < gamma))
        throw DomainError(std::string(what) + ": moment exponent must be < gamma");
}

ModelParams make_fokker_planck(int d, double gamma, double k)
{
    ModelParams p;
    p.d = d;
    p.gamma = gamma;
    p.k = k;
    p.op.kind = OperatorKind::FokkerPlanck;
    return p;
}

ModelParams make_scattering(int d, double gamma, double beta, ScatteringKernel kernel, double k)
{
    ModelParams p;
    p.d = d;
    p.gamma = gamma;
    p.k = k;
    p.op.kind = OperatorKind::Scattering;
    p.op.kernel = kernel;
    p.op.beta = beta;
    return p;
}

ModelParams make_fractional(int d, double gamma, double sigma, double k)
{
    ModelParams p;
    p.d = d;
    p.gamma = gamma;
    p.k = k;
    p.op.kind = OperatorKind::FractionalFP;
    p.op.sigma = sigma;
    return p;
}

std::string to_string(OperatorKind kind)
{
    switch (kind) {
    case OperatorKind::FokkerPlanck: return "fokker_planck";
    case OperatorKind::Scattering: return "scattering";
    case OperatorKind::FractionalFP: return "fractional";
    }
    return "?";
}

std::string to_string(ScatteringKernel kernel)
{
    return kernel == ScatteringKernel::Separable ? "separable" : "power_difference";
}

std::string to_string(RateRegime regime)
{
    switch (regime) {
    case RateRegime::Standard: return "standard";
    case RateRegime::CriticalLog: return "critical_log";
    case RateRegime::D1Intermediate: return "d1_intermediate";
    }
    return "?";
}

double normalization_constant(int d, double gamma)
{
    if (d < 1) throw DomainError("dimension must be >= 1");
    if (!finite_positive(gamma)) throw DomainError("gamma must be positive");
    return std::pow(std::numbers::pi, -0.5 * d) *
           std::exp(std::lgamma(0.5 * (d + gamma)) - std::lgamma(0.5 * gamma));
}

double unit_sphere_area(int d)
{
    return 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
}

double japanese(double v) { return std::hypot(1.0, v); }

double equilibrium(int d, double gamma, double v_norm)
{
    return normalization_constant(d, gamma) * std::pow(1.0 + v_norm * v_norm, -0.5 * (d + gamma));
}

double alpha_exponent(double gamma, double beta)
{
    if (!(gamma > std::max(0.0, -beta)))
        throw RegimeError("alpha: gamma must exceed max(0, -beta)");
    if (gamma >= 2.0 + beta) return 2.0;
    if (!(1.0 + beta > 0.0))
        throw RegimeError("alpha: 1 + beta must be positive when gamma < 2 + beta");
    return (gamma + beta) / (1.0 + beta);
}

bool is_critical(double gamma, double beta)
{
    return std::abs(gamma - (2.0 + beta)) < kCriticalTolerance;
}

double gamma_star(int d, double beta)
{
    if (d < 1) throw DomainError("dimension must be >= 1");
    if (!(beta >= 0.0)) throw DomainError("gamma_star requires beta >= 0");
    if (d == 1) return 0.5 * (std::sqrt((5.0 * beta + 4.0) * beta) - beta);
    if (d == 2) return 0.5 * (std::sqrt(beta * (9.0 * beta + 8.0)) - beta);
    const double dd = d;
    const double a = 0.5 * (std::sqrt((4.0 * dd + 1.0) * beta * beta + 4.0 * dd * beta) - beta);
    return std::max(a, 0.5 * dd * beta);
}

double tau_star(const ModelParams& params, double eta)
{
    const double b = params.beta();
    const double alpha = alpha_exponent(params.gamma, b);
    return (params.k - eta) / (alpha * (params.k + b) + eta + b);
}

double tau_star_limit(double gamma, double beta)
{
    const double alpha = alpha_exponent(gamma, beta);
    return 2.0 * gamma / (alpha * (gamma + beta) + std::abs(gamma - beta));
}

RatePrediction predicted_rate(const ModelParams& params)
{
    params.validate();
    const double inf = std::numeric_limits<double>::infinity();
    const double b = params.beta();
    const double bp = std::max(0.0, b);
    const double d = params.d;
    const double k = params.k;

    RatePrediction out;
    out.alpha = alpha_exponent(params.gamma, b);
    const double moment_rate = bp > 0.0 ? k / bp : inf;

    if (is_critical(params.gamma, b)) {
        if (b < 0.0 && k != 0.0)
            throw RegimeError("critical case with beta < 0 requires k = 0");
        if (b >= 0.0 && !(k > 0.0))
            throw RegimeError("critical case with beta >= 0 requires k > 0");
        if (params.d >= 3 && moment_rate > 0.5 * d) {
            out.tau = 0.5 * d;
            out.regime = RateRegime::Standard;
            return out;
        }
        out.tau = 0.5 * d;
        out.log_corrected = true;
        out.regime = RateRegime::CriticalLog;
        return out;
    }

    const double g = params.gamma;
    if (params.d == 1 && b > 1.0 && g > 1.0 && g < b && k > g / out.alpha && k < g) {
        out.regime = RateRegime::D1Intermediate;
        out.tau = (k + g) / (k * out.alpha - g + b * (out.alpha + 1.0));
        out.attained = false;
        out.tau_star_limit = tau_star_limit(g, b);
        return out;
    }

    out.tau = std::min(d / out.alpha, moment_rate);
    out.regime = RateRegime::Standard;
    return out;
}

double nash_profile(int d, double a, double s)
{
    if (d < 1) throw DomainError("dimension must be >= 1");
    if (!(a > 0.0 && a <= 2.0)) throw DomainError("nash_profile: a must lie in (0,2]");
    if (!(s >= 0.0)) throw DomainError("nash_profile: s must be >= 0");
    if (s == 0.0) return 0.0;
    const double omega = unit_sphere_area(d);
    const double x = a * s / omega;
    const double dd = d;

    // log of R^{d+a} (1+R^2)^{1-a/2}, increasing in R
    auto lhs = [&](double r) {
        return (dd + a) * std::log(r) + (1.0 - 0.5 * a) * std::log1p(r * r);
    };
    const double target = std::log(x);
    double lo = 0.0;
    double hi = std::max(1.0, 2.0 * std::pow(x, 1.0 / (dd + a)));
    while (lhs(hi) < target) hi *= 2.0;
    lo = std::min(hi, std::pow(x, 1.0 / (dd + a))) * 0.5;
    while (lo > 0.0 && lhs(lo) > target) lo *= 0.5;
    for (int it = 0; it < 400; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (lhs(mid) < target) lo = mid;
        else hi = mid;
        if (hi - lo <= 1e-13 * hi) break;
    }
    const double r = 0.5 * (lo + hi);
    const double phi = std::pow(r, dd) / dd + (x / a) * std::pow(1.0 + 1.0 / (r * r), 0.5 * a);
    return omega * phi;
}

double log_nash_profile(int d, double x)
{
    if (d < 1) throw DomainError("dimension must be >= 1");
    if (!(x > 0.0 && x < 1.0)) throw DomainError("log_nash_profile: x must lie in (0,1)");
    return std::pow(x, 1.0 + 2.0 / d) * std::abs(std::log(x)) / d;
}

}  // namespace fattail
