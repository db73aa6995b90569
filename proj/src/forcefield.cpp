#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "fattail/collision.hpp"

namespace fattail {

double force_constant(double sigma)
{
    if (!(sigma > 0.0 && sigma < 2.0)) throw DomainError("sigma must lie in (0,2)");
    if (std::abs(sigma - 1.0) < 1e-12) return 1.0 / std::numbers::pi;
    return 1.0 / (2.0 * std::tgamma(1.0 - sigma) * std::cos(0.5 * std::numbers::pi * sigma));
}

double flux_profile(double gamma, double sigma, double v)
{
    if (v == 0.0) return 0.0;
    if (v < 0.0) return -flux_profile(gamma, sigma, -v);
    const double p = 0.5 * (1.0 + gamma);

    // <v-z>^{-1-gamma} - <v+z>^{-1-gamma} without cancellation
    auto diff = [&](double z) {
        const double a = std::log1p((v - z) * (v - z));
        const double ratio = std::log1p(4.0 * v * z / (1.0 + (v - z) * (v - z)));
        return -std::exp(-p * a) * std::expm1(-p * ratio);
    };
    auto integrand = [&](double z) { return z <= 0.0 ? 0.0 : std::pow(z, -sigma) * diff(z); };

    std::vector<double> cuts{0.0};
    const double z0 = std::min(0.5, 0.5 * v);
    cuts.push_back(z0);
    // geometric breakpoints towards and away from the peak at z = v
    for (double s = 1.0; v - s > z0; s *= 2.0) cuts.push_back(v - s);
    cuts.push_back(v);
    double last = v;
    for (double s = 1.0; s <= 4.0 * std::max(1.0, v); s *= 2.0) {
        last = v + s;
        cuts.push_back(last);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    boost::math::quadrature::tanh_sinh<double> ts;
    double total = ts.integrate(integrand, 0.0, cuts[1], 1e-14);
    for (std::size_t k = 1; k + 1 < cuts.size(); ++k) {
        total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
            integrand, cuts[k], cuts[k + 1], 8, 1e-13);
    }
    boost::math::quadrature::exp_sinh<double> es;
    const double start = cuts.back();
    total += es.integrate([&](double u) { return integrand(start + u); }, 1e-14);
    return force_constant(sigma) * total;
}

ForceField build_force_field(const ModelParams& params, GridPtr grid, double check_vmax)
{
    if (params.op.kind != OperatorKind::FractionalFP) throw DomainError("force field needs the fractional operator");
    if (params.d != 1) throw DomainError("force field is implemented for d = 1");
    const VelocityGrid& g = *grid;
    const int n = g.size();
    const double sigma = params.sigma();
    const double gamma = params.gamma;
    const double beta = params.beta();
    const double c = normalization_constant(1, gamma);

    ForceField ff;
    ff.flux.resize(n);
    ff.E_values.resize(n);
    ff.G_values.resize(n);
    for (int i = n / 2; i < n; ++i) {
        const double u = flux_profile(gamma, sigma, g.nodes[i]);
        ff.flux[i] = c * u;
        ff.flux[n - 1 - i] = -c * u;
        const double E = u * std::pow(g.jv[i], 1.0 + gamma);
        ff.E_values[i] = E;
        ff.E_values[n - 1 - i] = -E;
    }

    const Mat D1 = centered_derivative(g, 1, 9);
    ff.divergence = (D1 * ff.flux).cwiseQuotient(g.vt);
    for (int i = 0; i < n; ++i) {
        const double v = g.nodes[i];
        if (v != 0.0) {
            ff.G_values[i] = ff.E_values[i] * std::pow(g.jv[i], beta) / v;
        } else {
            ff.G_values[i] = ff.divergence[i] / g.F[i];
        }
    }

    ff.frac_lap_F = fractional_laplacian_matrix(g, sigma) * g.F;

    const double vmax = check_vmax > 0.0 ? check_vmax : 1e-3 * g.map.v_max;
    ff.residual_vmax = vmax;
    double num = 0.0;
    double den = 0.0;
    for (int i = 0; i < n; ++i) {
        if (std::abs(g.nodes[i]) > vmax) continue;
        const double r = ff.frac_lap_F[i] + ff.divergence[i];
        num += g.mu_weights[i] * r * r;
        den += g.mu_weights[i] * ff.frac_lap_F[i] * ff.frac_lap_F[i];
    }
    ff.residual = std::sqrt(num / den);
    return ff;
}

}  // namespace fattail
