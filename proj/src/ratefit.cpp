#include <algorithm>
#include <cmath>

#include "fattail/sim.hpp"

namespace fattail {

std::string to_string(FitModel m) { return m == FitModel::PowerLaw ? "power" : "power-log"; }

RateFit fit_rate(const std::vector<double>& t, const std::vector<double>& y, FitModel model, double t_lo,
                 double t_hi)
{
    if (t.size() != y.size()) throw FitError("time and value series differ in length");
    double tmin = 0.0, tmax = 0.0;
    for (double s : t) {
        if (s <= 0.0) continue;
        tmin = tmin == 0.0 ? s : std::min(tmin, s);
        tmax = std::max(tmax, s);
    }
    if (!(tmax > 0.0) || tmax / tmin < 100.0 * (1.0 - 1e-9))
        throw FitError("rate fits need at least two decades of positive times");
    if (t_hi <= 0.0) t_hi = tmax;
    if (t_lo <= 0.0) t_lo = 0.1 * t_hi;
    if (model == FitModel::PowerLogLaw) t_lo = std::max(t_lo, std::exp(1.0) * (1.0 + 1e-12));

    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] < t_lo * (1.0 - 1e-12) || t[i] > t_hi * (1.0 + 1e-12) || t[i] <= 0.0) continue;
        if (!(y[i] > 0.0)) throw FitError("rate fits need positive values");
        const double x = model == FitModel::PowerLaw ? std::log1p(t[i])
                                                     : std::log(t[i]) + std::log(std::log(t[i]));
        xs.push_back(x);
        ys.push_back(std::log(y[i]));
    }
    const std::size_t m = xs.size();
    if (m < 4) throw FitError("fit window holds fewer than four samples");

    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= m;
    my /= m;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    const double slope = sxy / sxx;
    RateFit fit;
    fit.model = model;
    fit.tau_hat = -slope;
    fit.intercept = my - slope * mx;
    fit.t_lo = t_lo;
    fit.t_hi = t_hi;
    fit.points = static_cast<int>(m);
    double ss = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double r = ys[i] - (fit.intercept + slope * xs[i]);
        ss += r * r;
        fit.residual = std::max(fit.residual, std::abs(r));
    }
    fit.stderr_ = std::sqrt(ss / std::max<std::size_t>(m - 2, 1) / sxx);
    if (model == FitModel::PowerLogLaw) fit.log_corrected_fit = fit.tau_hat;
    return fit;
}

}  // namespace fattail
