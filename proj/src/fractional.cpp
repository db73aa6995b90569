#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <numbers>
#include <vector>

#include "fattail/collision.hpp"

namespace fattail {

double fractional_constant(int d, double sigma)
{
    if (!(sigma > 0.0 && sigma < 2.0)) throw DomainError("sigma must lie in (0,2)");
    return std::pow(2.0, sigma) / std::pow(std::numbers::pi, 0.5 * d) *
           std::tgamma(0.5 * (d + sigma)) / std::abs(std::tgamma(-0.5 * sigma));
}

double poisson_kernel(double v) { return 1.0 / (std::numbers::pi * (1.0 + v * v)); }

double poisson_half_laplacian(double v)
{
    const double q = 1.0 + v * v;
    return (v * v - 1.0) / (std::numbers::pi * q * q);
}

namespace {

struct Rule {
    std::vector<double> x;
    std::vector<double> w;
};

// Gauss-Legendre nodes and weights on [0,1].
Rule unit_rule(int m)
{
    Rule r;
    auto push = [&](const auto& abs, const auto& wts) {
        for (std::size_t k = 0; k < abs.size(); ++k) {
            const double a = abs[k];
            const double w = wts[k];
            if (a == 0.0) {
                r.x.push_back(0.5);
                r.w.push_back(0.5 * w);
            } else {
                r.x.push_back(0.5 - 0.5 * a);
                r.w.push_back(0.5 * w);
                r.x.push_back(0.5 + 0.5 * a);
                r.w.push_back(0.5 * w);
            }
        }
    };
    using boost::math::quadrature::gauss;
    switch (m) {
    case 8: push(gauss<double, 8>::abscissa(), gauss<double, 8>::weights()); break;
    case 16: push(gauss<double, 16>::abscissa(), gauss<double, 16>::weights()); break;
    case 32: push(gauss<double, 32>::abscissa(), gauss<double, 32>::weights()); break;
    case 64: push(gauss<double, 64>::abscissa(), gauss<double, 64>::weights()); break;
    default: throw DomainError("supported Gauss-Legendre sizes are 8, 16, 32, 64");
    }
    return r;
}

class RowBuilder {
public:
    RowBuilder(const VelocityGrid& g, int stencil, double tail_exponent, int center)
        : g_(g), m_(stencil), p_(tail_exponent), center_(center), row_(Vec::Zero(g.size()))
    {
    }

    // adds coeff * g(v') as a linear functional of the nodal values
    void add(double vp, double coeff)
    {
        const int n = g_.size();
        if (vp > g_.nodes[n - 1] || vp < g_.nodes[0]) {
            const int end = vp > 0.0 ? n - 1 : 0;
            row_[end] += coeff * std::pow(std::abs(g_.nodes[end]) / std::abs(vp), p_);
            return;
        }
        const double tp = std::asinh(vp / g_.map.scale);
        const double x = (tp - g_.t[0]) / g_.map.h;
        int start;
        int width = m_;
        if (std::abs(tp - g_.t[center_]) <= 2.0 * g_.map.h) {
            // one polynomial around the centre node keeps second differences consistent
            width = m_ + 1;
            start = std::clamp(center_ - m_ / 2, 0, n - width);
        } else {
            const int j = std::clamp(static_cast<int>(std::floor(x)), 0, n - 2);
            start = std::clamp(j - m_ / 2 + 1, 0, n - m_);
        }
        const double xr = x - start;
        for (int k = 0; k < width; ++k) {
            double l = 1.0;
            for (int q = 0; q < width; ++q)
                if (q != k) l *= (xr - q) / static_cast<double>(k - q);
            row_[start + k] += coeff * l;
        }
    }

    void add_node(int i, double coeff) { row_[i] += coeff; }
    const Vec& row() const { return row_; }

private:
    const VelocityGrid& g_;
    int m_;
    double p_;
    int center_;
    Vec row_;
};

// int_a^inf (v'/V)^{-p} (v' - v)^{-1-sigma} dv' for v < a
double tail_integral(double v, double a, double V, double p, double sigma, const Rule& rule)
{
    if (p == 0.0) return std::pow(a - v, -sigma) / sigma;
    const double q = p + sigma;
    if (!(q > 0.0)) throw DomainError("tail exponent too negative for the fractional order");
    double s = 0.0;
    for (std::size_t k = 0; k < rule.x.size(); ++k) {
        const double u = std::pow(rule.x[k], 1.0 / q);
        s += rule.w[k] * std::pow(1.0 - v * u / a, -1.0 - sigma);
    }
    return std::pow(V / a, p) * std::pow(a, -sigma) / q * s;
}

}  // namespace

Mat fractional_laplacian_matrix(const VelocityGrid& g, double sigma, const FracLapOptions& opts)
{
    if (!(sigma > 0.0 && sigma < 2.0)) throw DomainError("sigma must lie in (0,2)");
    if (g.map.kind != GridKind::Line) throw GridError("fractional Laplacian needs a d = 1 grid");
    const int n = g.size();
    const double C = fractional_constant(1, sigma);
    const double p = opts.tail_exponent.value_or(1.0 + g.gamma);
    const Rule inner = unit_rule(opts.inner_points);
    const Rule panel = unit_rule(opts.panel_points);
    const Rule tail = unit_rule(32);
    const Mat D1 = centered_derivative(g, 1, opts.stencil + 1);
    const Mat D2 = centered_derivative(g, 2, opts.stencil + 1);
    const double s = g.map.scale;
    const double vlo = g.nodes[0];
    const double vhi = g.nodes[n - 1];

    auto add_panels = [&](RowBuilder& rb, double v, double ta, double tb) {
        if (!(tb > ta)) return;
        const int np = std::max(1, static_cast<int>(std::ceil((tb - ta) / opts.panel_width)));
        const double hp = (tb - ta) / np;
        for (int k = 0; k < np; ++k) {
            for (std::size_t q = 0; q < panel.x.size(); ++q) {
                const double tp = ta + hp * (k + panel.x[q]);
                const double vp = s * std::sinh(tp);
                const double jac = s * std::cosh(tp);
                rb.add(vp, hp * panel.w[q] * jac * std::pow(std::abs(v - vp), -1.0 - sigma));
            }
        }
    };

    Mat M(n, n);
    for (int i = 0; i < n; ++i) {
        const double v = g.nodes[i];
        const double R = opts.inner_ratio * g.jv[i];
        const double zc = opts.taylor_fraction * R;
        RowBuilder rb(g, opts.stencil, p, i);

        // innermost piece from the second derivative
        const double vt = g.vt[i];
        const double vtt = g.vtt[i];
        const double taylor = std::pow(zc, 2.0 - sigma) / (2.0 - sigma);
        for (int j = 0; j < n; ++j) {
            const double gvv = (D2(i, j) - D1(i, j) * vtt / vt) / (vt * vt);
            if (gvv != 0.0) rb.add_node(j, taylor * gvv);
        }

        // second differences on [zc, R] in the logarithm of the offset
        const double ua = std::log(zc);
        const double ub = std::log(R);
        for (std::size_t q = 0; q < inner.x.size(); ++q) {
            const double z = std::exp(ua + (ub - ua) * inner.x[q]);
            const double w = (ub - ua) * inner.w[q] * std::pow(z, -sigma);
            rb.add(v + z, w);
            rb.add(v - z, w);
            rb.add_node(i, -2.0 * w);
        }

        // far region on the grid
        const double tl = std::asinh((v - R) / s);
        const double tr = std::asinh((v + R) / s);
        add_panels(rb, v, g.t[0], std::min(tl, g.t[n - 1]));
        add_panels(rb, v, std::max(tr, g.t[0]), g.t[n - 1]);

        // beyond the grid, power-law continuation of the end values
        const double ar = std::max(vhi, v + R);
        rb.add_node(n - 1, tail_integral(v, ar, vhi, p, sigma, tail));
        const double al = std::max(-vlo, R - v);
        rb.add_node(0, tail_integral(-v, al, -vlo, p, sigma, tail));

        rb.add_node(i, -2.0 * std::pow(R, -sigma) / sigma);
        M.row(i) = C * rb.row().transpose();
    }
    return M;
}

CVec fractional_laplacian(const VelocityGrid& g, const CVec& values, double sigma, const FracLapOptions& opts)
{
    const Mat M = fractional_laplacian_matrix(g, sigma, opts);
    CVec out(values.size());
    out.real() = M * values.real();
    out.imag() = M * values.imag();
    return out;
}

}  // namespace fattail
