#include "fattail/sim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <sstream>
#include <thread>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace fattail {

std::vector<double> TimeGrid::times() const
{
    if (!(t_min > 0.0 && t_max > t_min && count >= 2)) throw DomainError("invalid time grid");
    std::vector<double> t{0.0};
    const double a = std::log(t_min);
    const double b = std::log(t_max);
    for (int k = 0; k < count; ++k) t.push_back(std::exp(a + (b - a) * k / (count - 1)));
    return t;
}

XiGrid make_xi_grid(int n_modes, double xi_min, double xi_max)
{
    if (n_modes < 8) throw DomainError("at least 8 modes are needed");
    if (!(xi_min > 0.0 && xi_max > xi_min)) throw DomainError("invalid wavenumber range");
    // xi = log(1 + e^u): geometric spacing below 1, uniform above
    const double u0 = std::log(std::expm1(xi_min));
    const double u1 = std::log(std::expm1(xi_max));
    const double h = (u1 - u0) / (n_modes - 1);
    XiGrid g;
    for (int j = 0; j < n_modes; ++j) {
        const double u = u0 + h * j;
        const double xi = u > 30.0 ? u + std::log1p(std::exp(-u)) : std::log1p(std::exp(u));
        const double jac = 1.0 / (1.0 + std::exp(-u));
        g.xi.push_back(xi);
        g.weight.push_back((j == 0 || j == n_modes - 1 ? 0.5 : 1.0) * h * jac);
    }
    return g;
}

Vec initial_velocity_profile(const VelocityGrid& g, const InitialCondition& ic)
{
    const int n = g.size();
    Vec f = Vec::Zero(n);
    switch (ic.profile) {
    case VelocityProfile::Equilibrium:
        f = g.F;
        break;
    case VelocityProfile::Bump: {
        if (!(ic.bump_width > 0.0)) throw DomainError("bump width must be positive");
        for (int i = 0; i < n; ++i) {
            const double x = g.nodes[i] / ic.bump_width;
            if (std::abs(x) < 1.0) f[i] = (1.0 - x * x) * (1.0 - x * x);
        }
        const double m = g.weights.dot(f);
        if (!(m > 0.0)) throw GridError("bump is not resolved by the grid");
        f /= m;
        break;
    }
    case VelocityProfile::File: {
        std::ifstream in(ic.file);
        if (!in) throw DomainError("cannot open velocity profile " + ic.file);
        std::vector<double> xs, ys;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            std::replace(line.begin(), line.end(), ',', ' ');
            std::istringstream ss(line);
            double x, y;
            if (ss >> x >> y) {
                xs.push_back(x);
                ys.push_back(y);
            }
        }
        if (xs.size() < 2 || !std::is_sorted(xs.begin(), xs.end()))
            throw DomainError("velocity profile needs increasing nodes");
        for (int i = 0; i < n; ++i) {
            const double v = g.nodes[i];
            if (v < xs.front() || v > xs.back()) continue;
            const auto it = std::upper_bound(xs.begin(), xs.end(), v);
            const std::size_t k = std::min<std::size_t>(it - xs.begin(), xs.size() - 1);
            const double s = (v - xs[k - 1]) / (xs[k] - xs[k - 1]);
            f[i] = (1.0 - s) * ys[k - 1] + s * ys[k];
        }
        break;
    }
    }
    for (int i = 0; i < n; ++i)
        if (!std::isfinite(f[i])) throw DomainError("initial profile is not finite");
    return f;
}

double initial_spatial_symbol(const InitialCondition& ic, double xi)
{
    const double s = ic.x_width;
    return std::exp(-0.5 * s * s * xi * xi);
}

double initial_norm2(const VelocityGrid& g, const InitialCondition& ic, double k)
{
    const Vec f = initial_velocity_profile(g, ic);
    const double vel = weighted_norm2(g, f.cast<cplx>(), k);
    const double space = 1.0 / (2.0 * ic.x_width * std::sqrt(std::numbers::pi));
    const double out = vel * space;
    if (!std::isfinite(out)) throw DomainError("initial condition has infinite weighted norm");
    return out;
}

namespace {

// Reduction for profiles even in v: f = a + i b with a even and b odd is an
// invariant real subspace, so each mode needs a real eigenproblem of half size
// per component.
class HalfPropagator {
public:
    HalfPropagator(const CollisionOperator& op, double xi, double cond_limit)
    {
        const VelocityGrid& g = *op.grid;
        const int n = g.size();
        m_ = n / 2;
        const int N = 2 * m_;
        s_.resize(N);
        for (int p = 0; p < m_; ++p) s_[p] = s_[p + m_] = std::sqrt(g.mu_weights[m_ + p]);
        Mat M = Mat::Zero(N, N);
        for (int p = 0; p < m_; ++p) {
            const int i = m_ + p;
            for (int q = 0; q < m_; ++q) {
                const int j = m_ + q;
                const int jm = n - 1 - j;
                M(p, q) = op.matrix(i, j) + op.matrix(i, jm);
                M(m_ + p, m_ + q) = op.matrix(i, j) - op.matrix(i, jm);
            }
            M(p, m_ + p) = g.nodes[i] * xi;
            M(m_ + p, p) = -g.nodes[i] * xi;
        }
        for (int q = 0; q < N; ++q)
            for (int p = 0; p < N; ++p) M(p, q) *= s_[p] / s_[q];
        const double mnorm = M.cwiseAbs().colwise().sum().maxCoeff();

        Mat A = M;
        Vec wr(N), wi(N);
        Mat VR(N, N);
        double dummy;
        const lapack_int info =
            LAPACKE_dgeev(LAPACK_COL_MAJOR, 'N', 'V', N, A.data(), N, wr.data(), wi.data(), &dummy, 1, VR.data(), N);
        if (info != 0) return;
        lambda_.resize(N);
        V_.resize(N, N);
        for (int k = 0; k < N; ++k) {
            if (wi[k] != 0.0 && k + 1 < N) {
                lambda_[k] = cplx(wr[k], wi[k]);
                lambda_[k + 1] = cplx(wr[k + 1], wi[k + 1]);
                V_.col(k) = VR.col(k).cast<cplx>() + cplx(0.0, 1.0) * VR.col(k + 1).cast<cplx>();
                V_.col(k + 1) = VR.col(k).cast<cplx>() - cplx(0.0, 1.0) * VR.col(k + 1).cast<cplx>();
                ++k;
            } else {
                lambda_[k] = cplx(wr[k], 0.0);
                V_.col(k) = VR.col(k).cast<cplx>();
            }
        }
        for (int k = 0; k < N; ++k) {
            if (lambda_[k].real() > 0.0) {
                if (lambda_[k].real() > 1e-12 * mnorm) ++clamped_;
                lambda_[k] = cplx(0.0, lambda_[k].imag());
            }
        }
        lu_ = Eigen::PartialPivLU<CMat>(V_);
        const double rc = lu_.rcond();
        cond_ = rc > 0.0 ? 1.0 / rc : std::numeric_limits<double>::infinity();
        const CMat Mc = M.cast<cplx>();
        const double resid = (Mc * V_ - V_ * lambda_.asDiagonal()).norm() / (mnorm * V_.norm());
        ok_ = std::isfinite(cond_) && cond_ < cond_limit && resid < 1e-8;
    }

    bool ok() const { return ok_; }
    int clamped() const { return clamped_; }

    CVec expand(const Vec& x) const { return lu_.solve(CVec(s_.cwiseProduct(x).cast<cplx>())); }

    Vec evaluate(const CVec& c, double t) const
    {
        CVec e(c.size());
        for (int k = 0; k < c.size(); ++k) e[k] = std::exp(lambda_[k] * t) * c[k];
        return (V_ * e).real().cwiseQuotient(s_);
    }

private:
    int m_ = 0;
    Vec s_;
    CVec lambda_;
    CMat V_;
    Eigen::PartialPivLU<CMat> lu_;
    bool ok_ = false;
    double cond_ = 0.0;
    int clamped_ = 0;
};

struct ModeSeries {
    std::vector<double> norm2;
    std::vector<double> wnorm2;
    std::vector<double> mass;
    bool stepper = false;
    int clamped = 0;
};

bool is_even(const Vec& f)
{
    const int n = static_cast<int>(f.size());
    const double scale = f.cwiseAbs().maxCoeff();
    for (int i = 0; i < n / 2; ++i)
        if (std::abs(f[i] - f[n - 1 - i]) > 1e-14 * scale) return false;
    return true;
}

ModeSeries run_mode(const CollisionOperator& op, double xi, const Vec& fv, double amp,
                    const std::vector<double>& times, double k, const EvolveOptions& opts, bool even)
{
    const VelocityGrid& g = *op.grid;
    const int n = g.size();
    ModeSeries out;
    Vec wk(n);
    for (int i = 0; i < n; ++i) wk[i] = g.mu_weights[i] * std::pow(g.jv[i], k);
    auto record = [&](const CVec& f) {
        out.norm2.push_back((g.mu_weights.array() * f.array().abs2()).sum());
        out.wnorm2.push_back((wk.array() * f.array().abs2()).sum());
        out.mass.push_back(std::abs(g.weights.cast<cplx>().dot(f)));
    };

    if (even && !opts.force_stepper) {
        HalfPropagator hp(op, xi, opts.cond_limit);
        if (hp.ok()) {
            out.clamped = hp.clamped();
            const int m = n / 2;
            Vec x = Vec::Zero(2 * m);
            x.head(m) = amp * fv.tail(m);
            const CVec c = hp.expand(x);
            for (double t : times) {
                const Vec y = hp.evaluate(c, t);
                CVec f(n);
                for (int p = 0; p < m; ++p) {
                    f[m + p] = cplx(y[p], y[m + p]);
                    f[m - 1 - p] = cplx(y[p], -y[m + p]);
                }
                record(f);
            }
            return out;
        }
    }
    const ModeState start{xi, (amp * fv).cast<cplx>(), 0.0};
    const EvolveResult r = evolve_mode(start, op, times, opts);
    out.stepper = r.used_stepper;
    out.clamped = r.clamped_eigenvalues;
    for (const auto& s : r.states) record(s.values);
    return out;
}

}  // namespace

SimResult run_simulation(const SimConfig& cfg)
{
    const auto t_start = std::chrono::steady_clock::now();
    ModelParams params = cfg.params;
    params.validate();
    if (params.d != 1) throw DomainError("the space-velocity simulation is implemented for d = 1");
    if (!(params.k >= 0.0 && params.k < params.gamma)) throw DomainError("k must lie in [0, gamma)");
    if (!(cfg.delta > 0.0 && cfg.delta < 2.0)) throw DomainError("delta must lie in (0,2)");
    if (cfg.n_velocity % 2 != 0) throw DomainError("the velocity node count must be even");

    const GridPtr grid = build_grid(params, cfg.n_velocity, cfg.grid);
    const CollisionOperator op = assemble_operator(params, grid);
    const Vec fv = initial_velocity_profile(*grid, cfg.initial);
    const bool even = is_even(fv);
    const double k = params.k;

    SimResult res;
    res.times = cfg.time.times();
    res.xi = make_xi_grid(cfg.n_modes, cfg.xi_min, cfg.xi_max);
    res.initial_norm2 = initial_norm2(*grid, cfg.initial, 0.0);
    res.initial_weighted_norm2 = initial_norm2(*grid, cfg.initial, k);

    const int M = cfg.n_modes;
    std::vector<ModeSeries> modes(M + 1);
    // slot M holds the zero mode
    auto work = [&](int j) {
        const double xi = j < M ? res.xi.xi[j] : 0.0;
        modes[j] = run_mode(op, xi, fv, initial_spatial_symbol(cfg.initial, xi), res.times, k, cfg.evolve, even);
    };
    const int nthreads = std::max(1, cfg.threads);
    if (nthreads == 1) {
        for (int j = 0; j <= M; ++j) work(j);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < nthreads; ++w) {
            pool.emplace_back([&, w] {
                for (int j = w; j <= M; j += nthreads) work(j);
            });
        }
        for (auto& th : pool) th.join();
    }

    const std::size_t nt = res.times.size();
    res.L2_norm2.assign(nt, 0.0);
    res.weighted_norm2.assign(nt, 0.0);
    res.mass = modes[M].mass;
    res.L1_bound = modes[M].mass;
    res.mode_norm2.resize(M);
    const double low_edge = 10.0 * cfg.xi_min;
    double low_last = 0.0;
    for (int j = 0; j < M; ++j) {
        const double w = res.xi.weight[j] / std::numbers::pi;
        for (std::size_t i = 0; i < nt; ++i) {
            res.L2_norm2[i] += w * modes[j].norm2[i];
            res.weighted_norm2[i] += w * modes[j].wnorm2[i];
        }
        if (res.xi.xi[j] <= low_edge) low_last += w * modes[j].norm2[nt - 1];
        res.mode_norm2[j] = modes[j].norm2;
        if (modes[j].stepper) ++res.stepper_modes;
        res.clamped_eigenvalues += modes[j].clamped;
    }
    // wavenumbers below the first node carry the zero mode
    const double below = cfg.xi_min / std::numbers::pi;
    for (std::size_t i = 0; i < nt; ++i) {
        res.L2_norm2[i] += below * modes[M].norm2[i];
        res.weighted_norm2[i] += below * modes[M].wnorm2[i];
    }
    low_last += below * modes[M].norm2[nt - 1];
    res.low_mode_fraction = low_last / res.L2_norm2[nt - 1];
    res.box_limited = res.low_mode_fraction > cfg.box_fraction;
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return res;
}

MonitorReport weighted_norm_monitor(const SimResult& res, double gate)
{
    MonitorReport rep;
    const double base = std::sqrt(res.initial_weighted_norm2);
    for (double v : res.weighted_norm2) rep.max_ratio = std::max(rep.max_ratio, std::sqrt(v) / base);
    rep.bounded = rep.max_ratio <= gate;
    const double t_hi = res.times.back();
    std::vector<double> lt, ly;
    for (std::size_t i = 0; i < res.times.size(); ++i) {
        if (res.times[i] >= 0.1 * t_hi && res.times[i] > 0.0) {
            lt.push_back(std::log(res.times[i]));
            ly.push_back(0.5 * std::log(res.weighted_norm2[i]));
        }
    }
    if (lt.size() >= 2) {
        const double mt = std::accumulate(lt.begin(), lt.end(), 0.0) / lt.size();
        const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / ly.size();
        double sxy = 0.0, sxx = 0.0;
        for (std::size_t i = 0; i < lt.size(); ++i) {
            sxy += (lt[i] - mt) * (ly[i] - my);
            sxx += (lt[i] - mt) * (lt[i] - mt);
        }
        rep.final_decade_slope = sxy / sxx;
    }
    rep.no_upward_trend = rep.final_decade_slope <= 1e-3;
    return rep;
}

}  // namespace fattail
