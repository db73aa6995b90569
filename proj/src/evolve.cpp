#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "fattail/hypocoercivity.hpp"

namespace fattail {

CMat mode_generator(const CollisionOperator& op, double xi)
{
    const VelocityGrid& g = *op.grid;
    CMat G = op.matrix.cast<cplx>();
    for (int i = 0; i < g.size(); ++i) G(i, i) -= cplx(0.0, g.nodes[i] * xi);
    return G;
}

ModePropagator::ModePropagator(const CollisionOperator& op, double xi, const EvolveOptions& opts)
{
    const VelocityGrid& g = *op.grid;
    const int n = g.size();
    // similarity to the L^2(dmu) inner product keeps the eigenbasis well conditioned
    s_ = g.mu_weights.cwiseSqrt();
    CMat G = mode_generator(op, xi);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) G(i, j) *= s_[i] / s_[j];
    const double gnorm = G.cwiseAbs().colwise().sum().maxCoeff();

    lambda_.resize(n);
    V_.resize(n, n);
    if ((G - G.adjoint()).norm() <= 1e-13 * G.norm()) {
        // degenerate spectra (xi = 0) need the orthonormal eigenbasis
        Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (G + G.adjoint()));
        if (es.info() != Eigen::Success) return;
        lambda_ = es.eigenvalues().cast<cplx>();
        V_ = es.eigenvectors();
    } else {
        CMat A = G;
        cplx dummy;
        const lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'V', n, A.data(), n, lambda_.data(), &dummy, 1,
                                              V_.data(), n);
        if (info != 0) return;
    }

    const double eps_scale = 1e-12 * gnorm;
    for (int k = 0; k < n; ++k) {
        if (lambda_[k].real() > 0.0) {
            if (lambda_[k].real() > eps_scale) ++clamped_;
            lambda_[k] = cplx(0.0, lambda_[k].imag());
        }
    }
    lu_ = Eigen::PartialPivLU<CMat>(V_);
    const double rc = lu_.rcond();
    cond_ = rc > 0.0 ? 1.0 / rc : std::numeric_limits<double>::infinity();
    const double resid = (G * V_ - V_ * lambda_.asDiagonal()).norm() / (gnorm * V_.norm());
    ok_ = std::isfinite(cond_) && cond_ < opts.cond_limit && resid < 1e-8;
}

double ModePropagator::spectral_abscissa() const { return lambda_.real().maxCoeff(); }

CVec ModePropagator::expand(const CVec& f) const
{
    return lu_.solve(CVec(s_.cast<cplx>().cwiseProduct(f)));
}

CVec ModePropagator::evaluate(const CVec& coeffs, double t) const
{
    CVec e(coeffs.size());
    for (int k = 0; k < coeffs.size(); ++k) e[k] = std::exp(lambda_[k] * t) * coeffs[k];
    return (V_ * e).cwiseQuotient(s_.cast<cplx>());
}

namespace {

// Two-stage L-stable SDIRK with step-doubling error control. The generator is
// moved to the L^2(dmu) orthonormal basis and reduced once to complex Schur
// form, so every implicit stage is a triangular solve whatever the step size.
class Stepper {
public:
    Stepper(const CMat& G, const Vec& mu_weights, double tol)
        : root_(mu_weights.array().sqrt().matrix()), tol_(tol)
    {
        const CMat S = root_.cast<cplx>().asDiagonal() * G * root_.cwiseInverse().cast<cplx>().asDiagonal();
        Eigen::ComplexSchur<CMat> schur(S);
        T_ = schur.matrixT();
        U_ = schur.matrixU();
    }

    CVec advance(const CVec& y0, double t0, double t1, double& h)
    {
        CVec z = U_.adjoint() * (root_.cast<cplx>().asDiagonal() * y0);
        double t = t0;
        while (t < t1) {
            const double step = std::min(h, t1 - t);
            const CVec full = step_once(z, step);
            const CVec half = step_once(step_once(z, 0.5 * step), 0.5 * step);
            const double scale = std::max(z.norm(), 1e-300);
            const double err = (half - full).norm() / 3.0 / scale;
            if (err <= tol_ || step < 1e-14 * std::max(1.0, t)) {
                z = half;
                t += step;
            }
            const double fac = err > 0.0 ? 0.9 * std::pow(tol_ / err, 1.0 / 3.0) : 4.0;
            // a truncated final step says nothing about the admissible size
            if (step == h || fac < 1.0) h = step * std::clamp(fac, 0.2, 4.0);
        }
        return root_.cwiseInverse().cast<cplx>().asDiagonal() * (U_ * z);
    }

private:
    CVec solve(double a, const CVec& b) const
    {
        CMat M = -a * T_;
        M.diagonal().array() += 1.0;
        return M.triangularView<Eigen::Upper>().solve(b);
    }

    CVec step_once(const CVec& z, double h) const
    {
        const double a = h * g_;
        const CVec k1 = solve(a, T_ * z);
        const CVec k2 = solve(a, T_ * (z + (h * (1.0 - g_)) * k1));
        return z + h * ((1.0 - g_) * k1 + g_ * k2);
    }

    Vec root_;
    CMat T_;
    CMat U_;
    double tol_;
    const double g_ = 1.0 - 1.0 / std::sqrt(2.0);
};

}  // namespace

EvolveResult evolve_mode(const ModeState& mode, const CollisionOperator& op, const std::vector<double>& t_grid,
                         const EvolveOptions& opts)
{
    for (std::size_t k = 0; k < t_grid.size(); ++k) {
        if (t_grid[k] < mode.time || (k > 0 && t_grid[k] < t_grid[k - 1]))
            throw DomainError("time grid must increase from the mode time");
    }
    EvolveResult res;
    if (!opts.force_stepper) {
        ModePropagator prop(op, mode.xi, opts);
        res.eig_condition = prop.condition();
        res.clamped_eigenvalues = prop.clamped();
        if (prop.ok()) {
            const CVec c = prop.expand(mode.values);
            for (double t : t_grid) res.states.push_back({mode.xi, prop.evaluate(c, t - mode.time), t});
            return res;
        }
        res.note = "eigendecomposition rejected (condition " + std::to_string(prop.condition()) +
                   "), implicit stepper used";
    }
    res.used_stepper = true;
    const CMat G = mode_generator(op, mode.xi);
    Stepper st(G, op.grid->mu_weights, opts.tol);
    CVec y = mode.values;
    double t = mode.time;
    double h = 1e-3;
    for (double tk : t_grid) {
        if (tk > t) y = st.advance(y, t, tk, h);
        t = tk;
        res.states.push_back({mode.xi, y, t});
    }
    return res;
}

}  // namespace fattail
