#include "fattail/hypocoercivity.hpp"

#include <cmath>

namespace fattail {

CVec apply_T(const VelocityGrid& g, double xi, const CVec& f)
{
    const cplx I(0.0, 1.0);
    CVec out(f.size());
    for (int i = 0; i < f.size(); ++i) out[i] = I * g.nodes[i] * xi * f[i];
    return out;
}

CVec apply_A(const VelocityGrid& g, double beta, double xi, const CVec& f)
{
    const SymbolFunctions sym{beta, 0.0};
    CVec tf(f.size());
    for (int i = 0; i < f.size(); ++i) tf[i] = g.nodes[i] * xi * sym.phi(xi, g.nodes[i]) * f[i];
    const cplx c = cplx(0.0, -1.0) * integrate(g, tf);
    CVec out(f.size());
    for (int i = 0; i < f.size(); ++i) out[i] = c * sym.psi(g.nodes[i]) * g.F[i];
    return out;
}

ModeState apply_A(const CollisionOperator& op, const ModeState& mode)
{
    return {mode.xi, apply_A(*op.grid, op.params.beta(), mode.xi, mode.values), mode.time};
}

ITerms compute_I_terms(const CollisionOperator& op, double xi, const CVec& f)
{
    const VelocityGrid& g = *op.grid;
    const double beta = op.params.beta();
    const CVec P = project_pi(g, f);
    const CVec Q = f - P;
    auto A = [&](const CVec& h) { return apply_A(g, beta, xi, h); };
    auto T = [&](const CVec& h) { return apply_T(g, xi, h); };
    auto ip = [&](const CVec& a, const CVec& b) { return inner(g, a, b); };
    const CVec LQ = apply(op, Q);

    ITerms r;
    r.values[0] = ip(A(T(P)), P);
    r.values[1] = ip(A(T(P)), Q);
    r.values[2] = ip(A(T(Q)), P);
    r.values[3] = ip(A(T(Q)), Q);
    r.values[4] = ip(A(Q), T(Q));
    r.values[5] = -ip(A(LQ), f);
    r.values[6] = -ip(A(Q), LQ);
    return r;
}

EntropyReport entropy_state(const CollisionOperator& op, double xi, const CVec& f, double delta, double eta)
{
    if (!(delta > 0.0 && delta < 2.0)) throw DomainError("delta must lie in (0,2)");
    const VelocityGrid& g = *op.grid;
    EntropyReport rep;
    rep.norm2 = inner(g, f, f).real();
    rep.A_term = inner(g, apply_A(g, op.params.beta(), xi, f), f).real();
    rep.H = rep.norm2 + delta * rep.A_term;
    const ITerms it = compute_I_terms(op, xi, f);
    rep.R = 0.0;
    for (int k = 0; k < 7; ++k) {
        rep.I_terms[k] = it.values[k].real();
        rep.I_abs[k] = std::abs(it.values[k]);
        rep.R += rep.I_terms[k];
    }
    const CVec P = project_pi(g, f);
    rep.X = std::sqrt(inner(g, P, P).real());
    rep.Y = weighted_norm(g, f - P, eta);
    return rep;
}

std::vector<EntropyReport> entropy_report(const CollisionOperator& op, const std::vector<ModeState>& traj,
                                          double delta, double eta)
{
    if (!(delta > 0.0 && delta < 2.0)) throw DomainError("delta must lie in (0,2)");
    std::vector<EntropyReport> out;
    out.reserve(traj.size());
    for (const auto& m : traj) {
        EntropyReport r = entropy_state(op, m.xi, m.values, delta, eta);
        r.time = m.time;
        out.push_back(r);
    }
    // three-point derivative on the (possibly uneven) output times
    const std::size_t n = out.size();
    for (std::size_t i = 0; i < n && n >= 3; ++i) {
        const std::size_t j = i == 0 ? 1 : (i == n - 1 ? n - 2 : i);
        const double t0 = out[j - 1].time, t1 = out[j].time, t2 = out[j + 1].time;
        const double y0 = out[j - 1].A_term, y1 = out[j].A_term, y2 = out[j + 1].A_term;
        const double t = out[i].time;
        const double d0 = (2.0 * t - t1 - t2) / ((t0 - t1) * (t0 - t2));
        const double d1 = (2.0 * t - t0 - t2) / ((t1 - t0) * (t1 - t2));
        const double d2 = (2.0 * t - t0 - t1) / ((t2 - t0) * (t2 - t1));
        out[i].R_fd = -(d0 * y0 + d1 * y1 + d2 * y2);
    }
    return out;
}

bool IBoundCheck::all() const
{
    for (bool b : holds)
        if (!b) return false;
    return true;
}

IBoundCheck check_I_term_bounds(const EntropyReport& r, const CoefficientSet& c)
{
    const double X = r.X;
    const double Y = r.Y;
    IBoundCheck out;
    out.rhs = {c.tlambda0 * c.mu2 * X * Y,
               c.lambda0 * c.tmu2 * X * Y,
               c.tlambda0 * c.tmu2 * Y * Y,
               c.tlambda1 * c.tmu1 * Y * Y,
               c.lambda0 * c.muL * X * Y + c.tlambda0 * c.muL * Y * Y,
               c.lambdaL * c.tmu1 * Y * Y};
    const double slack = 1.0 + 1e-9;
    const double floor = 1e-14 * (r.norm2 + 1e-300) * (1.0 + c.lambda0 + c.mu2);
    for (int k = 0; k < 6; ++k) {
        out.lhs[k] = r.I_abs[k + 1];
        out.holds[k] = out.lhs[k] <= slack * out.rhs[k] + floor;
    }
    return out;
}

double macro_rate_symbol(double xi, double alpha)
{
    const double a = std::abs(xi);
    return std::pow(a, alpha) / std::pow(std::sqrt(1.0 + a * a), alpha);
}

}  // namespace fattail
