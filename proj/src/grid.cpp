#include "fattail/grid.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>
#include <vector>

namespace fattail {

double VelocityGrid::mass(const Vec& g) const { return weights.dot(g); }

double VelocityGrid::sphere_area() const { return unit_sphere_area(d); }

double equilibrium_tail_mass(double gamma, double V)
{
    // both tails together equal c * B_x(gamma/2, 1/2) with x = 1/(1+V^2)
    const double c = normalization_constant(1, gamma);
    const double x = 1.0 / (1.0 + V * V);
    const double a = 0.5 * gamma;
    const double b = 0.5;
    double term = std::pow(x, a) / a;
    double sum = term;
    double coef = 1.0;
    for (int m = 1; m < 200; ++m) {
        coef *= (m - b) / m;
        term = coef * std::pow(x, a + m) / (a + m);
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return c * sum;
}

double equilibrium_moment(double gamma, double k)
{
    if (!(k < gamma)) throw DomainError("equilibrium_moment: k must be < gamma");
    const double c = normalization_constant(1, gamma);
    return c * std::sqrt(std::numbers::pi) *
           std::exp(std::lgamma(0.5 * (gamma - k)) - std::lgamma(0.5 * (1.0 + gamma - k)));
}

namespace {

double choose_vmax(const ModelParams& params, const GridOptions& opts)
{
    if (opts.v_max > 0.0) return opts.v_max;
    const double c = normalization_constant(params.d, params.gamma);
    const double area = unit_sphere_area(params.d);
    const double budget = 0.1 * opts.tol;
    const double v_tol = std::pow(area * c / (params.gamma * budget), 1.0 / params.gamma);
    return std::max(v_tol, opts.v_floor);
}

void finish(VelocityGrid& g)
{
    const int n = g.size();
    g.F.resize(n);
    g.jv.resize(n);
    for (int i = 0; i < n; ++i) {
        g.F[i] = equilibrium(g.d, g.gamma, g.nodes[i]);
        g.jv[i] = japanese(g.nodes[i]);
    }
    g.mu_weights = g.weights.cwiseQuotient(g.F);
}

void build_line(VelocityGrid& g, int n, double scale, double vmax)
{
    const double T = std::asinh(vmax / scale);
    const double h = 2.0 * T / (n - 1);
    g.map = {GridKind::Line, scale, -T, T, h, vmax};
    g.t.resize(n);
    g.nodes.resize(n);
    g.vt.resize(n);
    g.vtt.resize(n);
    g.weights.resize(n);
    for (int j = n / 2; j < n; ++j) {
        const double t = (j - 0.5 * (n - 1)) * h;
        const double v = scale * std::sinh(t);
        const double vt = scale * std::cosh(t);
        const int m = n - 1 - j;
        g.t[j] = t;
        g.t[m] = -t;
        g.nodes[j] = v;
        g.nodes[m] = -v;
        g.vt[j] = g.vt[m] = vt;
        g.vtt[j] = v;
        g.vtt[m] = -v;
        g.weights[j] = g.weights[m] = h * vt;
    }
}

void build_radial(VelocityGrid& g, int n, double scale, double vmax, double tol)
{
    const double t_hi = std::log(vmax / scale);
    const double r_lo = std::pow(0.01 * tol * g.d, 1.0 / g.d);
    const double t_lo = std::log(r_lo / scale);
    const double h = (t_hi - t_lo) / (n - 1);
    g.map = {GridKind::Radial, scale, t_lo, t_hi, h, vmax};
    const double area = unit_sphere_area(g.d);
    g.t.resize(n);
    g.nodes.resize(n);
    g.vt.resize(n);
    g.vtt.resize(n);
    g.weights.resize(n);
    for (int j = 0; j < n; ++j) {
        const double t = t_lo + j * h;
        const double r = scale * std::exp(t);
        g.t[j] = t;
        g.nodes[j] = r;
        g.vt[j] = r;
        g.vtt[j] = r;
        g.weights[j] = area * h * std::pow(r, g.d);
    }
}

}  // namespace

double normalization_error(const VelocityGrid& g) { return std::abs(g.weights.dot(g.F) - 1.0); }

double moment(const VelocityGrid& g, double k)
{
    if (!(k < g.gamma)) throw DomainError("moment: k must be < gamma");
    const int n = g.size();
    Vec terms(n);
    for (int i = 0; i < n; ++i) terms[i] = g.weights[i] * std::pow(g.jv[i], k) * g.F[i];
    double s = terms.sum();
    // the summand is geometric in the node index far out, so the nodes beyond
    // the truncation are summed in closed form
    auto closure = [&](int last, int prev) {
        const double r = terms[last] / terms[prev];
        return (r > 0.0 && r < 1.0) ? terms[last] * r / (1.0 - r) : 0.0;
    };
    s += closure(n - 1, n - 2);
    if (g.map.kind == GridKind::Line) s += closure(0, 1);
    return s;
}

GridPtr build_grid(const ModelParams& params, int n, double scale, const GridOptions& opts_in)
{
    if (params.d < 1) throw DomainError("dimension must be >= 1");
    if (!(params.gamma > 0.0)) throw DomainError("gamma must be positive");
    if (n < 16) throw GridError("grid needs at least 16 nodes");
    if (!(scale > 0.0)) throw GridError("grid scale must be positive");
    GridOptions opts = opts_in;
    opts.scale = scale;
    auto g = std::make_shared<VelocityGrid>();
    g->d = params.d;
    g->gamma = params.gamma;
    const double vmax = choose_vmax(params, opts);
    if (params.d == 1) build_line(*g, n, scale, vmax);
    else build_radial(*g, n, scale, vmax, opts.tol);
    finish(*g);
    if (opts.check) {
        const double err = normalization_error(*g);
        if (!(err <= opts.tol)) {
            std::ostringstream msg;
            msg << "grid normalization misses tolerance: |sum wF - 1| = " << err
                << " (n = " << n << ", gamma = " << params.gamma << ")";
            throw GridError(msg.str());
        }
    }
    return g;
}

GridPtr build_grid(const ModelParams& params, int n, const GridOptions& opts)
{
    return build_grid(params, n, opts.scale, opts);
}

WeightedVector make_vector(GridPtr grid, CVec values, double k)
{
    if (values.size() != grid->size()) throw GridError("vector length does not match grid");
    return WeightedVector{std::move(grid), std::move(values), k};
}

WeightedVector equilibrium_vector(GridPtr grid)
{
    CVec f = grid->F.cast<cplx>();
    return make_vector(std::move(grid), std::move(f), 0.0);
}

namespace {

// Sums mirror pairs first on symmetric grids, so odd integrands cancel exactly
// even where the equilibrium moment they probe diverges.
template <class Term>
cplx paired_sum(const VelocityGrid& g, Term&& term)
{
    const int n = g.size();
    cplx s = 0.0;
    if (g.map.kind == GridKind::Line) {
        for (int i = 0; i < n / 2; ++i) s += term(i) + term(n - 1 - i);
        if (n % 2) s += term(n / 2);
    } else {
        for (int i = 0; i < n; ++i) s += term(i);
    }
    return s;
}

}  // namespace

cplx integrate(const VelocityGrid& g, const CVec& f)
{
    return paired_sum(g, [&](int i) { return g.weights[i] * f[i]; });
}

cplx inner(const VelocityGrid& g, const CVec& f, const CVec& h)
{
    return paired_sum(g, [&](int i) { return g.mu_weights[i] * std::conj(f[i]) * h[i]; });
}

static void same_grid(const WeightedVector& a, const WeightedVector& b)
{
    if (!a.grid || a.grid != b.grid) throw GridError("vectors live on different grids");
}

cplx inner(const WeightedVector& f, const WeightedVector& h)
{
    same_grid(f, h);
    return inner(*f.grid, f.values, h.values);
}

double weighted_norm2(const VelocityGrid& g, const CVec& f, double k)
{
    double s = 0.0;
    if (k == 0.0) {
        for (int i = 0; i < g.size(); ++i) s += g.mu_weights[i] * std::norm(f[i]);
    } else {
        for (int i = 0; i < g.size(); ++i)
            s += g.mu_weights[i] * std::pow(g.jv[i], k) * std::norm(f[i]);
    }
    return s;
}

double weighted_norm(const VelocityGrid& g, const CVec& f, double k)
{
    return std::sqrt(weighted_norm2(g, f, k));
}

double weighted_norm(const WeightedVector& f, double k) { return weighted_norm(*f.grid, f.values, k); }

double weighted_norm(const WeightedVector& f) { return weighted_norm(f, f.weight_exponent); }

cplx density(const VelocityGrid& g, const CVec& f)
{
    return integrate(g, f);
}

CVec project_pi(const VelocityGrid& g, const CVec& f)
{
    const cplx rho = integrate(g, f) / g.weights.dot(g.F);
    return rho * g.F.cast<cplx>();
}

CVec project_pi_k(const VelocityGrid& g, const CVec& f, double k)
{
    if (!(k < g.gamma)) throw DomainError("project_pi_k: k must be < gamma");
    CVec wf(g.size());
    double den = 0.0;
    for (int i = 0; i < g.size(); ++i) {
        const double pk = std::pow(g.jv[i], k);
        wf[i] = pk * f[i];
        den += g.weights[i] * pk * g.F[i];
    }
    return (integrate(g, wf) / den) * g.F.cast<cplx>();
}

WeightedVector project_pi(const WeightedVector& f)
{
    return WeightedVector{f.grid, project_pi(*f.grid, f.values), f.weight_exponent};
}

WeightedVector project_pi_k(const WeightedVector& f, double k)
{
    return WeightedVector{f.grid, project_pi_k(*f.grid, f.values, k), f.weight_exponent};
}

void write_grid_csv(const VelocityGrid& g, const std::string& path)
{
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "# kind=" << (g.map.kind == GridKind::Line ? "line" : "radial") << " d=" << g.d
        << " gamma=" << std::setprecision(17) << g.gamma << " scale=" << g.map.scale
        << " t_lo=" << g.map.t_lo << " t_hi=" << g.map.t_hi << " h=" << g.map.h << "\n";
    out << "node,weight,F\n";
    out << std::setprecision(17);
    for (int i = 0; i < g.size(); ++i)
        out << g.nodes[i] << ',' << g.weights[i] << ',' << g.F[i] << '\n';
}

GridPtr read_grid_csv(const std::string& path, const ModelParams& params)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<double> v, w, f;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (line.rfind("node", 0) == 0) continue;
        std::stringstream ss(line);
        std::string a, b, c;
        std::getline(ss, a, ',');
        std::getline(ss, b, ',');
        std::getline(ss, c, ',');
        v.push_back(std::stod(a));
        w.push_back(std::stod(b));
        f.push_back(std::stod(c));
    }
    const int n = static_cast<int>(v.size());
    if (n < 16) throw GridError("grid file has fewer than 16 nodes");
    auto g = std::make_shared<VelocityGrid>();
    g->d = params.d;
    g->gamma = params.gamma;
    g->nodes = Eigen::Map<Vec>(v.data(), n);
    g->weights = Eigen::Map<Vec>(w.data(), n);
    if (params.d != 1) throw GridError("grid restore supports d = 1 only");

    // weights of the sinh map satisfy w^2 = h^2 (s^2 + v^2); recover (s, h)
    const int a = n / 2;
    const int b = n - 1;
    const double h2 = (w[b] * w[b] - w[a] * w[a]) / (v[b] * v[b] - v[a] * v[a]);
    if (!(h2 > 0.0)) throw GridError("grid file is not a sinh-map grid");
    const double h = std::sqrt(h2);
    const double s = std::sqrt(std::max(w[a] * w[a] / h2 - v[a] * v[a], 0.0));
    if (!(s > 0.0)) throw GridError("grid file is not a sinh-map grid");
    g->t.resize(n);
    g->vt.resize(n);
    g->vtt.resize(n);
    for (int i = 0; i < n; ++i) {
        g->t[i] = std::asinh(v[i] / s);
        g->vt[i] = std::hypot(s, v[i]);
        g->vtt[i] = v[i];
    }
    for (int i = 1; i < n; ++i) {
        if (std::abs(g->t[i] - g->t[i - 1] - h) > 1e-8 * std::max(1.0, h))
            throw GridError("grid file nodes are not uniform in the sinh coordinate");
    }
    g->map = {GridKind::Line, s, g->t[0], g->t[n - 1], h, v[n - 1]};
    finish(*g);
    for (int i = 0; i < n; ++i) {
        if (std::abs(g->F[i] - f[i]) > 1e-12 * g->F[i])
            throw GridError("grid file equilibrium does not match the model parameters");
    }
    return g;
}

}  // namespace fattail
