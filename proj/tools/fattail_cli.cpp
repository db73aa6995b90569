#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>

#include "fattail/config.hpp"
#include "fattail/io.hpp"
#include "fattail/verify.hpp"

using namespace fattail;

namespace {

struct ModelFlags {
    std::string config;
    std::optional<int> d;
    std::optional<double> gamma, beta, sigma, k;
    std::optional<std::string> op, kernel;
    std::optional<int> n;

    void attach(CLI::App* app)
    {
        app->add_option("-c,--config", config, "JSON configuration file");
        app->add_option("--d", d, "velocity dimension");
        app->add_option("--gamma", gamma, "tail exponent of the equilibrium");
        app->add_option("--beta", beta, "scattering kernel exponent");
        app->add_option("--sigma", sigma, "fractional order");
        app->add_option("--k", k, "moment order");
        app->add_option("--operator", op, "fokker-planck | scattering | fractional");
        app->add_option("--kernel", kernel, "separable | power-difference");
        app->add_option("--n", n, "velocity nodes");
    }

    AppConfig resolve() const
    {
        AppConfig c = config.empty() ? default_config() : load_config(config);
        ModelParams& p = c.sim.params;
        if (d) p.d = *d;
        if (gamma) p.gamma = *gamma;
        if (beta) p.op.beta = *beta;
        if (sigma) p.op.sigma = *sigma;
        if (op) {
            if (*op == "fokker-planck") p.op.kind = OperatorKind::FokkerPlanck;
            else if (*op == "scattering") p.op.kind = OperatorKind::Scattering;
            else if (*op == "fractional") p.op.kind = OperatorKind::FractionalFP;
            else throw ConfigError("unknown operator " + *op);
        }
        if (kernel) {
            if (*kernel == "separable") p.op.kernel = ScatteringKernel::Separable;
            else if (*kernel == "power-difference") p.op.kernel = ScatteringKernel::PowerDifference;
            else throw ConfigError("unknown kernel " + *kernel);
        }
        if (n) c.sim.n_velocity = *n;
        if (k) p.k = *k;
        else if (!(p.k < p.gamma)) p.k = 0.5 * p.gamma;
        p.validate();
        return c;
    }
};

std::string out_path(const AppConfig& c, const std::string& suffix)
{
    std::filesystem::create_directories(c.output.dir);
    return (std::filesystem::path(c.output.dir) / (c.output.prefix + suffix)).string();
}

int cmd_coeffs(const ModelFlags& mf, double xi_min, double xi_max, int count, std::optional<double> eta,
               const std::string& out)
{
    const AppConfig c = mf.resolve();
    const ModelParams& p = c.sim.params;
    const double e = eta.value_or(c.eta_value());
    std::vector<CoefficientSet> rows;
    const int n = mf.n.value_or(800);
    if (p.d == 1) {
        const GridPtr g = coefficient_grid(p, xi_min, n);
        const CollisionOperator op = assemble_operator(p, g);
        for (int j = 0; j < count; ++j) {
            const double xi = xi_min * std::pow(xi_max / xi_min, count > 1 ? double(j) / (count - 1) : 0.0);
            rows.push_back(compute_coefficients(op, xi, e));
        }
    } else {
        GridOptions go;
        go.v_floor = std::pow(xi_min, -1.0 / std::abs(1.0 + p.beta())) * 1e8;
        const GridPtr g = build_grid(p, n, go);
        for (int j = 0; j < count; ++j) {
            const double xi = xi_min * std::pow(xi_max / xi_min, count > 1 ? double(j) / (count - 1) : 0.0);
            rows.push_back(compute_coefficients_radial(p, *g, xi, e));
        }
    }
    write_coefficients_csv(rows, out);
    const Mu2Reference ref = mu2_asymptotic_reference(p, xi_min);
    std::cout << "mu2 small-xi exponent " << ref.exponent << (ref.log_corrected ? " with log correction" : "")
              << "\nwrote " << out << "\n";
    return 0;
}

int cmd_evolve(const ModelFlags& mf, double xi, double t_max, int count, std::optional<double> delta,
               const std::string& out)
{
    AppConfig c = mf.resolve();
    if (delta) c.sim.delta = *delta;
    const ModelParams& p = c.sim.params;
    const GridPtr g = build_grid(p, c.sim.n_velocity, c.sim.grid);
    const CollisionOperator op = assemble_operator(p, g);
    const Vec fv = initial_velocity_profile(*g, c.sim.initial);
    // a microscopic component so that every I-term is active
    CVec f0 = fv.cast<cplx>();
    for (int i = 0; i < g->size(); ++i) f0[i] += 0.5 * g->F[i] * cplx(std::tanh(g->nodes[i]), 0.0);
    std::vector<double> times;
    for (int j = 0; j < count; ++j) times.push_back(t_max * j / (count - 1));
    const EvolveResult r = evolve_mode({xi, f0, 0.0}, op, times, c.sim.evolve);
    if (!r.note.empty()) std::cerr << r.note << "\n";
    const auto rep = entropy_report(op, r.states, c.sim.delta, c.eta_value());
    write_entropy_csv(rep, out);
    std::cout << "wrote " << out << " (" << rep.size() << " rows)\n";
    return 0;
}

int cmd_simulate(const ModelFlags& mf, std::optional<bool> svg)
{
    AppConfig c = mf.resolve();
    if (svg) c.output.svg = *svg;
    const SimResult res = run_simulation(c.sim);
    const std::string series = out_path(c, "_series.csv");
    write_series_csv(res, series);
    write_modes_csv(res, out_path(c, "_modes.csv"));
    const RatePrediction pred = predicted_rate(c.sim.params);
    std::cout << std::setprecision(6) << "runtime " << res.seconds << " s\n";
    std::cout << "predicted tau " << pred.tau << (pred.log_corrected ? " (log corrected)" : "") << "\n";
    try {
        const RateFit fit = fit_rate(res.times, res.L2_norm2, c.fit.model, c.fit.t_lo, c.fit.t_hi);
        std::cout << "fitted tau " << fit.tau_hat << " +- " << fit.stderr_ << " on [" << fit.t_lo << ", " << fit.t_hi
                  << "]\n";
    } catch (const FitError& e) {
        std::cout << "no fit: " << e.what() << "\n";
    }
    const MonitorReport mon = weighted_norm_monitor(res);
    std::cout << "weighted norm ratio " << mon.max_ratio << ", final decade slope " << mon.final_decade_slope << "\n";
    if (res.box_limited) std::cout << "warning: lowest wavenumbers carry " << res.low_mode_fraction << " of the norm\n";
    if (c.output.svg) {
        std::vector<double> t(res.times.begin() + 1, res.times.end());
        std::vector<double> y(res.L2_norm2.begin() + 1, res.L2_norm2.end());
        std::optional<double> tau;
        if (std::isfinite(pred.tau)) tau = pred.tau;
        write_loglog_svg(out_path(c, "_norm.svg"), "L2 norm squared", {{"|f(t)|^2", t, y}}, tau);
    }
    std::cout << "wrote " << series << "\n";
    return 0;
}

int cmd_rates(const ModelFlags& mf, const std::string& series, const std::string& model_name)
{
    const AppConfig c = mf.resolve();
    const ModelParams& p = c.sim.params;
    const RatePrediction pred = predicted_rate(p);
    std::cout << std::setprecision(8);
    std::cout << "alpha " << pred.alpha << "\ntau " << pred.tau << "\nregime " << to_string(pred.regime)
              << "\nlog_corrected " << pred.log_corrected << "\nattained " << pred.attained << "\n";
    if (p.d == 1 && p.op.kind == OperatorKind::Scattering) std::cout << "tau_star_limit " << pred.tau_star_limit << "\n";
    if (!series.empty()) {
        std::ifstream in(series);
        if (!in) throw IoError("cannot open " + series);
        std::string line;
        std::getline(in, line);
        std::vector<double> t, y;
        while (std::getline(in, line)) {
            std::replace(line.begin(), line.end(), ',', ' ');
            std::istringstream ss(line);
            double a, b;
            if (ss >> a >> b) {
                t.push_back(a);
                y.push_back(b);
            }
        }
        const FitModel m = model_name == "power-log" ? FitModel::PowerLogLaw : FitModel::PowerLaw;
        const RateFit fit = fit_rate(t, y, m, c.fit.t_lo, c.fit.t_hi);
        std::cout << "fitted_tau " << fit.tau_hat << "\nstderr " << fit.stderr_ << "\nresidual " << fit.residual
                  << "\nwindow " << fit.t_lo << " " << fit.t_hi << "\n";
    }
    return 0;
}

int cmd_verify(const ModelFlags& mf, double mutate, const std::string& json_out)
{
    const AppConfig c = mf.resolve();
    VerifyOptions vo;
    vo.mutate = mutate;
    if (mf.n) vo.n = *mf.n;
    const VerifyReport rep = verify_suite(c, vo);
    for (const auto& ch : rep.checks) {
        std::cout << (ch.passed ? "PASS " : "FAIL ") << std::left << std::setw(44) << ch.key << " " << ch.value
                  << " (gate " << ch.threshold << ")\n";
    }
    if (!json_out.empty()) {
        std::ofstream out(json_out);
        out << rep.to_json() << "\n";
    }
    return rep.all_passed() ? 0 : 1;
}

int cmd_export(const ModelFlags& mf, const std::string& what, const std::string& out)
{
    const AppConfig c = mf.resolve();
    const ModelParams& p = c.sim.params;
    const GridPtr g = build_grid(p, c.sim.n_velocity, c.sim.grid);
    if (what == "grid") {
        write_grid_csv(*g, out);
    } else if (what == "operator") {
        write_operator_csv(assemble_operator(p, g), out);
    } else if (what == "force-field") {
        write_force_field_csv(*g, build_force_field(p, g), out);
    } else {
        throw ConfigError("export target must be grid, operator or force-field");
    }
    std::cout << "wrote " << out << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Decay of kinetic equations with fat-tailed equilibria"};
    app.require_subcommand(1);

    ModelFlags mf;

    auto* coeffs = app.add_subcommand("coeffs", "coefficient family and K over a wavenumber sweep");
    mf.attach(coeffs);
    double xi_min = 1e-6, xi_max = 1e3;
    int count = 60;
    std::optional<double> eta;
    std::string coeffs_out = "coefficients.csv";
    coeffs->add_option("--xi-min", xi_min);
    coeffs->add_option("--xi-max", xi_max);
    coeffs->add_option("--count", count);
    coeffs->add_option("--eta", eta);
    coeffs->add_option("-o,--output", coeffs_out);

    auto* evolve = app.add_subcommand("evolve-mode", "single Fourier mode with entropy diagnostics");
    mf.attach(evolve);
    double xi = 0.1, t_max = 20.0;
    int steps = 201;
    std::optional<double> delta;
    std::string evolve_out = "mode.csv";
    evolve->add_option("--xi", xi);
    evolve->add_option("--t-max", t_max);
    evolve->add_option("--count", steps);
    evolve->add_option("--delta", delta);
    evolve->add_option("-o,--output", evolve_out);

    auto* simulate = app.add_subcommand("simulate", "space-velocity run by Fourier mode sweep");
    mf.attach(simulate);
    std::optional<bool> svg;
    simulate->add_flag("--svg,!--no-svg", svg, "write a log-log plot");

    auto* rates = app.add_subcommand("rates", "predicted decay rate and optional fit of a series");
    mf.attach(rates);
    std::string series, fit_model = "power";
    rates->add_option("--series", series, "CSV with t and value columns");
    rates->add_option("--fit", fit_model, "power | power-log");

    auto* verify = app.add_subcommand("verify", "invariant battery; nonzero exit iff a check fails");
    mf.attach(verify);
    double mutate = 0.0;
    std::string json_out;
    verify->add_option("--mutate", mutate, "asymmetric kernel perturbation (sensitivity demo)");
    verify->add_option("--json", json_out, "write the report as JSON");

    auto* exp = app.add_subcommand("export", "grid, operator matrix or force-field tables");
    mf.attach(exp);
    std::string what = "grid", exp_out = "export.csv";
    exp->add_option("what", what, "grid | operator | force-field");
    exp->add_option("-o,--output", exp_out);

    CLI11_PARSE(app, argc, argv);
    try {
        if (coeffs->parsed()) return cmd_coeffs(mf, xi_min, xi_max, count, eta, coeffs_out);
        if (evolve->parsed()) return cmd_evolve(mf, xi, t_max, steps, delta, evolve_out);
        if (simulate->parsed()) return cmd_simulate(mf, svg);
        if (rates->parsed()) return cmd_rates(mf, series, fit_model);
        if (verify->parsed()) return cmd_verify(mf, mutate, json_out);
        if (exp->parsed()) return cmd_export(mf, what, exp_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
