#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fattail/config.hpp"
#include "fattail/verify.hpp"

namespace py = pybind11;
using namespace fattail;

namespace {

ModelParams model_from(const std::string& op, int d, double gamma, double beta, double sigma, double k,
                       const std::string& kernel)
{
    ModelParams p;
    if (op == "fokker-planck") {
        p = make_fokker_planck(d, gamma, k);
    } else if (op == "fractional") {
        p = make_fractional(d, gamma, sigma, k);
    } else if (op == "scattering") {
        const ScatteringKernel kern =
            kernel == "power-difference" ? ScatteringKernel::PowerDifference : ScatteringKernel::Separable;
        p = make_scattering(d, gamma, beta, kern, k);
    } else {
        throw DomainError("unknown operator '" + op + "'");
    }
    p.validate();
    return p;
}

py::dict grid_dict(const VelocityGrid& g)
{
    py::dict out;
    out["nodes"] = g.nodes;
    out["weights"] = g.weights;
    out["F"] = g.F;
    out["v_max"] = g.map.v_max;
    return out;
}

}  // namespace

PYBIND11_MODULE(_fattail, m)
{
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<RegimeError>(m, "RegimeError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<FitError>(m, "FitError", PyExc_ValueError);

    py::class_<ModelParams>(m, "Model")
        .def(py::init(&model_from), py::arg("operator") = "scattering", py::arg("d") = 1, py::arg("gamma") = 1.0,
             py::arg("beta") = 0.0, py::arg("sigma") = 1.0, py::arg("k") = 0.0, py::arg("kernel") = "separable")
        .def_readonly("d", &ModelParams::d)
        .def_readonly("gamma", &ModelParams::gamma)
        .def_readonly("k", &ModelParams::k)
        .def_property_readonly("beta", &ModelParams::beta)
        .def("__repr__", [](const ModelParams& p) {
            return "Model(" + to_string(p.op.kind) + ", d=" + std::to_string(p.d) + ", gamma=" + std::to_string(p.gamma) +
                   ")";
        });

    m.def("predicted_rate", [](const ModelParams& p) {
        const RatePrediction r = predicted_rate(p);
        py::dict out;
        out["alpha"] = r.alpha;
        out["tau"] = r.tau;
        out["log_corrected"] = r.log_corrected;
        out["regime"] = to_string(r.regime);
        return out;
    });

    m.def("equilibrium", &equilibrium, py::arg("d"), py::arg("gamma"), py::arg("v"));
    m.def("nash_profile", &nash_profile, py::arg("d"), py::arg("a"), py::arg("s"));

    m.def(
        "grid", [](const ModelParams& p, int n) { return grid_dict(*build_grid(p, n)); }, py::arg("model"),
        py::arg("n") = 400);

    m.def(
        "operator_matrix",
        [](const ModelParams& p, int n) { return assemble_operator(p, build_grid(p, n)).matrix; }, py::arg("model"),
        py::arg("n") = 400);

    m.def(
        "coefficients",
        [](const ModelParams& p, const std::vector<double>& xi, std::optional<double> eta, int n) {
            double lo = 1e300;
            for (double x : xi) lo = std::min(lo, x);
            const CollisionOperator op = assemble_operator(p, coefficient_grid(p, lo, n));
            const double e = eta ? *eta : default_eta(p);
            py::list rows;
            for (double x : xi) {
                const CoefficientSet c = compute_coefficients(op, x, e);
                py::dict r;
                r["xi"] = c.xi;
                r["lambda0"] = c.lambda0;
                r["lambda1"] = c.lambda1;
                r["mu2"] = c.mu2;
                r["tlambda0"] = c.tlambda0;
                r["tmu1"] = c.tmu1;
                r["tmu2"] = c.tmu2;
                r["muL"] = c.muL;
                r["lambdaL"] = c.lambdaL;
                r["K"] = K_bound(c);
                rows.append(r);
            }
            return rows;
        },
        py::arg("model"), py::arg("xi"), py::arg("eta") = py::none(), py::arg("n") = 800);

    m.def(
        "evolve_mode",
        [](const ModelParams& p, double xi, const std::vector<double>& times, int n, double delta) {
            const CollisionOperator op = assemble_operator(p, build_grid(p, n));
            const ModeState start{xi, op.grid->F.cast<cplx>(), 0.0};
            // perturb the equilibrium by an odd profile so the mode is not stationary
            ModeState s = start;
            for (int i = 0; i < op.size(); ++i) s.values[i] *= 1.0 + op.grid->nodes[i] / op.grid->jv[i];
            const EvolveResult r = evolve_mode(s, op, times);
            const auto rep = entropy_report(op, r.states, delta, 0.0);
            py::dict out;
            std::vector<double> norm2, H;
            for (const auto& e : rep) {
                norm2.push_back(e.norm2);
                H.push_back(e.H);
            }
            out["t"] = times;
            out["norm2"] = norm2;
            out["H"] = H;
            out["used_stepper"] = r.used_stepper;
            return out;
        },
        py::arg("model"), py::arg("xi"), py::arg("times"), py::arg("n") = 200, py::arg("delta") = 1.0);

    m.def(
        "simulate",
        [](const std::string& config_json) {
            const AppConfig c = parse_config(config_json);
            const SimResult r = run_simulation(c.sim);
            py::dict out;
            out["t"] = r.times;
            out["L2_norm2"] = r.L2_norm2;
            out["weighted_norm2"] = r.weighted_norm2;
            out["mass"] = r.mass;
            out["stepper_modes"] = r.stepper_modes;
            return out;
        },
        py::arg("config_json") = "{}");

    m.def(
        "fit_rate",
        [](const std::vector<double>& t, const std::vector<double>& y, const std::string& model, double t_lo,
           double t_hi) {
            const FitModel fm = model == "power-log" ? FitModel::PowerLogLaw : FitModel::PowerLaw;
            const RateFit f = fit_rate(t, y, fm, t_lo, t_hi);
            py::dict out;
            out["tau_hat"] = f.tau_hat;
            out["residual"] = f.residual;
            out["t_lo"] = f.t_lo;
            out["t_hi"] = f.t_hi;
            return out;
        },
        py::arg("t"), py::arg("y"), py::arg("model") = "power", py::arg("t_lo") = 0.0, py::arg("t_hi") = 0.0);

    m.def(
        "verify",
        [](const std::string& config_json, int n) {
            VerifyOptions vo;
            vo.n = n;
            return verify_suite(parse_config(config_json), vo).to_json();
        },
        py::arg("config_json") = "{}", py::arg("n") = 400);
}
