#include "fattail/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace fattail {

using nlohmann::json;

double AppConfig::eta_value() const { return eta.value_or(default_eta(sim.params)); }

AppConfig default_config()
{
    AppConfig c;
    c.sim.params = make_scattering(1, 1.0, 0.0, ScatteringKernel::Separable, 0.5);
    return c;
}

namespace {

void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed)
{
    if (!obj.is_object()) throw ConfigError(where + " must be an object");
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!ok.count(it.key())) throw ConfigError("unknown key '" + it.key() + "' in " + where);
}

template <class T>
void read(const json& obj, const char* key, T& out)
{
    if (obj.contains(key)) {
        try {
            out = obj.at(key).get<T>();
        } catch (const json::exception& e) {
            throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
        }
    }
}

OperatorKind parse_kind(const std::string& s)
{
    if (s == "fokker-planck") return OperatorKind::FokkerPlanck;
    if (s == "scattering") return OperatorKind::Scattering;
    if (s == "fractional") return OperatorKind::FractionalFP;
    throw ConfigError("operator must be fokker-planck, scattering or fractional");
}

ScatteringKernel parse_kernel(const std::string& s)
{
    if (s == "separable") return ScatteringKernel::Separable;
    if (s == "power-difference") return ScatteringKernel::PowerDifference;
    throw ConfigError("kernel must be separable or power-difference");
}

VelocityProfile parse_profile(const std::string& s)
{
    if (s == "equilibrium") return VelocityProfile::Equilibrium;
    if (s == "bump") return VelocityProfile::Bump;
    if (s == "file") return VelocityProfile::File;
    throw ConfigError("initial.velocity must be equilibrium, bump or file");
}

std::string profile_name(VelocityProfile p)
{
    switch (p) {
    case VelocityProfile::Equilibrium: return "equilibrium";
    case VelocityProfile::Bump: return "bump";
    case VelocityProfile::File: return "file";
    }
    return "";
}

std::string kind_name(OperatorKind k)
{
    switch (k) {
    case OperatorKind::FokkerPlanck: return "fokker-planck";
    case OperatorKind::Scattering: return "scattering";
    case OperatorKind::FractionalFP: return "fractional";
    }
    return "";
}

}  // namespace

AppConfig parse_config(const std::string& text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
    check_keys(j, "config", {"model", "grid", "modes", "initial", "time", "hypocoercivity", "fit", "evolve",
                             "threads", "output"});
    AppConfig c = default_config();
    SimConfig& s = c.sim;

    if (j.contains("model")) {
        const json& m = j["model"];
        check_keys(m, "model", {"d", "gamma", "operator", "kernel", "beta", "sigma", "k"});
        read(m, "d", s.params.d);
        read(m, "gamma", s.params.gamma);
        if (m.contains("operator")) s.params.op.kind = parse_kind(m["operator"].get<std::string>());
        if (m.contains("kernel")) s.params.op.kernel = parse_kernel(m["kernel"].get<std::string>());
        read(m, "beta", s.params.op.beta);
        read(m, "sigma", s.params.op.sigma);
        read(m, "k", s.params.k);
    }
    if (j.contains("grid")) {
        const json& g = j["grid"];
        check_keys(g, "grid", {"n", "scale", "v_max", "v_floor", "tol"});
        read(g, "n", s.n_velocity);
        read(g, "scale", s.grid.scale);
        read(g, "v_max", s.grid.v_max);
        read(g, "v_floor", s.grid.v_floor);
        read(g, "tol", s.grid.tol);
    }
    if (j.contains("modes")) {
        const json& m = j["modes"];
        check_keys(m, "modes", {"count", "xi_min", "xi_max", "box_fraction"});
        read(m, "count", s.n_modes);
        read(m, "xi_min", s.xi_min);
        read(m, "xi_max", s.xi_max);
        read(m, "box_fraction", s.box_fraction);
    }
    if (j.contains("initial")) {
        const json& i = j["initial"];
        check_keys(i, "initial", {"x_width", "velocity", "bump_width", "file"});
        read(i, "x_width", s.initial.x_width);
        if (i.contains("velocity")) s.initial.profile = parse_profile(i["velocity"].get<std::string>());
        read(i, "bump_width", s.initial.bump_width);
        read(i, "file", s.initial.file);
    }
    if (j.contains("time")) {
        const json& t = j["time"];
        check_keys(t, "time", {"t_min", "t_max", "count"});
        read(t, "t_min", s.time.t_min);
        read(t, "t_max", s.time.t_max);
        read(t, "count", s.time.count);
    }
    if (j.contains("hypocoercivity")) {
        const json& h = j["hypocoercivity"];
        check_keys(h, "hypocoercivity", {"delta", "eta"});
        read(h, "delta", s.delta);
        if (h.contains("eta") && !h["eta"].is_null()) c.eta = h["eta"].get<double>();
    }
    if (j.contains("fit")) {
        const json& f = j["fit"];
        check_keys(f, "fit", {"model", "t_lo", "t_hi"});
        if (f.contains("model")) {
            const std::string name = f["model"].get<std::string>();
            if (name == "power") c.fit.model = FitModel::PowerLaw;
            else if (name == "power-log") c.fit.model = FitModel::PowerLogLaw;
            else throw ConfigError("fit.model must be power or power-log");
        }
        read(f, "t_lo", c.fit.t_lo);
        read(f, "t_hi", c.fit.t_hi);
    }
    if (j.contains("evolve")) {
        const json& e = j["evolve"];
        check_keys(e, "evolve", {"tol", "cond_limit", "force_stepper"});
        read(e, "tol", s.evolve.tol);
        read(e, "cond_limit", s.evolve.cond_limit);
        read(e, "force_stepper", s.evolve.force_stepper);
    }
    read(j, "threads", s.threads);
    if (j.contains("output")) {
        const json& o = j["output"];
        check_keys(o, "output", {"dir", "prefix", "svg"});
        read(o, "dir", c.output.dir);
        read(o, "prefix", c.output.prefix);
        read(o, "svg", c.output.svg);
    }

    try {
        s.params.validate();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("model: ") + e.what());
    }
    if (!(s.params.k < s.params.gamma)) throw ConfigError("model.k must be smaller than gamma");
    if (!(s.delta > 0.0 && s.delta < 2.0)) throw ConfigError("hypocoercivity.delta must lie in (0,2)");
    if (c.eta && !(*c.eta > -s.params.gamma && *c.eta < s.params.gamma))
        throw ConfigError("hypocoercivity.eta must lie in (-gamma, gamma)");
    if (s.n_velocity < 16) throw ConfigError("grid.n must be at least 16");
    if (s.n_modes < 8) throw ConfigError("modes.count must be at least 8");
    if (!(s.xi_min > 0.0 && s.xi_max > s.xi_min)) throw ConfigError("modes.xi_min must be positive and below xi_max");
    if (!(s.initial.x_width > 0.0)) throw ConfigError("initial.x_width must be positive");
    if (s.initial.profile == VelocityProfile::File && s.initial.file.empty())
        throw ConfigError("initial.file is required for a file profile");
    if (!(s.time.t_min > 0.0 && s.time.t_max > s.time.t_min && s.time.count >= 2))
        throw ConfigError("time needs 0 < t_min < t_max and count >= 2");
    if (s.threads < 1) throw ConfigError("threads must be positive");
    return c;
}

AppConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string dump_config(const AppConfig& c)
{
    const SimConfig& s = c.sim;
    json j;
    j["model"] = {{"d", s.params.d},
                  {"gamma", s.params.gamma},
                  {"operator", kind_name(s.params.op.kind)},
                  {"kernel", s.params.op.kernel == ScatteringKernel::Separable ? "separable" : "power-difference"},
                  {"beta", s.params.op.beta},
                  {"sigma", s.params.op.sigma},
                  {"k", s.params.k}};
    j["grid"] = {{"n", s.n_velocity},
                 {"scale", s.grid.scale},
                 {"v_max", s.grid.v_max},
                 {"v_floor", s.grid.v_floor},
                 {"tol", s.grid.tol}};
    j["modes"] = {{"count", s.n_modes}, {"xi_min", s.xi_min}, {"xi_max", s.xi_max}, {"box_fraction", s.box_fraction}};
    j["initial"] = {{"x_width", s.initial.x_width},
                    {"velocity", profile_name(s.initial.profile)},
                    {"bump_width", s.initial.bump_width},
                    {"file", s.initial.file}};
    j["time"] = {{"t_min", s.time.t_min}, {"t_max", s.time.t_max}, {"count", s.time.count}};
    j["hypocoercivity"] = {{"delta", s.delta}};
    j["hypocoercivity"]["eta"] = c.eta ? json(*c.eta) : json(nullptr);
    j["fit"] = {{"model", to_string(c.fit.model)}, {"t_lo", c.fit.t_lo}, {"t_hi", c.fit.t_hi}};
    j["evolve"] = {{"tol", s.evolve.tol}, {"cond_limit", s.evolve.cond_limit}, {"force_stepper", s.evolve.force_stepper}};
    j["threads"] = s.threads;
    j["output"] = {{"dir", c.output.dir}, {"prefix", c.output.prefix}, {"svg", c.output.svg}};
    return j.dump(2);
}

}  // namespace fattail
