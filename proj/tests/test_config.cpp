#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "fattail/config.hpp"
#include "fattail/io.hpp"

using namespace fattail;

namespace {

std::string temp_path(const std::string& name) { return (std::filesystem::temp_directory_path() / name).string(); }

std::string slurp(const std::string& path)
{
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("empty config gives the defaults")
{
    const AppConfig c = parse_config("{}");
    CHECK(c.sim.params.op.kind == OperatorKind::Scattering);
    CHECK(c.sim.params.gamma == 1.0);
    CHECK(c.sim.params.k == 0.5);
    CHECK(c.sim.n_velocity == 400);
    CHECK(c.sim.n_modes == 256);
    CHECK(c.sim.delta == 1.0);
    CHECK_FALSE(c.eta.has_value());
    CHECK(c.eta_value() == 0.0);
}

TEST_CASE("config fields are read")
{
    const AppConfig c = parse_config(R"({
        "model": {"operator": "fractional", "gamma": 1.5, "sigma": 0.7, "k": 0.25},
        "grid": {"n": 200, "scale": 2.0},
        "modes": {"count": 32, "xi_min": 1e-6, "xi_max": 5},
        "initial": {"velocity": "bump", "bump_width": 3, "x_width": 0.5},
        "time": {"t_min": 0.1, "t_max": 100, "count": 11},
        "hypocoercivity": {"delta": 0.5, "eta": 0.2},
        "fit": {"model": "power-log", "t_lo": 10},
        "evolve": {"force_stepper": true},
        "threads": 3,
        "output": {"dir": "out", "prefix": "x", "svg": true}
    })");
    CHECK(c.sim.params.op.kind == OperatorKind::FractionalFP);
    CHECK(c.sim.params.sigma() == 0.7);
    CHECK(c.sim.grid.scale == 2.0);
    CHECK(c.sim.n_modes == 32);
    CHECK(c.sim.initial.profile == VelocityProfile::Bump);
    CHECK(c.sim.time.count == 11);
    CHECK(*c.eta == 0.2);
    CHECK(c.fit.model == FitModel::PowerLogLaw);
    CHECK(c.sim.evolve.force_stepper);
    CHECK(c.sim.threads == 3);
    CHECK(c.output.svg);

    const AppConfig again = parse_config(dump_config(c));
    CHECK(dump_config(again) == dump_config(c));
}

TEST_CASE("invalid configs are rejected")
{
    const char* bad[] = {
        R"({"modle": {}})",
        R"({"model": {"gamma": 1, "bta": 0}})",
        R"({"model": {"operator": "bgk"}})",
        R"({"model": {"gamma": 1, "k": 1}})",
        R"({"model": {"gamma": -1}})",
        R"({"model": {"gamma": "one"}})",
        R"({"hypocoercivity": {"delta": 2}})",
        R"({"hypocoercivity": {"delta": 0}})",
        R"({"hypocoercivity": {"eta": 1.5}})",
        R"({"grid": {"n": 4}})",
        R"({"modes": {"xi_min": 0}})",
        R"({"initial": {"velocity": "file"}})",
        R"({"time": {"t_min": 10, "t_max": 1}})",
        R"({"fit": {"model": "exp"}})",
        R"({"threads": 0})",
        R"([1, 2])",
        R"({"model": )",
    };
    for (const char* text : bad) {
        CAPTURE(text);
        CHECK_THROWS_AS(parse_config(text), ConfigError);
    }
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("config file loads")
{
    const std::string path = temp_path("fattail_config_test.json");
    {
        std::ofstream out(path);
        out << R"({"model": {"gamma": 4, "k": 0.5}})";
    }
    CHECK(load_config(path).sim.params.gamma == 4.0);
    std::remove(path.c_str());
}

TEST_CASE("CSV and SVG writers")
{
    SimResult r;
    r.times = {0.0, 1.0, 10.0, 100.0};
    r.L2_norm2 = {1.0, 0.5, 0.1, 0.01};
    r.weighted_norm2 = r.L2_norm2;
    r.L1_bound = {1.0, 1.0, 1.0, 1.0};
    r.mass = r.L1_bound;
    r.xi.xi = {0.1, 1.0};
    r.xi.weight = {0.5, 0.5};
    r.mode_norm2 = {{1.0, 0.9, 0.5, 0.1}, {1.0, 0.1, 0.0, 0.0}};

    const std::string series = temp_path("fattail_series.csv");
    write_series_csv(r, series);
    const std::string s = slurp(series);
    CHECK(s.rfind("t,L2_norm2,weighted_norm2,L1_bound,mass\n", 0) == 0);
    CHECK(std::count(s.begin(), s.end(), '\n') == 5);

    const std::string modes = temp_path("fattail_modes.csv");
    write_modes_csv(r, modes);
    CHECK(slurp(modes).rfind("xi,weight,t=0,t=1,t=10,t=100\n", 0) == 0);

    CoefficientSet c;
    c.xi = 1.0;
    c.lambda0 = c.mu2 = c.tlambda0 = c.tmu1 = c.tmu2 = c.tlambda1 = 1.0;
    const std::string coeffs = temp_path("fattail_coeffs.csv");
    write_coefficients_csv({c}, coeffs);
    CHECK(slurp(coeffs).rfind("xi,eta,lambda0,lambda1,tlambda0,tlambda1,mu2,tmu1,tmu2,muL,lambdaL,K\n", 0) == 0);

    const std::string svg = temp_path("fattail_plot.svg");
    write_loglog_svg(svg, "norm", {{"|f|^2", r.times, r.L2_norm2}}, 1.0);
    const std::string text = slurp(svg);
    CHECK(text.rfind("<svg", 0) == 0);
    CHECK(text.find("polyline") != std::string::npos);
    CHECK(text.find("stroke-dasharray") != std::string::npos);

    CHECK_THROWS_AS(write_series_csv(r, "/nonexistent/dir/x.csv"), IoError);
    for (const auto& p : {series, modes, coeffs, svg}) std::remove(p.c_str());
}
