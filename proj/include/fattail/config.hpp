#pragma once

#include <optional>
#include <string>

#include "fattail/sim.hpp"

namespace fattail {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct FitSettings {
    FitModel model = FitModel::PowerLaw;
    double t_lo = 0.0;  // 0 selects the last decade
    double t_hi = 0.0;
};

struct OutputSettings {
    std::string dir = ".";
    std::string prefix = "run";
    bool svg = false;
};

struct AppConfig {
    SimConfig sim;
    std::optional<double> eta;  // unset selects the default weight exponent
    FitSettings fit;
    OutputSettings output;

    double eta_value() const;
};

AppConfig default_config();
AppConfig parse_config(const std::string& json_text);
AppConfig load_config(const std::string& path);
std::string dump_config(const AppConfig& cfg);

}  // namespace fattail
