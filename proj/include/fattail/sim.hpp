#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fattail/hypocoercivity.hpp"

namespace fattail {

enum class VelocityProfile { Equilibrium, Bump, File };

struct InitialCondition {
    // Gaussian in x with this standard deviation, unit integral
    double x_width = 1.0;
    VelocityProfile profile = VelocityProfile::Equilibrium;
    double bump_width = 1.0;
    std::string file;  // node,value CSV for VelocityProfile::File
};

struct TimeGrid {
    double t_min = 1e-2;
    double t_max = 1e4;
    int count = 61;

    std::vector<double> times() const;  // 0 followed by log-spaced points
};

struct SimConfig {
    ModelParams params;
    int n_velocity = 400;
    int n_modes = 256;
    double xi_min = 1e-12;
    double xi_max = 10.0;
    InitialCondition initial;
    TimeGrid time;
    double delta = 1.0;
    int threads = 1;
    GridOptions grid;
    EvolveOptions evolve;
    // fraction of the norm in the lowest decade of modes that flags the run
    double box_fraction = 0.2;
};

struct XiGrid {
    std::vector<double> xi;
    std::vector<double> weight;  // dxi quadrature on (0, infinity)
};

XiGrid make_xi_grid(int n_modes, double xi_min, double xi_max);

// Velocity profile on the grid and the Fourier transform of the spatial profile.
Vec initial_velocity_profile(const VelocityGrid& g, const InitialCondition& ic);
double initial_spatial_symbol(const InitialCondition& ic, double xi);
// |f_in|^2 in L^2(<v>^k dx dmu) from the product structure
double initial_norm2(const VelocityGrid& g, const InitialCondition& ic, double k);

struct SimResult {
    std::vector<double> times;
    std::vector<double> L2_norm2;
    std::vector<double> weighted_norm2;
    std::vector<double> L1_bound;
    std::vector<double> mass;  // zero mode density
    XiGrid xi;
    std::vector<std::vector<double>> mode_norm2;  // [mode][time]
    double initial_norm2 = 0.0;
    double initial_weighted_norm2 = 0.0;
    bool box_limited = false;
    double low_mode_fraction = 0.0;
    int stepper_modes = 0;
    int clamped_eigenvalues = 0;
    double seconds = 0.0;
};

SimResult run_simulation(const SimConfig& cfg);

struct MonitorReport {
    double max_ratio = 0.0;
    double final_decade_slope = 0.0;
    bool bounded = false;
    bool no_upward_trend = false;
};

MonitorReport weighted_norm_monitor(const SimResult& res, double gate = 3.0);

enum class FitModel { PowerLaw, PowerLogLaw };

struct RateFit {
    FitModel model = FitModel::PowerLaw;
    double tau_hat = 0.0;
    double intercept = 0.0;
    double t_lo = 0.0;
    double t_hi = 0.0;
    double stderr_ = 0.0;
    double residual = 0.0;  // max deviation of the log series from the fit
    int points = 0;
    std::optional<double> log_corrected_fit;
};

class FitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Window defaults to the last decade of the positive times.
RateFit fit_rate(const std::vector<double>& t, const std::vector<double>& y, FitModel model,
                 double t_lo = 0.0, double t_hi = 0.0);

std::string to_string(FitModel m);

}  // namespace fattail
