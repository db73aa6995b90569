#pragma once

#include <stdexcept>
#include <string>

namespace fattail {

class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class RegimeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class OperatorKind { FokkerPlanck, Scattering, FractionalFP };
enum class ScatteringKernel { Separable, PowerDifference };

struct OperatorSpec {
    OperatorKind kind = OperatorKind::Scattering;
    ScatteringKernel kernel = ScatteringKernel::Separable;
    double beta = 0.0;   // only read for Scattering
    double sigma = 1.0;  // only read for FractionalFP
};

struct ModelParams {
    int d = 1;
    double gamma = 1.0;
    OperatorSpec op;
    double k = 0.0;

    double beta() const;
    double beta_plus() const;
    double sigma() const;
    void validate() const;
    void require_moment(double kk, const char* what) const;
};

ModelParams make_fokker_planck(int d, double gamma, double k = 0.0);
ModelParams make_scattering(int d, double gamma, double beta,
                            ScatteringKernel kernel = ScatteringKernel::Separable,
                            double k = 0.0);
ModelParams make_fractional(int d, double gamma, double sigma, double k = 0.0);

std::string to_string(OperatorKind kind);
std::string to_string(ScatteringKernel kernel);

enum class RateRegime { Standard, CriticalLog, D1Intermediate };
std::string to_string(RateRegime regime);

struct RatePrediction {
    double alpha = 2.0;
    double tau = 0.0;  // may be +infinity
    bool log_corrected = false;
    RateRegime regime = RateRegime::Standard;
    // false when tau is only a supremum of admissible rates
    bool attained = true;
    // second d=1 formula, exposed for comparison in the intermediate regime
    double tau_star_limit = 0.0;
};

inline constexpr double kCriticalTolerance = 1e-12;

double normalization_constant(int d, double gamma);
double unit_sphere_area(int d);
double equilibrium(int d, double gamma, double v_norm);
double japanese(double v);

double alpha_exponent(double gamma, double beta);
double gamma_star(int d, double beta);
bool is_critical(double gamma, double beta);

RatePrediction predicted_rate(const ModelParams& params);
double tau_star(const ModelParams& params, double eta);
double tau_star_limit(double gamma, double beta);

double nash_profile(int d, double a, double s);
double log_nash_profile(int d, double x);

}  // namespace fattail
