#pragma once

#include "fattail/collision.hpp"

namespace fattail {

struct SymbolFunctions {
    double beta = 0.0;
    double eta = 0.0;

    double phi(double xi, double v_norm) const;
    double psi(double v_norm) const;
};

double default_eta(const ModelParams& params);

struct CoefficientSet {
    double xi = 0.0;
    double eta = 0.0;
    double lambda0 = 0.0;
    double lambda1 = 0.0;
    double tlambda0 = 0.0;
    double tlambda1 = 0.0;
    double mu2 = 0.0;
    double tmu1 = 0.0;
    double tmu2 = 0.0;
    double muL = 0.0;
    double lambdaL = 0.0;
};

// Grid wide enough for the symbol scale |xi|^{-1/|1+beta|} at the smallest swept xi.
GridPtr coefficient_grid(const ModelParams& params, double xi_min, int n = 800);

CoefficientSet compute_coefficients(const CollisionOperator& op, double xi, double eta);
// d >= 2 through radial reduction; mu_L and lambda_L need the separable kernel.
CoefficientSet compute_coefficients_radial(const ModelParams& params, const VelocityGrid& g,
                                           double xi_norm, double eta);

double K_bound(const CoefficientSet& c);

struct Mu2Reference {
    double exponent = 0.0;
    bool log_corrected = false;
    // -1/(d|1+beta|) coefficient of |xi|^2 log|xi| as stated with the lemma
    double statement_constant = 0.0;
    // omega_d c_gamma / (|1+beta| d), the value the change of variables produces
    double derivation_constant = 0.0;
    // value of the reference form at the requested |xi|
    double value_shape = 0.0;
};

Mu2Reference mu2_asymptotic_reference(const ModelParams& params, double xi_norm);
// small-|xi| exponent of the weighted coefficients tilde mu_k
double tmu_asymptotic_exponent(const ModelParams& params, double eta, int k, bool* log_case = nullptr);

double diffusion_limit_coeff(const ModelParams& params, const VelocityGrid& g, double xi_norm, double eps);
double diffusion_kappa(const ModelParams& params);
// limit of b_eps / eps^{2-alpha} / |xi|^2 when gamma > 2 + beta
double diffusion_second_moment(const ModelParams& params);

}  // namespace fattail
