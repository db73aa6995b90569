#pragma once

#include <array>
#include <string>
#include <vector>

#include "fattail/coefficients.hpp"

namespace fattail {

struct ModeState {
    double xi = 0.0;
    CVec values;
    double time = 0.0;
};

CVec apply_T(const VelocityGrid& g, double xi, const CVec& f);
// A_xi f = psi Pi T* phi f, rank one along psi F.
CVec apply_A(const VelocityGrid& g, double beta, double xi, const CVec& f);
ModeState apply_A(const CollisionOperator& op, const ModeState& mode);

// Generator L - i v xi acting on nodal values.
CMat mode_generator(const CollisionOperator& op, double xi);

struct EvolveOptions {
    double tol = 1e-10;
    // eigenvector condition number above which the stepper takes over
    double cond_limit = 1e8;
    bool force_stepper = false;
};

struct EvolveResult {
    std::vector<ModeState> states;
    bool used_stepper = false;
    int clamped_eigenvalues = 0;
    double eig_condition = 0.0;
    std::string note;
};

EvolveResult evolve_mode(const ModeState& mode, const CollisionOperator& op,
                         const std::vector<double>& t_grid, const EvolveOptions& opts = {});

// Reusable spectral factorization of one mode's generator.
class ModePropagator {
public:
    ModePropagator(const CollisionOperator& op, double xi, const EvolveOptions& opts = {});

    bool ok() const { return ok_; }
    double condition() const { return cond_; }
    int clamped() const { return clamped_; }
    // largest real part of the spectrum
    double spectral_abscissa() const;
    const CVec& eigenvalues() const { return lambda_; }

    // coefficients of f in the eigenbasis
    CVec expand(const CVec& f) const;
    CVec evaluate(const CVec& coeffs, double t) const;

private:
    Vec s_;
    CVec lambda_;
    CMat V_;
    Eigen::PartialPivLU<CMat> lu_;
    bool ok_ = false;
    double cond_ = 0.0;
    int clamped_ = 0;
};

struct EntropyReport {
    double time = 0.0;
    double H = 0.0;
    double norm2 = 0.0;
    double A_term = 0.0;
    double R = 0.0;        // sum of the I-terms
    double R_fd = 0.0;     // -d/dt of A_term from the trajectory
    std::array<double, 7> I_terms{};
    std::array<double, 7> I_abs{};
    double X = 0.0;        // |Pi f|
    double Y = 0.0;        // |(1 - Pi) f|_eta
};

struct ITerms {
    std::array<cplx, 7> values{};
};

ITerms compute_I_terms(const CollisionOperator& op, double xi, const CVec& f);

EntropyReport entropy_state(const CollisionOperator& op, double xi, const CVec& f, double delta,
                            double eta);
std::vector<EntropyReport> entropy_report(const CollisionOperator& op,
                                          const std::vector<ModeState>& trajectory, double delta,
                                          double eta);

struct IBoundCheck {
    std::array<bool, 6> holds{};  // I2 .. I7
    std::array<double, 6> lhs{};
    std::array<double, 6> rhs{};
    bool all() const;
};

IBoundCheck check_I_term_bounds(const EntropyReport& report, const CoefficientSet& coeffs);

// L(xi) = |xi|^alpha / <xi>^alpha
double macro_rate_symbol(double xi, double alpha);

}  // namespace fattail
