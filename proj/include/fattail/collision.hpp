#pragma once

#include <optional>
#include <string>

#include "fattail/grid.hpp"

namespace fattail {

struct ForceField {
    Vec E_values;
    Vec G_values;
    Vec flux;           // E F at the nodes
    Vec divergence;     // d/dv (E F) at the nodes
    Vec frac_lap_F;     // Delta^{sigma/2} F at the nodes
    double residual = 0.0;  // |Delta F + div(EF)|_0 / |Delta F|_0 over the checked nodes
    double residual_vmax = 0.0;
};

struct CollisionOperator {
    OperatorKind kind = OperatorKind::Scattering;
    ModelParams params;
    GridPtr grid;
    Mat matrix;
    Vec nu_values;      // scattering only
    Vec E_values;       // fractional only: drift implied by the discrete flux
    Mat pair_weights;   // scattering b_ij w_i w_j F_i F_j, fractional A_ij
    double Z = 1.0;     // separable normalization

    int size() const { return static_cast<int>(matrix.rows()); }
};

struct OperatorOptions {
    // fractional operator: apply the near-diagonal correction of the pair sum
    bool neighbor_correction = true;
    // scattering mutation used by the verification suite to check sensitivity
    double asymmetry = 0.0;
};

CollisionOperator assemble_operator(const ModelParams& params, GridPtr grid,
                                    const OperatorOptions& opts = {});

CVec apply(const CollisionOperator& op, const CVec& f);
WeightedVector apply(const CollisionOperator& op, const WeightedVector& f);
WeightedVector apply_L1(const CollisionOperator& op, const WeightedVector& f);
WeightedVector apply_L2(const CollisionOperator& op, const WeightedVector& f);
WeightedVector apply_L3(const CollisionOperator& op, const WeightedVector& f);

// Adjoint in L^2(dmu).
Mat adjoint_matrix(const CollisionOperator& op);

Vec collision_frequency(const CollisionOperator& op);

// Node-to-midpoint derivative in the mapped coordinate (rows: n-1 edges).
Mat staggered_derivative(const VelocityGrid& g);
// Centered derivative weights in the mapped coordinate.
Mat centered_derivative(const VelocityGrid& g, int order, int width);

// Dirichlet forms, each computed from its own definition.
double dirichlet_fokker_planck(const VelocityGrid& g, const Vec& h);
double dirichlet_scattering(const CollisionOperator& op, const Vec& h);
double dirichlet_fractional(const CollisionOperator& op, const Vec& h);

double fractional_constant(int d, double sigma);

struct FracLapOptions {
    double inner_ratio = 0.5;     // inner region |v-v'| < ratio * <v>
    double taylor_fraction = 1e-3;
    int inner_points = 64;
    double panel_width = 0.25;
    int panel_points = 8;
    int stencil = 8;
    // decay exponent of the data beyond the grid; unset selects 1 + gamma
    std::optional<double> tail_exponent;
};

Mat fractional_laplacian_matrix(const VelocityGrid& g, double sigma,
                                const FracLapOptions& opts = {});
CVec fractional_laplacian(const VelocityGrid& g, const CVec& values, double sigma,
                          const FracLapOptions& opts = {});

// Closed forms used by both the library and the checks.
double poisson_kernel(double v);
double poisson_half_laplacian(double v);

double force_constant(double sigma);
// E F = kappa * int_0^inf z^{-sigma} (F(v-z) - F(v+z)) dz, normalized by c_gamma.
double flux_profile(double gamma, double sigma, double v);

ForceField build_force_field(const ModelParams& params, GridPtr grid,
                             double check_vmax = 0.0);

struct InequalitySides {
    double lhs = 0.0;
    double rhs = 0.0;
};

double hardy_poincare_constant(int d, double gamma);
InequalitySides hardy_poincare_sides(const VelocityGrid& g, const Vec& h);
InequalitySides scattering_gap_sides(const CollisionOperator& op, const Vec& h);

void write_operator_csv(const CollisionOperator& op, const std::string& path);
void write_force_field_csv(const VelocityGrid& g, const ForceField& ff, const std::string& path);

}  // namespace fattail
