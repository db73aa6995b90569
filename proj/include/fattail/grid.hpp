#pragma once

#include <Eigen/Dense>
#include <complex>
#include <memory>
#include <string>

#include "fattail/model.hpp"

namespace fattail {

using cplx = std::complex<double>;
using Vec = Eigen::VectorXd;
using CVec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXd;
using CMat = Eigen::MatrixXcd;

class GridError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class GridKind { Line, Radial };

// d = 1: v = scale*sinh(t), t uniform on [-T, T].
// d >= 2: r = scale*exp(t), t uniform on [t_lo, T]; weights carry the sphere
// area times r^{d-1}, so sums of radial functions integrate over R^d.
struct GridMap {
    GridKind kind = GridKind::Line;
    double scale = 1.0;
    double t_lo = 0.0;
    double t_hi = 0.0;
    double h = 0.0;
    double v_max = 0.0;
};

struct GridOptions {
    double scale = 1.0;
    // 0 selects the truncation from the normalization tolerance
    double v_max = 0.0;
    double v_floor = 1e6;
    double tol = 1e-10;
    bool check = true;
};

struct VelocityGrid {
    int d = 1;
    double gamma = 1.0;
    GridMap map;
    Vec t;       // mapped coordinate
    Vec nodes;   // v_i (line) or r_i (radial)
    Vec weights; // dv quadrature weights
    Vec vt;      // dv/dt
    Vec vtt;     // d2v/dt2
    Vec F;
    Vec mu_weights;
    Vec jv;      // <v_i>

    int size() const { return static_cast<int>(nodes.size()); }
    double mass(const Vec& g) const;
    double sphere_area() const;
};

using GridPtr = std::shared_ptr<const VelocityGrid>;

GridPtr build_grid(const ModelParams& params, int n, double scale = 1.0,
                   const GridOptions& opts = {});
GridPtr build_grid(const ModelParams& params, int n, const GridOptions& opts);

// Exact tail mass of F beyond |v| > V for d = 1.
double equilibrium_tail_mass(double gamma, double V);
// Closed form of the integral of <v>^k F over the real line, k < gamma.
double equilibrium_moment(double gamma, double k);

double normalization_error(const VelocityGrid& g);
// Integral of <v>^k F including the summed-out node tail beyond the grid.
double moment(const VelocityGrid& g, double k);

struct WeightedVector {
    GridPtr grid;
    CVec values;
    double weight_exponent = 0.0;
};

WeightedVector make_vector(GridPtr grid, CVec values, double k = 0.0);
WeightedVector equilibrium_vector(GridPtr grid);

// Quadrature of f; mirror pairs are summed first on symmetric grids.
cplx integrate(const VelocityGrid& g, const CVec& f);
cplx inner(const VelocityGrid& g, const CVec& f, const CVec& h);
cplx inner(const WeightedVector& f, const WeightedVector& h);
double weighted_norm2(const VelocityGrid& g, const CVec& f, double k);
double weighted_norm(const VelocityGrid& g, const CVec& f, double k);
double weighted_norm(const WeightedVector& f, double k);
double weighted_norm(const WeightedVector& f);

cplx density(const VelocityGrid& g, const CVec& f);
CVec project_pi(const VelocityGrid& g, const CVec& f);
CVec project_pi_k(const VelocityGrid& g, const CVec& f, double k);
WeightedVector project_pi(const WeightedVector& f);
WeightedVector project_pi_k(const WeightedVector& f, double k);

void write_grid_csv(const VelocityGrid& g, const std::string& path);
GridPtr read_grid_csv(const std::string& path, const ModelParams& params);

}  // namespace fattail
