#pragma once

#include <functional>
#include <vector>

#include "cpsemi/dilation_toy.hpp"
#include "cpsemi/invariance_dbc.hpp"
#include "cpsemi/matrixcore.hpp"

namespace cpsemi {

// Scalar form factor p(x); the coupling on an interval is v(x) = p(x) B.
struct Profile {
  enum class Kind { Flat, Lorentzian, Samples, Custom };
  Kind kind = Kind::Flat;
  double g = 0.0;
  double gamma = 1.0;
  double centre = 0.0;
  RVec xs;  // Samples: increasing abscissae, linear interpolation
  RVec values;
  std::function<double(double)> fn;

  static Profile flat(double g);
  static Profile lorentzian(double g, double gamma, double centre);
  static Profile samples(RVec xs, RVec values);
  static Profile custom(std::function<double(double)> f);
  double operator()(double x) const;
};

struct CouplingInterval {
  double k = 0.0;  // eigenvalue of K
  double a = 0.0;
  double b = 0.0;
  Profile profile;
  CMat B;        // dim h_k x d
  Index n = 401; // default cell count
};

struct FriedrichsModel {
  SmallSystem sys;
  std::vector<CouplingInterval> intervals;
  double lambda = 1.0;

  Index d() const { return sys.dim(); }
  Index noise_dim() const;
  CMat eigen_projection(double k) const;
};

void validate(const FriedrichsModel& model);

// Cell centres and widths, one block per interval.
struct PhysicalGrid {
  std::vector<RVec> points;
  std::vector<double> dx;
  Index cells() const;
};
PhysicalGrid default_grid(const FriedrichsModel& model);
// x = k + mΔx for every cell lying inside (a, b)
PhysicalGrid aligned_grid(const FriedrichsModel& model, double dx);

// PV ∫_a^b f(x)/(x - e) dx, midpoint rule with subtraction, refined by halving.
// Throws GridTooCoarse if the last halving moves the value by more than 1e-4.
double principal_value(const std::function<double(double)>& f, double a, double b, double e,
                       double* last_change = nullptr);

struct LevelShift {
  CMat upsilon;
  CMat nu;                 // √(2π) ⊕ p(k) B_k 1_k, stacked over intervals
  double quadrature_change; // last halving difference
};
LevelShift level_shift(const FriedrichsModel& model);

// [K, λV^*; λV, diag x]; order interval, noise row, grid point
CMat build_friedrichs(const FriedrichsModel& model);
SpCMat build_friedrichs(const FriedrichsModel& model, const PhysicalGrid& grid, double lambda);

struct WclRow {
  double lambda;
  Index grid_n;
  double error;
  double runtime_s;
};

// e_λ = ||e^{itK/λ²} I^* e^{-itH_λ/λ²} I - e^{-itΥ}||, operator norm
std::vector<WclRow> reduced_wcl_experiment(const FriedrichsModel& model, double t, const std::vector<double>& lambdas);

// Asymptotic reservoir: centred u-grid with |u| <= r_u on every noise row.
struct AsymptoticGrid {
  double du = 0.05;
  double r_u = 2.0;
  Index n() const;
  RVec points() const;
};

// 0/1 injection of K ⊕ (noise ⊗ u-grid) into the physical space,
// u ↦ k + λ²u, physical spacing λ² du
SpCMat build_J_lambda(const FriedrichsModel& model, const AsymptoticGrid& grid, double lambda);
PhysicalGrid wcl_physical_grid(const FriedrichsModel& model, const AsymptoticGrid& grid, double lambda);
double partial_isometry_residual(const SpCMat& J);  // max(||J^*J - 1||, ||(JJ^*)² - JJ^*||)

struct ExtendedWclOptions {
  double r_u = 2.0;
  double du = 0.0;        // 0: min(0.05, λ_min²)
  double reference_r = 50.0;
};
// e_λ = ||J^* e^{itH_0/λ²} e^{-i(t-t0)H_λ/λ²} e^{-it0H_0/λ²} J - e^{itZ_R} e^{-i(t-t0)Z} e^{-it0Z_R}||
// on K ⊕ window, Z the toy generator of (Υ, ν) on a reference grid
std::vector<WclRow> extended_wcl_experiment(const FriedrichsModel& model, double t, double t0,
                                            const std::vector<double>& lambdas,
                                            const ExtendedWclOptions& opt = {});

double operator_norm(const CMat& A);

}  // namespace cpsemi
