#pragma once

#include "cpsemi/matrixcore.hpp"

namespace cpsemi {

// Midpoint grid: x_i = lo + (i + ½) Δx. Symmetric grids have lo = -r, n odd,
// so that x = 0 is a grid point.
struct ReservoirGrid {
  double lo = 0.0;
  double hi = 0.0;
  Index n = 0;
  double dx = 0.0;
  RVec points;

  static ReservoirGrid symmetric(double r, Index n);
  static ReservoirGrid asymmetric(double lo, double hi, Index n);
  // n odd points k·dx, k = -(n-1)/2 .. (n-1)/2
  static ReservoirGrid centred(double dx, Index n);
  double r() const { return 0.5 * (hi - lo); }
  bool is_symmetric(double tol = 1e-12) const;
};

// ν with ν^*ν = i(Υ - Υ^*), rows = noise dimension.
struct NoiseFactor {
  Index h_dim;
  CMat nu;  // h_dim x d
};
NoiseFactor noise_factor(const CMat& upsilon);

// Z_r on K ⊕ (h ⊗ grid); noise index major, grid index minor.
struct ToyDilation {
  CMat upsilon;
  CMat nu;
  ReservoirGrid grid;
  CMat Z;

  Index d() const { return upsilon.rows(); }
  Index h_dim() const { return nu.rows(); }
  Index dim() const { return Z.rows(); }
  SpCMat Z_sparse() const { return Z.sparseView(); }
  CMat coupling() const { return Z.bottomLeftCorner(dim() - d(), d()); }
};

ToyDilation build_Zr(const CMat& upsilon, const ReservoirGrid& grid);
ToyDilation build_Zr(const CMat& upsilon, const CMat& nu, const ReservoirGrid& grid);

// ||I_K^* e^{-itZ_r} I_K - e^{-itΥ}||
double dilation_check(const ToyDilation& dil, double t);

// Five-term formula for the cutoff reservoir against direct inversion of z - Z_r.
double resolvent_compare(const ToyDilation& dil, cd z);
// Same formula with the r = ∞ value of Υ; measures the cutoff error.
double resolvent_limit_residual(const ToyDilation& dil, cd z);

// ||Z - λ^{-2} j_λ^* Z_λ j_λ|| on the nested grid of spacing λ² Δx.
double scaling_covariance_check(const ToyDilation& dil, double lambda);

// (1 ⊕ γ(S))^* Z_r (1 ⊕ γ(S)), γ(S) = S on positive τ after a unitary DFT.
ToyDilation toy_quadratic_conjugation(const ToyDilation& dil, const CMat& S);

}  // namespace cpsemi
