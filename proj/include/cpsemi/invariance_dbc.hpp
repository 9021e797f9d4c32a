#pragma once

#include <vector>

#include "cpsemi/cpmap.hpp"
#include "cpsemi/lindblad.hpp"
#include "cpsemi/matrixcore.hpp"

namespace cpsemi {

struct SmallSystem {
  CMat K;
  HermEig eig;
  std::vector<SpectralProjection> projections;

  SmallSystem() = default;
  explicit SmallSystem(const CMat& k);
  Index dim() const { return K.rows(); }
  bool nondegenerate() const { return static_cast<Index>(projections.size()) == K.rows(); }
};

struct ThermalState {
  double beta = 0.0;
  CMat rho;
};

ThermalState gibbs_state(const SmallSystem& sys, double beta);

// w -> U conj(w) in the stored basis
struct AntiunitaryMap {
  CMat U;
  double condition = 1.0;  // Gram condition number of the blocks used to build it
  CVec operator()(const CVec& w) const { return U * w.conjugate(); }
};

double k_invariance_residual(const Superoperator& M, const SmallSystem& sys);
bool is_k_invariant(const Superoperator& M, const SmallSystem& sys, double tol = 1e-9);

// ||ν_j K - K ν_j - Σ_l Y_jl ν_l|| over all blocks
double covariance_residual(const CpMapData& nu, const CMat& K, const CMat& Y);

struct JumpEnergy {
  CMat Y;
  double residual;
};
JumpEnergy find_jump_energy(const CpMapData& nu, const SmallSystem& sys);

struct DbcResiduals {
  double dissipative;  // ||G S - S^* G||
  double hamiltonian;  // ||G D + D^* G||
};
DbcResiduals dbc_residuals_standard(const Superoperator& M, const ThermalState& state);
DbcResiduals dbc_residuals_alt(const Superoperator& M, const ThermalState& state);
bool dbc_check_standard(const Superoperator& M, const ThermalState& state, double tol = 1e-8);
bool dbc_check_alt(const Superoperator& M, const ThermalState& state, double tol = 1e-8);

// max over E_ab of ||Σ_j ν_j A ν_j^* - Σ_jl (e^{-βY})_jl ν_j^* A ν_l||
double quadratic_balance_residual(const CpMapData& nu, const CMat& Y, double beta);

// ||ν_k - Σ_j (e^{-βY/2} U)_jk ν_j^*|| over k
double linear_balance_residual(const CpMapData& nu, const CMat& Y, double beta, const AntiunitaryMap& eps);

AntiunitaryMap construct_epsilon(const CpMapData& nu, const CMat& Y, double beta);

double epsilon_involution_residual(const AntiunitaryMap& eps);            // ||U conj(U) - 1||
double epsilon_flip_residual(const AntiunitaryMap& eps, const CMat& Y);   // ||U conj(Y) conj(U) + Y||

}  // namespace cpsemi
