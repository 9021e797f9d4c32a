#pragma once

#include <memory>
#include <unordered_map>
#include <vector>

#include "cpsemi/cpmap.hpp"
#include "cpsemi/dilation_toy.hpp"
#include "cpsemi/lindblad.hpp"
#include "cpsemi/matrixcore.hpp"

namespace cpsemi {

// Bosonic Fock space over m modes cut at Σ n_i <= N_max, basis in lexicographic order.
class TruncatedFock {
 public:
  TruncatedFock(Index modes, int n_max, Index cap = 20000);

  Index modes() const { return modes_; }
  int n_max() const { return n_max_; }
  Index dim() const { return static_cast<Index>(basis_.size()); }
  const std::vector<std::vector<int>>& basis() const { return basis_; }
  Index index_of(const std::vector<int>& occ) const;  // -1 if outside the cut

  SpCMat annihilation(Index mode) const;
  SpCMat creation(Index mode) const;
  SpCMat number() const;
  // Σ h_μν a_μ^* a_ν
  SpCMat dGamma(const CMat& h) const;

  static Index dimension(Index modes, int n_max);

 private:
  struct Hash {
    size_t operator()(const std::vector<int>& v) const;
  };
  Index modes_;
  int n_max_;
  std::vector<std::vector<int>> basis_;
  std::unordered_map<std::vector<int>, Index, Hash> index_;
};

// Z on K ⊗ Fock; modes ordered (noise index, grid point)
struct LangevinGenerator {
  Index d = 0;
  CMat upsilon;
  CpMapData nu;
  ReservoirGrid grid;
  std::shared_ptr<const TruncatedFock> fock;
  SpCMat Z;
  SpCMat system_part;
  SpCMat field_part;
  SpCMat coupling;

  Index dim() const { return Z.rows(); }
};

// Z = Re Υ ⊗ 1 + 1 ⊗ dΓ(x) + (2π)^{-1/2} √Δx Σ_{α,i} (ν_α ⊗ a^*_{αi} + ν_α^* ⊗ a_{αi})
LangevinGenerator build_langevin_Z(const CMat& upsilon, const CpMapData& nu, const ReservoirGrid& grid, int n_max,
                                   Index cap = 20000);

struct ReductionErrors {
  double semigroup;  // ||I^* e^{-itZ} I - e^{-itΥ}||
  double cp;         // ||I^* e^{-itZ} (A⊗1) e^{itZ} I - e^{tM}(A)||
};
ReductionErrors langevin_reduction_check(const LangevinGenerator& gen, double t, const CMat& A);

// Rows/columns of Z spanned by K ⊗ Ω and K ⊗ (one excitation); order: K ⊗ Ω first, then (s, mode).
CMat one_excitation_block(const LangevinGenerator& gen);
// Basis positions of Σ n_i <= 1 in the K ⊗ Fock ordering, grouped as in one_excitation_block.
std::vector<Index> one_excitation_indices(const LangevinGenerator& gen);

// E = K ⊗ 1 + 1 ⊗ dΓ(Y ⊗ 1_grid)
SpCMat total_energy(const CMat& K, const CMat& Y, const LangevinGenerator& gen);
double condi6b_residual(const CMat& K, const CMat& Y, const LangevinGenerator& gen);
SpCMat total_energy_checked(const CMat& K, const CMat& Y, const LangevinGenerator& gen, double tol = 1e-10);
double commutation_residual(const SpCMat& E, const SpCMat& Z);

}  // namespace cpsemi
