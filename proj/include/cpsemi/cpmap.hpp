#pragma once

#include <vector>

#include "cpsemi/matrixcore.hpp"

namespace cpsemi {

// Kraus data of Ξ(A) = Σ_j ν_j^* A ν_j with blocks ν_j of shape d_in x d_out.
// Stacked, the blocks form ν : C^d_out -> C^d_in ⊗ h with the noise index second.
struct CpMapData {
  Index d_in = 0;
  Index d_out = 0;
  std::vector<CMat> kraus;

  CpMapData() = default;
  CpMapData(Index din, Index dout, std::vector<CMat> blocks);
  explicit CpMapData(std::vector<CMat> blocks);  // square blocks, dimension taken from the first

  Index h_dim() const { return static_cast<Index>(kraus.size()); }
  CMat stacked() const;                       // (d_in * n) x d_out
  static CpMapData from_stacked(const CMat& nu, Index n);
};

CMat apply(const CpMapData& map, const CMat& A);
Superoperator superop(const CpMapData& map);

// C = Σ_ij E_ij ⊗ Ξ(E_ij)
CMat choi(const Superoperator& s);
CMat choi(const CpMapData& map);
Superoperator superop_of_choi(const CMat& C, Index d_in, Index d_out);

bool is_completely_positive(const Superoperator& s, double tol = 1e-10);

// Gram matrix G_jk = Tr ν_j^* ν_k of the vectorized blocks.
CMat gram(const CpMapData& map);
bool is_minimal(const CpMapData& map, double tol = 1e-10);

// Minimal Kraus form read off the Choi spectrum. Each block has its largest
// entry real positive.
CpMapData stinespring_minimal(const Superoperator& s, double rank_tol = 1e-10, double cp_tol = 1e-10);
CpMapData kraus_from_choi(const CMat& C, Index d_in, Index d_out, double rank_tol = 1e-10);
void fix_block_phase(CMat& block);

// Unitary U with b_i = Σ_j U_ij a_j for two minimal presentations of the same map.
CMat dilation_equivalence(const CpMapData& a, const CpMapData& b, double tol = 1e-8);

// R = Ξ(A^*A) - Ξ(A)^* Ξ(1)^{-1} Ξ(A)
CMat kadison_schwarz_residual(const Superoperator& s, const CMat& A);
CMat kadison_schwarz_residual(const CpMapData& map, const CMat& A);

bool is_unital(const CpMapData& map, double tol = 1e-10);

}  // namespace cpsemi
