#pragma once

#include <vector>

#include "cpsemi/lindblad.hpp"
#include "cpsemi/matrixcore.hpp"

namespace cpsemi {

// Rates m_ij, i != j, acting on functions: (m f)_i = Σ_j m_ij f_j.
bool is_classical_generator(const RMat& m, double tol = 1e-10);

// p_i m_ij = p_j m_ji
bool classical_dbc_check(const RMat& m, const RVec& p, double tol = 1e-10);

// Orthogonal projections of a hermitian operator, one per distinct eigenvalue.
std::vector<CMat> projections_of(const CMat& H, double rel_tol = 1e-8);

// m_jk = Tr(P_j M(P_k)) / Tr(P_j)
RMat restrict_to_diagonal(const Superoperator& M, const std::vector<CMat>& projections);

// Blocks √m_ij E_ji (i != j) and Δ = ½ Σ ν^*ν. `basis` holds the orthonormal
// basis vectors as columns; empty means the standard basis.
LindbladData lift_classical(const RMat& m, const RVec& theta, const CMat& basis = CMat());

}  // namespace cpsemi
