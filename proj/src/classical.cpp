#include "cpsemi/classical.hpp"

#include <cmath>

namespace cpsemi {

bool is_classical_generator(const RMat& m, double tol) {
  if (m.rows() != m.cols()) return false;
  const Index n = m.rows();
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j)
      if (i != j && m(i, j) < -1e-12) return false;
    if (std::abs(m.row(i).sum()) > tol) return false;
  }
  return true;
}

bool classical_dbc_check(const RMat& m, const RVec& p, double tol) {
  if (m.rows() != m.cols() || p.size() != m.rows()) throw DimensionMismatch("classical_dbc_check: shapes");
  if ((p.array() <= 0).any()) throw PreconditionViolated("classical_dbc_check: weights must be positive");
  const RMat flux = p.asDiagonal() * m;
  return (flux - flux.transpose()).cwiseAbs().maxCoeff() <= tol;
}

std::vector<CMat> projections_of(const CMat& H, double rel_tol) {
  std::vector<CMat> out;
  for (const SpectralProjection& sp : spectral_projections(H, rel_tol)) out.push_back(sp.P);
  return out;
}

RMat restrict_to_diagonal(const Superoperator& M, const std::vector<CMat>& P) {
  const Index d = M.d_in, n = static_cast<Index>(P.size());
  if (M.d_out != d) throw DimensionMismatch("restrict_to_diagonal: map is not on one algebra");
  for (Index j = 0; j < n; ++j) {
    if (P[j].rows() != d || P[j].cols() != d) throw DimensionMismatch("restrict_to_diagonal: projection shape");
    if (hermiticity_defect(P[j]) > 1e-10) throw NotOrthogonal("restrict_to_diagonal: projection is not hermitian");
    if (P[j].trace().real() < 0.5) throw NotOrthogonal("restrict_to_diagonal: zero projection");
    for (Index k = 0; k < n; ++k) {
      const CMat target = (j == k) ? P[j] : CMat::Zero(d, d);
      if ((P[j] * P[k] - target).norm() > 1e-10) throw NotOrthogonal("restrict_to_diagonal: family is not orthogonal");
    }
  }
  const double tol = 1e-9 * (1.0 + M.mat.norm());
  RMat m(n, n);
  for (Index k = 0; k < n; ++k) {
    const CMat X = M(P[k]);
    CMat inside = CMat::Zero(d, d);
    for (Index j = 0; j < n; ++j) {
      const cd c = (P[j] * X).trace() / P[j].trace();
      m(j, k) = c.real();
      inside += c * P[j];
    }
    if ((X - inside).norm() > tol) throw NotPreserved("restrict_to_diagonal: M(P_k) leaves the projection algebra");
  }
  return m;
}

LindbladData lift_classical(const RMat& m, const RVec& theta, const CMat& basis) {
  const Index n = m.rows();
  if (m.cols() != n || theta.size() != n) throw DimensionMismatch("lift_classical: shapes");
  if (!is_classical_generator(m)) throw InvalidGenerator("lift_classical: m is not a classical generator");
  const CMat W = basis.size() == 0 ? CMat(CMat::Identity(n, n)) : basis;
  if (W.rows() != n || W.cols() != n || unitarity_defect(W) > 1e-10)
    throw NotOrthogonal("lift_classical: basis is not orthonormal");
  std::vector<CMat> blocks;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (i != j && m(i, j) > 0)
        blocks.push_back(std::sqrt(m(i, j)) * W.col(j) * W.col(i).adjoint());
  CMat delta = CMat::Zero(n, n);
  for (const CMat& b : blocks) delta += 0.5 * b.adjoint() * b;
  const CMat th = W * theta.cast<cd>().asDiagonal() * W.adjoint();
  return LindbladData(th, delta, CpMapData(n, n, blocks));
}

}  // namespace cpsemi
