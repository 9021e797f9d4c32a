#include "cpsemi/cpmap.hpp"

#include <algorithm>
#include <cmath>

namespace cpsemi {

CpMapData::CpMapData(Index din, Index dout, std::vector<CMat> blocks)
    : d_in(din), d_out(dout), kraus(std::move(blocks)) {
  for (const CMat& b : kraus)
    if (b.rows() != d_in || b.cols() != d_out)
      throw DimensionMismatch("CpMapData: block shape differs from d_in x d_out");
}

CpMapData::CpMapData(std::vector<CMat> blocks) {
  if (blocks.empty()) throw DimensionMismatch("CpMapData: dimension cannot be inferred from no blocks");
  const Index r = blocks.front().rows(), c = blocks.front().cols();
  *this = CpMapData(r, c, std::move(blocks));
}

CMat CpMapData::stacked() const {
  const Index n = h_dim();
  CMat nu = CMat::Zero(d_in * n, d_out);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < d_in; ++i) nu.row(i * n + j) = kraus[j].row(i);
  return nu;
}

CpMapData CpMapData::from_stacked(const CMat& nu, Index n) {
  if (n <= 0 || nu.rows() % n != 0) throw DimensionMismatch("from_stacked: rows not divisible by noise dimension");
  const Index din = nu.rows() / n;
  std::vector<CMat> blocks(n, CMat::Zero(din, nu.cols()));
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < din; ++i) blocks[j].row(i) = nu.row(i * n + j);
  return CpMapData(din, nu.cols(), blocks);
}

CMat apply(const CpMapData& map, const CMat& A) {
  if (A.rows() != map.d_in || A.cols() != map.d_in) throw DimensionMismatch("apply: input is not d_in x d_in");
  CMat out = CMat::Zero(map.d_out, map.d_out);
  for (const CMat& v : map.kraus) out += v.adjoint() * A * v;
  return out;
}

Superoperator superop(const CpMapData& map) {
  CMat m = CMat::Zero(map.d_out * map.d_out, map.d_in * map.d_in);
  for (const CMat& v : map.kraus) m += kron(CMat(v.transpose()), CMat(v.adjoint()));
  return Superoperator(map.d_in, map.d_out, m);
}

CMat choi(const Superoperator& s) {
  const Index a = s.d_in, b = s.d_out;
  CMat C(a * b, a * b);
  for (Index j = 0; j < a; ++j)
    for (Index i = 0; i < a; ++i) C.block(i * b, j * b, b, b) = devectorize(CVec(s.mat.col(i + j * a)), b, b);
  return C;
}

CMat choi(const CpMapData& map) {
  const Index a = map.d_in, b = map.d_out;
  CMat C = CMat::Zero(a * b, a * b);
  for (const CMat& v : map.kraus) {
    CVec w(a * b);
    for (Index i = 0; i < a; ++i)
      for (Index k = 0; k < b; ++k) w(i * b + k) = std::conj(v(i, k));
    C += w * w.adjoint();
  }
  return C;
}

Superoperator superop_of_choi(const CMat& C, Index d_in, Index d_out) {
  if (C.rows() != d_in * d_out || C.cols() != d_in * d_out) throw DimensionMismatch("superop_of_choi: shape");
  CMat m(d_out * d_out, d_in * d_in);
  for (Index j = 0; j < d_in; ++j)
    for (Index i = 0; i < d_in; ++i) m.col(i + j * d_in) = vectorize(CMat(C.block(i * d_out, j * d_out, d_out, d_out)));
  return Superoperator(d_in, d_out, m);
}

bool is_completely_positive(const Superoperator& s, double tol) {
  CMat C = choi(s);
  const double n = C.norm();
  if (hermiticity_defect(C) > tol * std::max(1.0, n)) return false;
  return min_eigenvalue(C) >= -tol * n;
}

CMat gram(const CpMapData& map) {
  const Index n = map.h_dim();
  CMat G(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index k = 0; k < n; ++k) G(j, k) = (map.kraus[j].adjoint() * map.kraus[k]).trace();
  return G;
}

bool is_minimal(const CpMapData& map, double tol) {
  if (map.h_dim() == 0) return true;
  return numerical_rank(gram(map), tol) == map.h_dim();
}

void fix_block_phase(CMat& block) {
  Index r = 0, c = 0;
  if (block.size() == 0) return;
  block.cwiseAbs().maxCoeff(&r, &c);
  const double a = std::abs(block(r, c));
  if (a > 0) block *= std::conj(block(r, c)) / a;
}

CpMapData kraus_from_choi(const CMat& C, Index d_in, Index d_out, double rank_tol) {
  HermEig e = herm_eig(hermitian_part(C), 1e300);
  const double thresh = rank_tol * C.norm();
  std::vector<CMat> blocks;
  for (Index m = e.values.size() - 1; m >= 0; --m) {
    const double lam = e.values(m);
    if (lam <= thresh) break;
    CMat nu(d_in, d_out);
    for (Index i = 0; i < d_in; ++i)
      for (Index k = 0; k < d_out; ++k) nu(i, k) = std::sqrt(lam) * std::conj(e.vectors(i * d_out + k, m));
    fix_block_phase(nu);
    blocks.push_back(nu);
  }
  return CpMapData(d_in, d_out, blocks);
}

CpMapData stinespring_minimal(const Superoperator& s, double rank_tol, double cp_tol) {
  CMat C = choi(s);
  const double n = C.norm();
  if (hermiticity_defect(C) > cp_tol * std::max(1.0, n))
    throw NotCompletelyPositive("stinespring_minimal: Choi matrix is not hermitian");
  const double lmin = min_eigenvalue(C);
  if (lmin < -cp_tol * n) throw NotCompletelyPositive("stinespring_minimal: Choi matrix has eigenvalue " + std::to_string(lmin));
  return kraus_from_choi(C, s.d_in, s.d_out, rank_tol);
}

namespace {

CMat block_rows(const CpMapData& m) {
  CMat N(m.h_dim(), m.d_in * m.d_out);
  for (Index j = 0; j < m.h_dim(); ++j) N.row(j) = vectorize(m.kraus[j]).transpose();
  return N;
}

}  // namespace

CMat dilation_equivalence(const CpMapData& a, const CpMapData& b, double tol) {
  if (a.d_in != b.d_in || a.d_out != b.d_out) throw NotEquivalent("dilation_equivalence: block shapes differ");
  if (!is_minimal(a)) throw NotMinimal("dilation_equivalence: first presentation is not minimal");
  if (!is_minimal(b)) throw NotMinimal("dilation_equivalence: second presentation is not minimal");
  const Superoperator sa = superop(a), sb = superop(b);
  const double diff = (sa.mat - sb.mat).norm();
  if (diff > tol * (1.0 + sa.mat.norm())) throw NotEquivalent("dilation_equivalence: maps differ by " + std::to_string(diff));
  if (a.h_dim() != b.h_dim()) throw NotEquivalent("dilation_equivalence: noise dimensions differ");
  if (a.h_dim() == 0) return CMat(0, 0);
  const CMat Na = block_rows(a), Nb = block_rows(b);
  CMat U = Nb * pinv(Na);
  Eigen::JacobiSVD<CMat> svd(U, Eigen::ComputeFullU | Eigen::ComputeFullV);
  U = svd.matrixU() * svd.matrixV().adjoint();
  const double res = (Nb - U * Na).norm();
  if (res > tol * (1.0 + Nb.norm())) throw NotEquivalent("dilation_equivalence: residual " + std::to_string(res));
  return U;
}

CMat kadison_schwarz_residual(const Superoperator& s, const CMat& A) {
  const CMat unit = s(CMat::Identity(s.d_in, s.d_in));
  if (min_eigenvalue(unit) < 1e-10) throw SingularUnit("kadison_schwarz_residual: Ξ(1) is not invertible");
  const CMat XA = s(A);
  const CMat R = s(A.adjoint() * A) - XA.adjoint() * unit.ldlt().solve(XA);
  return hermitian_part(R);
}

CMat kadison_schwarz_residual(const CpMapData& map, const CMat& A) {
  return kadison_schwarz_residual(superop(map), A);
}

bool is_unital(const CpMapData& map, double tol) {
  const CMat one = cpsemi::apply(map, CMat(CMat::Identity(map.d_in, map.d_in)));
  return (one - CMat::Identity(map.d_out, map.d_out)).norm() <= tol;
}

}  // namespace cpsemi
