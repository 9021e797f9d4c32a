#include "cpsemi/lindblad.hpp"

#include <cmath>

namespace cpsemi {

LindbladData::LindbladData(CMat th, CMat de, CpMapData n)
    : theta(std::move(th)), delta(std::move(de)), nu(std::move(n)) {
  const Index d = theta.rows();
  if (theta.cols() != d || delta.rows() != d || delta.cols() != d)
    throw DimensionMismatch("LindbladData: Θ and Δ must be square of equal size");
  if (nu.h_dim() > 0 && (nu.d_in != d || nu.d_out != d))
    throw DimensionMismatch("LindbladData: blocks are not d x d");
  nu.d_in = nu.d_out = d;
}

LindbladData::LindbladData(Index d)
    : theta(CMat::Zero(d, d)), delta(CMat::Zero(d, d)), nu(d, d, {}) {}

Superoperator build_generator(const LindbladData& data) {
  const Index d = data.dim();
  const double scale = 1.0 + data.theta.norm() + data.delta.norm();
  if (hermiticity_defect(data.theta) > 1e-10 * scale) throw NotHermitian("build_generator: Θ is not hermitian");
  if (hermiticity_defect(data.delta) > 1e-10 * scale) throw NotHermitian("build_generator: Δ is not hermitian");
  const CMat Id = CMat::Identity(d, d);
  CMat m = I_UNIT * (kron(Id, data.theta) - kron(CMat(data.theta.transpose()), Id));
  m -= kron(Id, data.delta) + kron(CMat(data.delta.transpose()), Id);
  if (data.nu.h_dim() > 0) m += superop(data.nu).mat;
  return Superoperator(d, d, m);
}

CMat evolve(const Superoperator& M, double t, const CMat& A) {
  if (t < 0) throw PreconditionViolated("evolve: negative time");
  return devectorize(CVec(expm(CMat(t * M.mat)) * vectorize(A)), M.d_out, M.d_out);
}

CMat evolve_predual(const Superoperator& M, double t, const CMat& rho) { return evolve(adjoint(M), t, rho); }

double markov_defect(const LindbladData& data) {
  CMat s = CMat::Zero(data.dim(), data.dim());
  for (const CMat& v : data.nu.kraus) s += v.adjoint() * v;
  return (2.0 * data.delta - s).norm();
}

bool is_markov(const LindbladData& data, double tol) {
  return markov_defect(data) <= tol * (1.0 + data.delta.norm());
}

bool is_canonical(const LindbladData& data, double tol) {
  if (std::abs(data.theta.trace()) > tol) return false;
  for (const CMat& v : data.nu.kraus)
    if (std::abs(v.trace()) > tol) return false;
  return true;
}

LindbladData shift_presentation(const LindbladData& data, const CVec& w) {
  const Index d = data.dim();
  if (w.size() != data.nu.h_dim()) throw DimensionMismatch("shift_presentation: w has wrong length");
  CMat L = CMat::Zero(d, d);
  std::vector<CMat> blocks = data.nu.kraus;
  for (Index j = 0; j < w.size(); ++j) {
    L += std::conj(w(j)) * data.nu.kraus[j];
    blocks[j] += w(j) * CMat::Identity(d, d);
  }
  const CMat Id = CMat::Identity(d, d);
  CMat delta = data.delta + 0.5 * (L + L.adjoint()) + 0.5 * w.squaredNorm() * Id;
  CMat theta = data.theta + (L - L.adjoint()) / (2.0 * I_UNIT);
  return LindbladData(hermitian_part(theta), hermitian_part(delta), CpMapData(d, d, blocks));
}

CMat haar_average_check(const Superoperator& M) {
  const Index d = M.d_in;
  if (M.d_out != d) throw DimensionMismatch("haar_average_check: map is not on one algebra");
  CMat T = CMat::Zero(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) T += M(basis_matrix(d, i, j)) * basis_matrix(d, j, i);
  return T / static_cast<double>(d);
}

HaarEstimate haar_average_monte_carlo(const Superoperator& M, std::mt19937_64& rng, int samples) {
  const Index d = M.d_in;
  CMat sum = CMat::Zero(d, d);
  RMat sq = RMat::Zero(d, d);
  for (int s = 0; s < samples; ++s) {
    const CMat U = haar_unitary(rng, d);
    const CMat X = M(CMat(U.adjoint())) * U;
    sum += X;
    sq += X.cwiseAbs2();
  }
  const double n = samples;
  CMat mean = sum / n;
  RMat var = (sq / n - mean.cwiseAbs2()) * (n / (n - 1.0));
  return HaarEstimate{mean, std::sqrt(var.cwiseMax(0.0).sum() / n), samples};
}

LindbladData canonical_form(const Superoperator& M, double cp_tol) {
  const Index d = M.d_in;
  if (M.d_out != d) throw DimensionMismatch("canonical_form: map is not on one algebra");
  const Superoperator Mstar(d, d, [&] {
    // A -> M(A^*)^*
    CMat m(d * d, d * d);
    for (Index j = 0; j < d; ++j)
      for (Index i = 0; i < d; ++i) m.col(i + j * d) = vectorize(CMat(M(basis_matrix(d, j, i)).adjoint()));
    return m;
  }());
  if ((Mstar.mat - M.mat).norm() > 1e-9 * (1.0 + M.mat.norm()))
    throw NotCpGenerator("canonical_form: map does not preserve hermiticity");

  const CMat T = haar_average_check(M);
  const Superoperator first = left_multiplication(T) + right_multiplication(CMat(T.adjoint()));
  const Superoperator R = M - first;
  const CMat CR = hermitian_part(choi(R));
  CVec omega = CVec::Zero(d * d);
  for (Index i = 0; i < d; ++i) omega(i * d + i) = 1.0;
  const double c = (omega.adjoint() * CR * omega)(0, 0).real() / static_cast<double>(d * d);
  const CMat P = CMat::Identity(d * d, d * d) - omega * omega.adjoint() / static_cast<double>(d);
  const CMat CJ = hermitian_part(P * CR * P);
  const double scale = std::max(CR.norm(), 1e-300);
  const double lmin = min_eigenvalue(CJ);
  if (lmin < -cp_tol * scale)
    throw NotCpGenerator("canonical_form: jump part has Choi eigenvalue " + std::to_string(lmin));

  CpMapData nu = CJ.norm() > 0 ? kraus_from_choi(CJ, d, d, 1e-10) : CpMapData(d, d, {});
  const CMat Id = CMat::Identity(d, d);
  CMat theta = (T - T.adjoint()) / (2.0 * I_UNIT);
  CMat delta = -0.5 * (T + T.adjoint()) - 0.5 * c * Id;
  LindbladData out(hermitian_part(theta), hermitian_part(delta), nu);

  CVec w(nu.h_dim());
  for (Index j = 0; j < w.size(); ++j) w(j) = -nu.kraus[j].trace() / static_cast<double>(d);
  if (w.size() > 0) out = shift_presentation(out, w);
  out.theta -= (out.theta.trace().real() / static_cast<double>(d)) * Id;
  return out;
}

HamiltonianSplit split_hamiltonian_dissipative(const Superoperator& M) {
  const LindbladData c = canonical_form(M);
  return HamiltonianSplit{c.theta, M - commutator_superop(c.theta)};
}

}  // namespace cpsemi

namespace cpsemi {

LindbladData from_upsilon(const CMat& upsilon, const CpMapData& nu) {
  const CMat theta = -hermitian_part(upsilon);
  const CMat delta = hermitian_part(CMat(0.5 * I_UNIT * (upsilon - upsilon.adjoint())));
  return LindbladData(theta, delta, nu);
}

}  // namespace cpsemi
