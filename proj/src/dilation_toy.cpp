#include "cpsemi/dilation_toy.hpp"

#include <Eigen/SparseLU>

#include <cmath>

#include "cpsemi/cpmap.hpp"

namespace cpsemi {

namespace {

const double TWO_PI = 2.0 * M_PI;

}  // namespace

ReservoirGrid ReservoirGrid::asymmetric(double lo, double hi, Index n) {
  if (!(hi > lo) || n < 1) throw InvalidGrid("grid needs hi > lo and at least one point");
  ReservoirGrid g;
  g.lo = lo;
  g.hi = hi;
  g.n = n;
  g.dx = (hi - lo) / static_cast<double>(n);
  g.points.resize(n);
  for (Index i = 0; i < n; ++i) g.points(i) = lo + (static_cast<double>(i) + 0.5) * g.dx;
  return g;
}

ReservoirGrid ReservoirGrid::symmetric(double r, Index n) {
  if (!(r > 0)) throw InvalidGrid("cutoff must be positive");
  if (n % 2 == 0) throw InvalidGrid("symmetric grid needs an odd point count");
  ReservoirGrid g = asymmetric(-r, r, n);
  const Index c = (n - 1) / 2;
  for (Index i = 0; i < n; ++i) g.points(i) = static_cast<double>(i - c) * g.dx;
  return g;
}

ReservoirGrid ReservoirGrid::centred(double dx, Index n) {
  if (!(dx > 0)) throw InvalidGrid("spacing must be positive");
  return symmetric(0.5 * dx * static_cast<double>(n), n);
}

bool ReservoirGrid::is_symmetric(double tol) const {
  for (Index i = 0; i < n; ++i)
    if (std::abs(points(i) + points(n - 1 - i)) > tol) return false;
  return true;
}

NoiseFactor noise_factor(const CMat& upsilon) {
  if (upsilon.rows() != upsilon.cols()) throw DimensionMismatch("noise_factor: Υ is not square");
  const Index d = upsilon.rows();
  const CMat P = hermitian_part(I_UNIT * (upsilon - upsilon.adjoint()));
  const HermEig e = herm_eig(P);
  const double scale = std::max(1.0, P.norm());
  if (d > 0 && e.values(0) < -1e-12 * scale) throw NotDissipative("noise_factor: i(Υ - Υ^*) is not positive");
  const double cut = 1e-10 * scale;
  Index rank = 0;
  for (Index i = 0; i < d; ++i)
    if (e.values(i) > cut) ++rank;
  if (rank == d && d > 0) return NoiseFactor{d, sqrtm_psd(P)};
  CMat nu(rank, d);
  Index row = 0;
  for (Index i = d - 1; i >= 0; --i) {
    if (e.values(i) <= cut) break;
    CMat r = std::sqrt(e.values(i)) * e.vectors.col(i).adjoint();
    fix_block_phase(r);
    nu.row(row++) = r;
  }
  return NoiseFactor{rank, nu};
}

ToyDilation build_Zr(const CMat& upsilon, const CMat& nu, const ReservoirGrid& grid) {
  const Index d = upsilon.rows(), h = nu.rows(), n = grid.n;
  if (upsilon.cols() != d || (h > 0 && nu.cols() != d)) throw DimensionMismatch("build_Zr: shapes");
  const Index N = d + h * n;
  ToyDilation out{upsilon, nu.cols() == d ? nu : CMat(0, d), grid, CMat::Zero(N, N)};
  out.Z.topLeftCorner(d, d) = hermitian_part(upsilon);
  const double c = std::sqrt(grid.dx / TWO_PI);
  for (Index a = 0; a < h; ++a)
    for (Index i = 0; i < n; ++i) {
      const Index k = d + a * n + i;
      out.Z.block(k, 0, 1, d) = c * nu.row(a);
      out.Z.block(0, k, d, 1) = c * nu.row(a).adjoint();
      out.Z(k, k) = grid.points(i);
    }
  return out;
}

ToyDilation build_Zr(const CMat& upsilon, const ReservoirGrid& grid) {
  return build_Zr(upsilon, noise_factor(upsilon).nu, grid);
}

double dilation_check(const ToyDilation& dil, double t) {
  if (t < 0) throw PreconditionViolated("dilation_check: negative time");
  const Index d = dil.d();
  const CMat I = CMat::Identity(dil.dim(), d);
  const CMat V = evolve_hermitian(dil.Z_sparse(), t, I);
  return (V.topRows(d) - expm(CMat(-I_UNIT * t * dil.upsilon))).norm();
}

namespace {

CMat direct_resolvent(const ToyDilation& dil, cd z) {
  const Index N = dil.dim();
  SpCMat A = -dil.Z_sparse();
  for (Index i = 0; i < N; ++i) A.coeffRef(i, i) += z;
  A.makeCompressed();
  Eigen::SparseLU<SpCMat> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success) throw PreconditionViolated("resolvent: factorization failed");
  return lu.solve(CMat(CMat::Identity(N, N)));
}

CMat five_term(const ToyDilation& dil, cd z, const CMat& ups) {
  const Index d = dil.d(), M = dil.dim() - d;
  const CMat G = (z * CMat::Identity(d, d) - ups).inverse();
  const CMat C = dil.coupling();
  CVec rr(M);
  for (Index k = 0; k < M; ++k) rr(k) = 1.0 / (z - dil.Z(d + k, d + k));
  const CMat RC = rr.asDiagonal() * C;
  CMat out(dil.dim(), dil.dim());
  out.topLeftCorner(d, d) = G;
  out.topRightCorner(d, M) = G * (C.adjoint() * rr.asDiagonal());
  out.bottomLeftCorner(M, d) = RC * G;
  out.bottomRightCorner(M, M) = RC * G * (C.adjoint() * rr.asDiagonal());
  out.bottomRightCorner(M, M).diagonal() += rr;
  return out;
}

}  // namespace

double resolvent_compare(const ToyDilation& dil, cd z) {
  if (!(z.imag() > 0)) throw ImZNotPositive("resolvent_compare: Im z must be positive");
  const cd Fr = std::log(z - dil.grid.lo) - std::log(z - dil.grid.hi);  // ∫ dx / (z - x) over the cutoff
  const CMat nn = dil.nu.adjoint() * dil.nu;
  const CMat ups = hermitian_part(dil.upsilon) + (Fr / TWO_PI) * nn;
  return (direct_resolvent(dil, z) - five_term(dil, z, ups)).norm();
}

double resolvent_limit_residual(const ToyDilation& dil, cd z) {
  if (!(z.imag() > 0)) throw ImZNotPositive("resolvent_limit_residual: Im z must be positive");
  return (direct_resolvent(dil, z) - five_term(dil, z, dil.upsilon)).norm();
}

double scaling_covariance_check(const ToyDilation& dil, double lambda) {
  if (!(lambda > 0)) throw IncompatibleScale("scaling_covariance_check: λ must be positive");
  const double qd = 1.0 / (lambda * lambda);
  const double qr = std::round(qd);
  if (qr < 1 || std::abs(qd - qr) > 1e-9 * qd)
    throw IncompatibleScale("scaling_covariance_check: 1/λ² must be a positive integer");
  if (!dil.grid.is_symmetric() || dil.grid.n % 2 == 0)
    throw IncompatibleScale("scaling_covariance_check: needs a symmetric grid");
  const Index q = static_cast<Index>(qr), n = dil.grid.n, d = dil.d(), h = dil.h_dim();
  const ReservoirGrid fine = ReservoirGrid::centred(dil.grid.dx / static_cast<double>(q), q * (n - 1) + 1);
  const double l2 = lambda * lambda;
  const CMat nu = dil.nu;
  // Z_λ: system block λ² ReΥ, couplings λ (2π)^{-1/2} √Δy ν
  ToyDilation scaled = build_Zr(CMat(l2 * hermitian_part(dil.upsilon)), CMat(lambda * nu), fine);
  const Index shift = (fine.n - 1) / 2 - (n - 1) / 2;
  std::vector<Index> idx(d + h * n);
  for (Index i = 0; i < d; ++i) idx[i] = i;
  for (Index a = 0; a < h; ++a)
    for (Index i = 0; i < n; ++i) idx[d + a * n + i] = d + a * fine.n + shift + i;
  CMat back(dil.dim(), dil.dim());
  for (Index r = 0; r < dil.dim(); ++r)
    for (Index c = 0; c < dil.dim(); ++c) back(r, c) = scaled.Z(idx[r], idx[c]) / l2;
  return (dil.Z - back).norm();
}

ToyDilation toy_quadratic_conjugation(const ToyDilation& dil, const CMat& S) {
  const Index h = dil.h_dim(), n = dil.grid.n, d = dil.d();
  if (S.rows() != h || S.cols() != h) throw DimensionMismatch("toy_quadratic_conjugation: S must act on the noise space");
  if (unitarity_defect(S) > 1e-10) throw NotUnitary("toy_quadratic_conjugation: S is not unitary");
  if (!dil.grid.is_symmetric() || n % 2 == 0) throw InvalidGrid("toy_quadratic_conjugation: needs a symmetric grid");
  const double c = 0.5 * static_cast<double>(n - 1);
  CMat F(n, n);
  RVec tau(n);
  for (Index k = 0; k < n; ++k) {
    tau(k) = (static_cast<double>(k) - c) * TWO_PI / (static_cast<double>(n) * dil.grid.dx);
    for (Index i = 0; i < n; ++i) F(k, i) = std::exp(-I_UNIT * tau(k) * dil.grid.points(i)) / std::sqrt(static_cast<double>(n));
  }
  CMat Pp = CMat::Zero(n, n);
  for (Index k = 0; k < n; ++k)
    if (tau(k) > 0) Pp(k, k) = 1.0;
  const CMat Ih = CMat::Identity(h, h), In = CMat::Identity(n, n);
  const CMat W = kron(Ih, F);
  const CMat mid = kron(S, Pp) + kron(Ih, CMat(In - Pp));
  const CMat G = W.adjoint() * mid * W;
  CMat U = CMat::Identity(dil.dim(), dil.dim());
  U.bottomRightCorner(h * n, h * n) = G;
  ToyDilation out = dil;
  out.Z = hermitian_part(U.adjoint() * dil.Z * U);
  (void)d;
  return out;
}

}  // namespace cpsemi
