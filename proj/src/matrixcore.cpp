#include "cpsemi/matrixcore.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>

namespace cpsemi {

HermEig herm_eig(const CMat& A, double tol) {
  if (A.rows() != A.cols()) throw DimensionMismatch("herm_eig: matrix is not square");
  const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
  if (hermiticity_defect(A) > tol * scale) throw NotHermitian("herm_eig: input is not hermitian");
  CMat H = hermitian_part(A);
  Eigen::SelfAdjointEigenSolver<CMat> es(H);
  if (es.info() != Eigen::Success) throw NotHermitian("herm_eig: eigensolver failed");
  return HermEig{es.eigenvalues(), es.eigenvectors()};
}

std::vector<SpectralProjection> spectral_projections(const HermEig& eig, double rel_tol) {
  std::vector<SpectralProjection> out;
  const Index n = eig.values.size();
  if (n == 0) return out;
  const double tol = rel_tol * (1.0 + eig.values.norm());
  Index start = 0;
  for (Index i = 1; i <= n; ++i) {
    if (i == n || eig.values(i) - eig.values(i - 1) > tol) {
      const Index m = i - start;
      CMat V = eig.vectors.middleCols(start, m);
      out.push_back({eig.values.segment(start, m).mean(), V * V.adjoint(), m});
      start = i;
    }
  }
  return out;
}

std::vector<SpectralProjection> spectral_projections(const CMat& A, double rel_tol) {
  return spectral_projections(herm_eig(A), rel_tol);
}

CMat reconstruct(const HermEig& eig) {
  return eig.vectors * eig.values.cast<cd>().asDiagonal() * eig.vectors.adjoint();
}

CMat herm_function(const CMat& A, const std::function<cd(double)>& f) {
  HermEig e = herm_eig(A);
  CVec fv(e.values.size());
  for (Index i = 0; i < fv.size(); ++i) fv(i) = f(e.values(i));
  return e.vectors * fv.asDiagonal() * e.vectors.adjoint();
}

CMat sqrtm_psd(const CMat& A) {
  return herm_function(A, [](double x) { return cd(std::sqrt(std::max(x, 0.0)), 0.0); });
}

CMat expm(const CMat& A) {
  if (A.rows() != A.cols()) throw DimensionMismatch("expm: matrix is not square");
  if (A.size() == 0) return A;
  return A.exp();
}

RMat expm(const RMat& A) {
  if (A.rows() != A.cols()) throw DimensionMismatch("expm: matrix is not square");
  if (A.size() == 0) return A;
  return A.exp();
}

CMat expm_hermitian(const CMat& H, double t) {
  HermEig e = herm_eig(H);
  CVec ph(e.values.size());
  for (Index i = 0; i < ph.size(); ++i) ph(i) = std::exp(-I_UNIT * t * e.values(i));
  return e.vectors * ph.asDiagonal() * e.vectors.adjoint();
}

namespace {

template <typename M>
void gershgorin(const M& H, double& lo, double& hi);

template <>
void gershgorin<SpCMat>(const SpCMat& H, double& lo, double& hi) {
  RVec centre = RVec::Zero(H.rows()), radius = RVec::Zero(H.rows());
  for (Index k = 0; k < H.outerSize(); ++k)
    for (SpCMat::InnerIterator it(H, k); it; ++it) {
      if (it.row() == it.col()) centre(it.row()) += it.value().real();
      else radius(it.row()) += std::abs(it.value());
    }
  lo = (centre - radius).minCoeff();
  hi = (centre + radius).maxCoeff();
}

template <>
void gershgorin<CMat>(const CMat& H, double& lo, double& hi) {
  RVec centre = H.diagonal().real();
  RVec radius = H.cwiseAbs().rowwise().sum() - H.diagonal().cwiseAbs();
  lo = (centre - radius).minCoeff();
  hi = (centre + radius).maxCoeff();
}

template <typename M>
CMat chebyshev_evolve(const M& H, double t, const CMat& V, double tol) {
  if (H.rows() != H.cols() || H.cols() != V.rows())
    throw DimensionMismatch("evolve_hermitian: shape mismatch");
  if (V.size() == 0 || t == 0.0) return V;
  double lo, hi;
  gershgorin(H, lo, hi);
  const double centre = 0.5 * (hi + lo);
  const double half = 0.5 * (hi - lo) * (1.0 + 1e-12) + 1e-300;
  const cd global = std::exp(-I_UNIT * t * centre);
  const double theta = std::abs(t) * half;
  if (theta < 1e-300) return global * V;
  // exp(-i s theta x) = J_0(theta) + 2 sum_k (-i s)^k J_k(theta) T_k(x), s = sign(t)
  const cd step = (t > 0) ? -I_UNIT : I_UNIT;
  const double inv_half = 1.0 / half;
  CMat prev = V;
  CMat curr = (H * V - centre * V) * inv_half;
  CMat out = std::cyl_bessel_j(0.0, theta) * V;
  cd phase = step;
  out += 2.0 * phase * std::cyl_bessel_j(1.0, theta) * curr;
  const int kmax = static_cast<int>(theta + 20.0 * std::cbrt(theta + 1.0) + 60.0);
  int small_run = 0;
  for (int k = 2; k <= kmax; ++k) {
    CMat next = 2.0 * inv_half * (H * curr - centre * curr) - prev;
    prev.swap(curr);
    curr.swap(next);
    phase *= step;
    const double jk = std::cyl_bessel_j(static_cast<double>(k), theta);
    out += 2.0 * phase * jk * curr;
    if (k > theta && std::abs(jk) < tol) {
      if (++small_run >= 3) break;
    } else {
      small_run = 0;
    }
  }
  return global * out;
}

}  // namespace

CMat evolve_hermitian(const SpCMat& H, double t, const CMat& V, double tol) {
  return chebyshev_evolve(H, t, V, tol);
}

CMat evolve_hermitian(const CMat& H, double t, const CMat& V, double tol) {
  return chebyshev_evolve(H, t, V, tol);
}

// ---------------------------------------------------------------------------

Superoperator::Superoperator(Index din, Index dout, CMat m) : d_in(din), d_out(dout), mat(std::move(m)) {
  if (mat.rows() != dout * dout || mat.cols() != din * din)
    throw DimensionMismatch("Superoperator: matrix shape does not match dimensions");
}

Superoperator Superoperator::zero(Index d) { return Superoperator(d, d, CMat::Zero(d * d, d * d)); }

Superoperator Superoperator::identity(Index d) {
  return Superoperator(d, d, CMat::Identity(d * d, d * d));
}

CMat Superoperator::operator()(const CMat& A) const {
  if (A.rows() != d_in || A.cols() != d_in) throw DimensionMismatch("Superoperator: input shape");
  return devectorize(CVec(mat * vectorize(A)), d_out, d_out);
}

Superoperator Superoperator::operator+(const Superoperator& o) const {
  if (o.d_in != d_in || o.d_out != d_out) throw DimensionMismatch("Superoperator: sum of different shapes");
  return Superoperator(d_in, d_out, mat + o.mat);
}

Superoperator Superoperator::operator-(const Superoperator& o) const {
  if (o.d_in != d_in || o.d_out != d_out) throw DimensionMismatch("Superoperator: difference of different shapes");
  return Superoperator(d_in, d_out, mat - o.mat);
}

Superoperator Superoperator::operator*(cd s) const { return Superoperator(d_in, d_out, s * mat); }

Superoperator superop_of_map(Index d_in, Index d_out, const LinearMap& map) {
  CMat m(d_out * d_out, d_in * d_in);
  for (Index j = 0; j < d_in; ++j)
    for (Index i = 0; i < d_in; ++i) {
      CMat out = map(basis_matrix(d_in, i, j));
      if (out.rows() != d_out || out.cols() != d_out)
        throw DimensionMismatch("superop_of_map: callback returned wrong shape");
      m.col(i + j * d_in) = vectorize(out);
    }
  return Superoperator(d_in, d_out, m);
}

Superoperator left_multiplication(const CMat& X) {
  return Superoperator(X.cols(), X.rows(), kron(CMat::Identity(X.cols(), X.cols()), X));
}

Superoperator right_multiplication(const CMat& Y) {
  return Superoperator(Y.rows(), Y.cols(), kron(CMat(Y.transpose()), CMat::Identity(Y.rows(), Y.rows())));
}

Superoperator sandwich(const CMat& X, const CMat& Y) {
  if (X.cols() != Y.rows()) throw DimensionMismatch("sandwich: inner dimensions differ");
  if (X.rows() != Y.cols()) throw DimensionMismatch("sandwich: output is not square");
  return Superoperator(X.cols(), X.rows(), kron(CMat(Y.transpose()), X));
}

Superoperator commutator_superop(const CMat& H) {
  return (left_multiplication(H) - right_multiplication(H)) * I_UNIT;
}

Superoperator compose(const Superoperator& a, const Superoperator& b) {
  if (a.d_in != b.d_out) throw DimensionMismatch("compose: dimensions do not chain");
  return Superoperator(b.d_in, a.d_out, a.mat * b.mat);
}

Superoperator adjoint(const Superoperator& s) { return Superoperator(s.d_out, s.d_in, s.mat.adjoint()); }

double norm(const Superoperator& s) { return s.mat.norm(); }

// ---------------------------------------------------------------------------

CMat basis_matrix(Index d, Index i, Index j) {
  CMat E = CMat::Zero(d, d);
  E(i, j) = 1.0;
  return E;
}

CMat commutator(const CMat& A, const CMat& B) { return A * B - B * A; }
CMat anticommutator(const CMat& A, const CMat& B) { return A * B + B * A; }
CMat hermitian_part(const CMat& A) { return 0.5 * (A + A.adjoint()); }

double hermiticity_defect(const CMat& A) {
  if (A.size() == 0) return 0.0;
  return (A - A.adjoint()).cwiseAbs().maxCoeff();
}

bool is_hermitian(const CMat& A, double tol) { return A.rows() == A.cols() && hermiticity_defect(A) <= tol; }

double unitarity_defect(const CMat& U) {
  return (U.adjoint() * U - CMat::Identity(U.cols(), U.cols())).norm();
}

CMat pinv(const CMat& A, double rel_tol) {
  Eigen::CompleteOrthogonalDecomposition<CMat> cod(A);
  cod.setThreshold(rel_tol);
  return cod.pseudoInverse();
}

Index numerical_rank(const CMat& A, double rel_tol) {
  if (A.size() == 0) return 0;
  Eigen::JacobiSVD<CMat> svd(A);
  const RVec& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  Index r = 0;
  for (Index i = 0; i < s.size(); ++i)
    if (s(i) > rel_tol * s(0)) ++r;
  return r;
}

double min_eigenvalue(const CMat& A) {
  if (A.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_part(A), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

CMat ginibre(std::mt19937_64& rng, Index rows, Index cols) {
  std::normal_distribution<double> g(0.0, 1.0);
  CMat out(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) {
      const double re = g(rng);
      const double im = g(rng);
      out(i, j) = cd(re, im) / std::sqrt(2.0);
    }
  return out;
}

CMat random_hermitian(std::mt19937_64& rng, Index d) { return hermitian_part(ginibre(rng, d, d)); }

CMat haar_unitary(std::mt19937_64& rng, Index d) {
  Eigen::HouseholderQR<CMat> qr(ginibre(rng, d, d));
  CMat Q = qr.householderQ() * CMat::Identity(d, d);
  CMat R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index i = 0; i < d; ++i) {
    const double a = std::abs(R(i, i));
    if (a > 0) Q.col(i) *= R(i, i) / a;
  }
  return Q;
}

}  // namespace cpsemi
