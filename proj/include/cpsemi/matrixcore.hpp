#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <complex>
#include <functional>
#include <random>
#include <vector>

#include "cpsemi/errors.hpp"

namespace cpsemi {

typedef std::complex<double> cd;
typedef Eigen::Index Index;

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

typedef Mat<cd> CMat;
typedef Vec<cd> CVec;
typedef Mat<double> RMat;
typedef Vec<double> RVec;
typedef Eigen::SparseMatrix<cd> SpCMat;

inline constexpr cd I_UNIT{0.0, 1.0};

// ---------------------------------------------------------------------------
// Tensor products and partial traces

// (A ⊗ B)[i*rB + k, j*cB + l] = A[i,j] B[k,l]
template <typename DA, typename DB>
Mat<typename DA::Scalar> kron(const Eigen::MatrixBase<DA>& A, const Eigen::MatrixBase<DB>& B) {
  typedef typename DA::Scalar S;
  const Index rA = A.rows(), cA = A.cols(), rB = B.rows(), cB = B.cols();
  Mat<S> out(rA * rB, cA * cB);
  for (Index i = 0; i < rA; ++i)
    for (Index j = 0; j < cA; ++j)
      out.block(i * rB, j * cB, rB, cB) = A(i, j) * B.template cast<S>();
  return out;
}

// which = 0 traces out the first factor, which = 1 the second.
template <typename D>
Mat<typename D::Scalar> partial_trace(const Eigen::MatrixBase<D>& X, Index d1, Index d2, int which) {
  typedef typename D::Scalar S;
  if (X.rows() != d1 * d2 || X.cols() != d1 * d2)
    throw DimensionMismatch("partial_trace: matrix is not (d1*d2)x(d1*d2)");
  if (which == 1) {
    Mat<S> out = Mat<S>::Zero(d1, d1);
    for (Index i = 0; i < d1; ++i)
      for (Index j = 0; j < d1; ++j)
        out(i, j) = X.block(i * d2, j * d2, d2, d2).trace();
    return out;
  }
  if (which != 0) throw DimensionMismatch("partial_trace: factor index must be 0 or 1");
  Mat<S> out = Mat<S>::Zero(d2, d2);
  for (Index i = 0; i < d1; ++i) out += X.block(i * d2, i * d2, d2, d2);
  return out;
}

// ---------------------------------------------------------------------------
// Spectral data

struct HermEig {
  RVec values;   // ascending
  CMat vectors;  // unitary, columns are eigenvectors
};

struct SpectralProjection {
  double value;
  CMat P;
  Index multiplicity;
};

HermEig herm_eig(const CMat& A, double tol = 1e-10);

// Eigenvalues within 1e-8 (1 + ||A||) are grouped into one projection.
std::vector<SpectralProjection> spectral_projections(const HermEig& eig, double rel_tol = 1e-8);
std::vector<SpectralProjection> spectral_projections(const CMat& A, double rel_tol = 1e-8);

CMat reconstruct(const HermEig& eig);

// Functions of a hermitian matrix through its eigendecomposition.
CMat herm_function(const CMat& A, const std::function<cd(double)>& f);
CMat sqrtm_psd(const CMat& A);

// ---------------------------------------------------------------------------
// Exponentials

CMat expm(const CMat& A);
RMat expm(const RMat& A);

// exp(-i t H) for hermitian H, eigendecomposition path.
CMat expm_hermitian(const CMat& H, double t);

// exp(-i t H) V by a Chebyshev expansion, H hermitian and possibly sparse.
CMat evolve_hermitian(const SpCMat& H, double t, const CMat& V, double tol = 1e-15);
CMat evolve_hermitian(const CMat& H, double t, const CMat& V, double tol = 1e-15);

// ---------------------------------------------------------------------------
// Vectorization and superoperators. vec stacks columns: vec(A)[i + j*rows] = A(i,j),
// so that vec(X A Y) = (Y^T ⊗ X) vec(A).

template <typename D>
Vec<typename D::Scalar> vectorize(const Eigen::MatrixBase<D>& A) {
  Mat<typename D::Scalar> tmp = A;
  return Eigen::Map<const Vec<typename D::Scalar>>(tmp.data(), tmp.size());
}

template <typename D>
Mat<typename D::Scalar> devectorize(const Eigen::MatrixBase<D>& v, Index rows, Index cols) {
  if (v.size() != rows * cols) throw DimensionMismatch("devectorize: length is not rows*cols");
  Vec<typename D::Scalar> tmp = v;
  return Eigen::Map<const Mat<typename D::Scalar>>(tmp.data(), rows, cols);
}

// Linear map B(C^d_in) -> B(C^d_out) acting on vectorized operators.
struct Superoperator {
  Index d_in = 0;
  Index d_out = 0;
  CMat mat;  // d_out^2 x d_in^2

  Superoperator() = default;
  Superoperator(Index din, Index dout, CMat m);
  static Superoperator zero(Index d);
  static Superoperator identity(Index d);

  CMat operator()(const CMat& A) const;
  Superoperator operator+(const Superoperator& o) const;
  Superoperator operator-(const Superoperator& o) const;
  Superoperator operator*(cd s) const;
};

typedef std::function<CMat(const CMat&)> LinearMap;

Superoperator superop_of_map(Index d_in, Index d_out, const LinearMap& map);
Superoperator left_multiplication(const CMat& X);          // A -> X A
Superoperator right_multiplication(const CMat& Y);         // A -> A Y
Superoperator sandwich(const CMat& X, const CMat& Y);      // A -> X A Y
Superoperator commutator_superop(const CMat& H);           // A -> i[H, A]
Superoperator compose(const Superoperator& a, const Superoperator& b);  // a after b
Superoperator adjoint(const Superoperator& s);             // Hilbert-Schmidt adjoint
double norm(const Superoperator& s);

// ---------------------------------------------------------------------------
// Small utilities

CMat basis_matrix(Index d, Index i, Index j);
CMat commutator(const CMat& A, const CMat& B);
CMat anticommutator(const CMat& A, const CMat& B);
CMat hermitian_part(const CMat& A);
double hermiticity_defect(const CMat& A);  // max |A - A^*|
bool is_hermitian(const CMat& A, double tol = 1e-12);
double unitarity_defect(const CMat& U);    // ||U^*U - 1||_F
CMat pinv(const CMat& A, double rel_tol = 1e-12);
Index numerical_rank(const CMat& A, double rel_tol = 1e-10);
double min_eigenvalue(const CMat& A);

// Gaussian (Ginibre) matrices and Haar unitaries from an explicit engine.
CMat ginibre(std::mt19937_64& rng, Index rows, Index cols);
CMat random_hermitian(std::mt19937_64& rng, Index d);
CMat haar_unitary(std::mt19937_64& rng, Index d);

}  // namespace cpsemi
