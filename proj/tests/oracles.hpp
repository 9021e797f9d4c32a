#pragma once

// Reference computations written directly from definitions, kept independent
// of the library code paths they are compared against.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

typedef std::complex<double> cd;
typedef Eigen::MatrixXcd CMat;
typedef Eigen::MatrixXd RMat;

inline CMat unit(int d, int i, int j) {
  CMat E = CMat::Zero(d, d);
  E(i, j) = 1.0;
  return E;
}

// Choi matrix Σ E_ij ⊗ Ξ(E_ij) from the map itself
inline CMat choi(int d_in, int d_out, const std::function<CMat(const CMat&)>& map) {
  CMat C = CMat::Zero(d_in * d_out, d_in * d_out);
  for (int i = 0; i < d_in; ++i)
    for (int j = 0; j < d_in; ++j) C.block(i * d_out, j * d_out, d_out, d_out) = map(unit(d_in, i, j));
  return C;
}

inline double min_eig(const CMat& H) {
  Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (H + H.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

// Taylor series with scaling and squaring
inline CMat expm_taylor(const CMat& A) {
  const double nrm = A.cwiseAbs().rowwise().sum().maxCoeff();
  int s = 0;
  while (nrm / std::pow(2.0, s) > 0.25) ++s;
  const CMat B = A / std::pow(2.0, s);
  CMat term = CMat::Identity(A.rows(), A.cols()), sum = term;
  for (int k = 1; k < 30; ++k) {
    term = term * B / double(k);
    sum += term;
  }
  for (int i = 0; i < s; ++i) sum = sum * sum;
  return sum;
}

inline RMat expm_taylor(const RMat& A) { return expm_taylor(CMat(A.cast<cd>())).real(); }

// i[Θ,A] - {Δ,A} + Σ ν_j^* A ν_j
inline CMat lindblad_apply(const CMat& theta, const CMat& delta, const std::vector<CMat>& nu, const CMat& A) {
  const cd i(0, 1);
  CMat out = i * (theta * A - A * theta) - (delta * A + A * delta);
  for (const CMat& v : nu) out += v.adjoint() * A * v;
  return out;
}

inline CMat ginibre(std::mt19937_64& rng, int r, int c) {
  std::normal_distribution<double> n(0.0, 1.0);
  CMat G(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) G(i, j) = cd(n(rng), n(rng)) / std::sqrt(2.0);
  return G;
}

inline CMat hermitian(std::mt19937_64& rng, int d) {
  const CMat G = ginibre(rng, d, d);
  return 0.5 * (G + G.adjoint());
}

// QR of a Ginibre matrix with the phase of R's diagonal removed
inline CMat unitary(std::mt19937_64& rng, int d) {
  Eigen::HouseholderQR<CMat> qr(ginibre(rng, d, d));
  CMat Q = qr.householderQ();
  const CMat R = qr.matrixQR();
  for (int k = 0; k < d; ++k) Q.col(k) *= std::polar(1.0, std::arg(R(k, k)));
  return Q;
}

// random rate matrix with rows summing to zero
inline RMat rate_matrix(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  RMat m = RMat::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) m(i, j) = u(rng);
  for (int i = 0; i < n; ++i) m(i, i) = -m.row(i).sum();
  return m;
}

// PV ∫_a^b g²/(x-e) dx
inline double pv_flat(double g, double a, double b, double e) { return g * g * std::log(std::abs((b - e) / (a - e))); }

// PV ∫_a^b f(x)/(x-e) dx by a fine midpoint rule on the symmetric subtraction
inline double pv_numeric(const std::function<double(double)>& f, double a, double b, double e, int n = 400000) {
  double s = 0.0;
  const double h = (b - a) / n;
  for (int k = 0; k < n; ++k) {
    const double x = a + (k + 0.5) * h;
    s += (f(x) - f(e)) / (x - e) * h;
  }
  return s + f(e) * std::log(std::abs((b - e) / (a - e)));
}

}  // namespace oracle
