#include "cpsemi/invariance_dbc.hpp"

#include <cmath>

namespace cpsemi {

SmallSystem::SmallSystem(const CMat& k) : K(k), eig(herm_eig(k)), projections(spectral_projections(eig)) {}

ThermalState gibbs_state(const SmallSystem& sys, double beta) {
  const double e0 = sys.eig.values.minCoeff();
  CMat rho = herm_function(sys.K, [&](double x) { return cd(std::exp(-beta * (x - e0)), 0.0); });
  rho /= rho.trace().real();
  return ThermalState{beta, rho};
}

double k_invariance_residual(const Superoperator& M, const SmallSystem& sys) {
  const Superoperator D = commutator_superop(sys.K);
  return (M.mat * D.mat - D.mat * M.mat).norm();
}

bool is_k_invariant(const Superoperator& M, const SmallSystem& sys, double tol) {
  return k_invariance_residual(M, sys) <= tol * (1.0 + M.mat.norm());
}

double covariance_residual(const CpMapData& nu, const CMat& K, const CMat& Y) {
  const Index n = nu.h_dim();
  if (Y.rows() != n || Y.cols() != n) throw DimensionMismatch("covariance_residual: Y has wrong size");
  double s = 0.0;
  for (Index j = 0; j < n; ++j) {
    CMat r = nu.kraus[j] * K - K * nu.kraus[j];
    for (Index l = 0; l < n; ++l) r -= Y(j, l) * nu.kraus[l];
    s += r.squaredNorm();
  }
  return std::sqrt(s);
}

JumpEnergy find_jump_energy(const CpMapData& nu, const SmallSystem& sys) {
  const Index n = nu.h_dim(), d = sys.dim();
  if (nu.d_in != d || nu.d_out != d) throw DimensionMismatch("find_jump_energy: blocks do not act on K's space");
  if (n == 0) return JumpEnergy{CMat(0, 0), 0.0};
  if (!is_minimal(nu)) throw NotMinimal("find_jump_energy: blocks are linearly dependent");

  // Hermitian basis of n x n matrices, n^2 real coordinates.
  std::vector<CMat> hb;
  for (Index a = 0; a < n; ++a)
    for (Index b = a; b < n; ++b) {
      CMat E = CMat::Zero(n, n);
      if (a == b) {
        E(a, a) = 1.0;
        hb.push_back(E);
      } else {
        E(a, b) = E(b, a) = 1.0;
        hb.push_back(E);
        E(a, b) = I_UNIT;
        E(b, a) = -I_UNIT;
        hb.push_back(E);
      }
    }
  const Index rows = n * d * d;
  RMat A(2 * rows, hb.size());
  RVec rhs(2 * rows);
  CVec target(rows);
  for (Index j = 0; j < n; ++j) target.segment(j * d * d, d * d) = vectorize(CMat(nu.kraus[j] * sys.K - sys.K * nu.kraus[j]));
  rhs << target.real(), target.imag();
  for (size_t c = 0; c < hb.size(); ++c) {
    CVec col(rows);
    for (Index j = 0; j < n; ++j) {
      CMat s = CMat::Zero(d, d);
      for (Index l = 0; l < n; ++l) s += hb[c](j, l) * nu.kraus[l];
      col.segment(j * d * d, d * d) = vectorize(s);
    }
    A.col(c) << col.real(), col.imag();
  }
  const RVec coef = A.completeOrthogonalDecomposition().solve(rhs);
  CMat Y = CMat::Zero(n, n);
  for (size_t c = 0; c < hb.size(); ++c) Y += coef(c) * hb[c];
  const double res = covariance_residual(nu, sys.K, Y);
  double scale = 0.0;
  for (const CMat& b : nu.kraus) scale += b.squaredNorm();
  scale = std::max(1.0, std::sqrt(scale) * sys.K.norm());
  if (res > 1e-6 * scale) throw NoSolution("find_jump_energy: blocks are not K-covariant, residual " + std::to_string(res));
  return JumpEnergy{Y, res};
}

namespace {

DbcResiduals gram_residuals(const Superoperator& M, const CMat& G) {
  const HamiltonianSplit split = split_hamiltonian_dissipative(M);
  const CMat& S = split.dissipative.mat;
  const CMat D = commutator_superop(split.theta).mat;
  return DbcResiduals{(G * S - S.adjoint() * G).norm(), (G * D + D.adjoint() * G).norm()};
}

void require_faithful(const ThermalState& st) {
  if (min_eigenvalue(st.rho) < 1e-12) throw DegenerateState("dbc check: state is not faithful");
}

}  // namespace

DbcResiduals dbc_residuals_standard(const Superoperator& M, const ThermalState& state) {
  require_faithful(state);
  const CMat r = sqrtm_psd(state.rho);
  return gram_residuals(M, kron(CMat(r.transpose()), r));
}

DbcResiduals dbc_residuals_alt(const Superoperator& M, const ThermalState& state) {
  require_faithful(state);
  const Index d = state.rho.rows();
  return gram_residuals(M, kron(CMat(state.rho.transpose()), CMat(CMat::Identity(d, d))));
}

bool dbc_check_standard(const Superoperator& M, const ThermalState& state, double tol) {
  const DbcResiduals r = dbc_residuals_standard(M, state);
  const double s = 1.0 + M.mat.norm();
  return r.dissipative <= tol * s && r.hamiltonian <= tol * s;
}

bool dbc_check_alt(const Superoperator& M, const ThermalState& state, double tol) {
  const DbcResiduals r = dbc_residuals_alt(M, state);
  const double s = 1.0 + M.mat.norm();
  return r.dissipative <= tol * s && r.hamiltonian <= tol * s;
}

double quadratic_balance_residual(const CpMapData& nu, const CMat& Y, double beta) {
  const Index n = nu.h_dim(), d = nu.d_in;
  if (n == 0) return 0.0;
  if (Y.rows() != n || Y.cols() != n) throw DimensionMismatch("quadratic_balance_residual: Y has wrong size");
  const CMat X = herm_function(Y, [&](double y) { return cd(std::exp(-beta * y), 0.0); });
  double worst = 0.0;
  for (Index a = 0; a < d; ++a)
    for (Index b = 0; b < d; ++b) {
      const CMat A = basis_matrix(d, a, b);
      CMat lhs = CMat::Zero(d, d), rhs = CMat::Zero(d, d);
      for (Index j = 0; j < n; ++j) {
        lhs += nu.kraus[j] * A * nu.kraus[j].adjoint();
        for (Index l = 0; l < n; ++l)
          if (X(j, l) != 0.0) rhs += X(j, l) * nu.kraus[j].adjoint() * A * nu.kraus[l];
      }
      worst = std::max(worst, (lhs - rhs).norm());
    }
  return worst;
}

double linear_balance_residual(const CpMapData& nu, const CMat& Y, double beta, const AntiunitaryMap& eps) {
  const Index n = nu.h_dim();
  if (n == 0) return 0.0;
  const CMat X = herm_function(Y, [&](double y) { return cd(std::exp(-0.5 * beta * y), 0.0); });
  const CMat C = X * eps.U;
  double s = 0.0;
  for (Index k = 0; k < n; ++k) {
    CMat r = nu.kraus[k];
    for (Index j = 0; j < n; ++j) r -= C(j, k) * nu.kraus[j].adjoint();
    s += r.squaredNorm();
  }
  return std::sqrt(s);
}

double epsilon_involution_residual(const AntiunitaryMap& eps) {
  return (eps.U * eps.U.conjugate() - CMat::Identity(eps.U.rows(), eps.U.cols())).norm();
}

double epsilon_flip_residual(const AntiunitaryMap& eps, const CMat& Y) {
  return (eps.U * Y.conjugate() * eps.U.conjugate() + Y).norm();
}

AntiunitaryMap construct_epsilon(const CpMapData& nu, const CMat& Y, double beta) {
  const Index n = nu.h_dim(), d = nu.d_in;
  if (nu.d_out != d) throw DimensionMismatch("construct_epsilon: blocks are not square");
  if (n == 0) return AntiunitaryMap{CMat(0, 0), 1.0};
  if (!is_minimal(nu)) throw NotMinimal("construct_epsilon: blocks are linearly dependent");
  const double qb = quadratic_balance_residual(nu, Y, beta);
  if (qb > 1e-8) throw BalanceViolated("construct_epsilon: quadratic balance residual " + std::to_string(qb));

  // a_j = ν_j^*, b_m = Σ_l X_ml ν_l with X = e^{-βY/2}; both present Σ ν_j A ν_j^*.
  const CMat X = herm_function(Y, [&](double y) { return cd(std::exp(-0.5 * beta * y), 0.0); });
  const CMat Xinv = herm_function(Y, [&](double y) { return cd(std::exp(0.5 * beta * y), 0.0); });
  std::vector<CMat> a(n), b(n, CMat::Zero(d, d));
  for (Index j = 0; j < n; ++j) {
    a[j] = nu.kraus[j].adjoint();
    for (Index l = 0; l < n; ++l) b[j] += X(j, l) * nu.kraus[l];
  }
  CMat U;
  try {
    U = dilation_equivalence(CpMapData(d, d, b), CpMapData(d, d, a));
  } catch (const NotEquivalent& e) {
    throw BalanceViolated(std::string("construct_epsilon: ") + e.what());
  }
  // ν^* = U X ν, so ν_k = Σ_j ((UX)^{-1})_kj ν_j^*.
  AntiunitaryMap eps;
  eps.U = Xinv * U.conjugate() * Xinv.conjugate();
  Eigen::JacobiSVD<CMat> svd(gram(nu));
  const RVec& sv = svd.singularValues();
  eps.condition = sv(0) / sv(sv.size() - 1);

  const double scale = 1.0 + X.norm() * Xinv.norm();
  if (unitarity_defect(eps.U) > 1e-8 * scale) throw BalanceViolated("construct_epsilon: recovered map is not antiunitary");
  if (linear_balance_residual(nu, Y, beta, eps) > 1e-8 * scale)
    throw BalanceViolated("construct_epsilon: linear balance identity fails");
  if (epsilon_involution_residual(eps) > 1e-8 * scale) throw BalanceViolated("construct_epsilon: ε^2 != 1");
  if (epsilon_flip_residual(eps, Y) > 1e-8 * scale * (1.0 + Y.norm())) throw BalanceViolated("construct_epsilon: εYε != -Y");
  return eps;
}

}  // namespace cpsemi
