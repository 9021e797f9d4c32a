#include <doctest.h>

#include "cpsemi/classical.hpp"
#include "cpsemi/invariance_dbc.hpp"
#include "oracles.hpp"

using namespace cpsemi;

namespace {

struct Covariant {
  CMat K;
  CpMapData nu;
  CMat Y;
  CMat theta;
};

CMat diag(const RVec& v) { return CMat(v.cast<cd>().asDiagonal()); }

// Bohr-covariant blocks on a generic spectrum, mixed by a random unitary on the
// noise space. thermal = true pairs every block E_ab with e^{-βω/2} E_ba.
Covariant covariant(std::mt19937_64& rng, Index d, double beta, bool thermal) {
  std::uniform_real_distribution<double> u(0.0, 3.0), w(0.2, 1.0);
  RVec k(d);
  for (Index i = 0; i < d; ++i) k(i) = u(rng) + 0.5 * i;
  std::vector<CMat> blocks;
  std::vector<double> ys;
  for (Index a = 0; a < d; ++a)
    for (Index b = a + 1; b < d; ++b) {
      const double om = k(b) - k(a);
      const cd c = w(rng) * std::polar(1.0, u(rng));
      blocks.push_back(c * basis_matrix(d, a, b));
      ys.push_back(om);
      if (thermal) {
        blocks.push_back(std::exp(-0.5 * beta * om) * std::conj(c) * basis_matrix(d, b, a));
        ys.push_back(-om);
      }
    }
  const Index n = static_cast<Index>(blocks.size());
  const CMat W = haar_unitary(rng, n);
  std::vector<CMat> mixed(n, CMat::Zero(d, d));
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) mixed[i] += W(i, j) * blocks[j];
  RVec yv = Eigen::Map<RVec>(ys.data(), n);
  RVec th(d);
  for (Index i = 0; i < d; ++i) th(i) = std::sin(3.0 * k(i));
  return {diag(k), CpMapData(d, d, mixed), CMat(W * diag(yv) * W.adjoint()), diag(th)};
}

Superoperator markov_generator(const Covariant& c) {
  CMat nn = CMat::Zero(c.K.rows(), c.K.rows());
  for (const CMat& v : c.nu.kraus) nn += v.adjoint() * v;
  return build_generator(LindbladData(c.theta, 0.5 * nn, c.nu));
}

CMat sigma_x() {
  CMat X = CMat::Zero(2, 2);
  X(0, 1) = X(1, 0) = 1;
  return X;
}

CMat sigma_z() {
  CMat Z = CMat::Zero(2, 2);
  Z(0, 0) = 1;
  Z(1, 1) = -1;
  return Z;
}

// 2-level thermal pair, K = diag(0, e)
CpMapData thermal_pair(double gamma, double beta, double e) {
  const double n = 1.0 / std::expm1(beta * e);
  return CpMapData(2, 2, {CMat(std::sqrt(gamma * (1 + n)) * basis_matrix(2, 0, 1)),
                          CMat(std::sqrt(gamma * n) * basis_matrix(2, 1, 0))});
}

}  // namespace

TEST_CASE("K-invariance examples") {
  CMat K = CMat::Zero(2, 2);
  K(1, 1) = 1;
  const SmallSystem sys(K);
  CHECK(is_k_invariant(Superoperator::zero(2), sys));
  const LindbladData decay(CMat::Zero(2, 2), 0.5 * basis_matrix(2, 1, 1), CpMapData(2, 2, {basis_matrix(2, 0, 1)}));
  CHECK(is_k_invariant(build_generator(decay), sys));
  CHECK_FALSE(is_k_invariant(commutator_superop(sigma_x()), SmallSystem(sigma_z())));
  // oracle: superoperator commutator with D = i[K, .]
  const Superoperator M = commutator_superop(sigma_x()), D = commutator_superop(sigma_z());
  CHECK(k_invariance_residual(M, SmallSystem(sigma_z())) ==
        doctest::Approx((compose(M, D).mat - compose(D, M).mat).norm()).epsilon(1e-10));
}

TEST_CASE("jump energy examples") {
  CMat K = CMat::Zero(2, 2);
  K(1, 1) = 1;
  const SmallSystem sys(K);
  const JumpEnergy one = find_jump_energy(CpMapData(2, 2, {basis_matrix(2, 0, 1)}), sys);
  CHECK(std::abs(one.Y(0, 0) - 1.0) <= 1e-10);
  const JumpEnergy two = find_jump_energy(CpMapData(2, 2, {basis_matrix(2, 0, 1), basis_matrix(2, 1, 0)}), sys);
  CMat ref = CMat::Zero(2, 2);
  ref(0, 0) = 1;
  ref(1, 1) = -1;
  CHECK((two.Y - ref).norm() <= 1e-10);
  std::mt19937_64 rng(41);
  const JumpEnergy zero = find_jump_energy(CpMapData(2, 2, {CMat(CMat::Identity(2, 2))}), SmallSystem(random_hermitian(rng, 2)));
  CHECK(zero.Y.norm() <= 1e-10);
  CHECK_THROWS_AS(find_jump_energy(CpMapData(2, 2, {sigma_x()}), sys), NoSolution);
}

TEST_CASE("detailed balance examples") {
  const double beta = 1.0, e = 2.0;
  CMat K = CMat::Zero(2, 2);
  K(1, 1) = e;
  const SmallSystem sys(K);
  const ThermalState gibbs = gibbs_state(sys, beta);
  CHECK(std::abs(gibbs.rho(1, 1) / gibbs.rho(0, 0) - std::exp(-beta * e)) <= 1e-12);
  ThermalState half;
  half.rho = 0.5 * CMat::Identity(2, 2);
  CHECK(dbc_check_standard(Superoperator::zero(2), half));
  CHECK(dbc_check_alt(Superoperator::zero(2), half));
  const CpMapData nu = thermal_pair(0.3, beta, e);
  CMat nn = CMat::Zero(2, 2);
  for (const CMat& v : nu.kraus) nn += v.adjoint() * v;
  const Superoperator M = build_generator(LindbladData(K, 0.5 * nn, nu));
  CHECK(dbc_check_standard(M, gibbs));
  CHECK(dbc_check_alt(M, gibbs));
  CHECK_FALSE(dbc_check_standard(M, half));
  CHECK_FALSE(dbc_check_alt(M, half));
  const Superoperator tilted = build_generator(LindbladData(sigma_x(), 0.5 * nn, nu));
  CHECK_FALSE(dbc_check_alt(tilted, gibbs));
  ThermalState singular;
  singular.rho = basis_matrix(2, 0, 0);
  CHECK_THROWS_AS(dbc_check_standard(M, singular), DegenerateState);
}

TEST_CASE("quadratic balance examples") {
  const double beta = 1.0, e = 1.0;
  CMat Y = CMat::Zero(2, 2);
  Y(0, 0) = e;
  Y(1, 1) = -e;
  CHECK(quadratic_balance_residual(CpMapData(2, 2, {CMat(CMat::Zero(2, 2)), CMat(CMat::Zero(2, 2))}), Y, beta) == 0.0);
  const CpMapData nu = thermal_pair(0.4, beta, e);
  CHECK(quadratic_balance_residual(nu, Y, beta) <= 1e-10);
  // direct evaluation on E_00
  const CMat A = basis_matrix(2, 0, 0);
  CMat lhs = CMat::Zero(2, 2), rhs = CMat::Zero(2, 2);
  for (int j = 0; j < 2; ++j) {
    lhs += nu.kraus[j] * A * nu.kraus[j].adjoint();
    rhs += std::exp(-beta * Y(j, j).real()) * nu.kraus[j].adjoint() * A * nu.kraus[j];
  }
  CHECK((lhs - rhs).norm() <= 1e-12);
  CMat y1 = CMat::Constant(1, 1, e);
  CHECK(quadratic_balance_residual(CpMapData(2, 2, {basis_matrix(2, 0, 1)}), y1, beta) > 1e-3);
}

TEST_CASE("antiunitary epsilon examples") {
  const double beta = 1.0, e = 1.0;
  CMat Y = CMat::Zero(2, 2);
  Y(0, 0) = e;
  Y(1, 1) = -e;
  const AntiunitaryMap eps = construct_epsilon(thermal_pair(0.4, beta, e), Y, beta);
  CHECK(std::abs(eps.U(0, 0)) <= 1e-8);
  CHECK(std::abs(std::abs(eps.U(0, 1)) - 1.0) <= 1e-8);
  CHECK(epsilon_involution_residual(eps) <= 1e-8);
  CHECK(epsilon_flip_residual(eps, Y) <= 1e-8);
  CHECK(linear_balance_residual(thermal_pair(0.4, beta, e), Y, beta, eps) <= 1e-8);
  const CpMapData real(2, 2, {sigma_x(), sigma_z()});
  const AntiunitaryMap conj = construct_epsilon(real, CMat::Zero(2, 2), 0.7);
  CHECK((conj.U - CMat::Identity(2, 2)).norm() <= 1e-8);
  CHECK_THROWS_AS(construct_epsilon(CpMapData(2, 2, {basis_matrix(2, 0, 1)}), CMat::Constant(1, 1, e), beta),
                  BalanceViolated);
}

TEST_CASE("covariant Markov generators are K-invariant") {
  std::mt19937_64 rng(42);
  for (int rep = 0; rep < 50; ++rep) {
    const Covariant c = covariant(rng, 2 + rep % 3, 1.0, rep % 2);
    REQUIRE(covariance_residual(c.nu, c.K, c.Y) <= 1e-10);
    CHECK(is_k_invariant(markov_generator(c), SmallSystem(c.K)));
  }
}

TEST_CASE("covariance and quadratic balance give detailed balance") {
  std::mt19937_64 rng(43);
  for (int rep = 0; rep < 50; ++rep) {
    const double beta = 0.5 + 0.05 * rep;
    const Covariant c = covariant(rng, 2 + rep % 3, beta, true);
    REQUIRE(quadratic_balance_residual(c.nu, c.Y, beta) <= 1e-10);
    const Superoperator M = markov_generator(c);
    const ThermalState st = gibbs_state(SmallSystem(c.K), beta);
    CHECK(dbc_check_standard(M, st));
    CHECK(dbc_check_alt(M, st));
  }
}

TEST_CASE("epsilon implies quadratic balance, and its identities hold") {
  std::mt19937_64 rng(44);
  for (int rep = 0; rep < 50; ++rep) {
    const double beta = 0.3 + 0.04 * rep;
    const Covariant c = covariant(rng, 2 + rep % 2, beta, true);
    const AntiunitaryMap eps = construct_epsilon(c.nu, c.Y, beta);
    CHECK(epsilon_involution_residual(eps) <= 1e-8);
    CHECK(epsilon_flip_residual(eps, c.Y) <= 1e-8);
    if (linear_balance_residual(c.nu, c.Y, beta, eps) <= 1e-10) CHECK(quadratic_balance_residual(c.nu, c.Y, beta) <= 1e-8);
  }
}

TEST_CASE("lifted balanced classical generators satisfy both quantum conditions") {
  RMat m(3, 3);
  m << -3, 2, 1, 1, -1.5, 0.5, 1, 1, -2;
  RVec p(3);
  // p_i m_ij = p_j m_ji: p0*2 = p1*1, p0*1 = p2*1, p1*0.5 = p2*1
  p << 1, 2, 1;
  p /= p.sum();
  REQUIRE(classical_dbc_check(m, p));
  ThermalState st;
  st.rho = CMat(p.cast<cd>().asDiagonal());
  const Superoperator M = build_generator(lift_classical(m, RVec::Zero(3)));
  CHECK(dbc_check_standard(M, st));
  CHECK(dbc_check_alt(M, st));
}
