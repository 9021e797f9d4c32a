#include <doctest.h>

#include "cpsemi/classical.hpp"
#include "cpsemi/invariance_dbc.hpp"
#include "oracles.hpp"

using namespace cpsemi;

namespace {

RVec stationary(const RMat& m) {
  Eigen::FullPivLU<RMat> lu(m.transpose());
  RVec p = lu.kernel().col(0);
  return p / p.sum();
}

// m_ij = s_ij / p_i with s symmetric satisfies p_i m_ij = p_j m_ji
RMat balanced_rates(std::mt19937_64& rng, const RVec& p) {
  std::uniform_real_distribution<double> u(0.1, 1.0);
  const Index n = p.size();
  RMat m = RMat::Zero(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) {
      const double s = u(rng);
      m(i, j) = s / p(i);
      m(j, i) = s / p(j);
    }
  for (Index i = 0; i < n; ++i) m(i, i) = -m.row(i).sum();
  return m;
}

std::vector<CMat> diagonal_projections(Index n) {
  std::vector<CMat> P;
  for (Index j = 0; j < n; ++j) P.push_back(basis_matrix(n, j, j));
  return P;
}

}  // namespace

TEST_CASE("classical generator examples") {
  RMat a(2, 2), b(2, 2);
  a << -1, 1, 1, -1;
  b << 0, -1, 1, 0;
  CHECK(is_classical_generator(a));
  CHECK_FALSE(is_classical_generator(b));
}

TEST_CASE("classical detailed balance examples") {
  RMat m(2, 2);
  m << -1, 1, 1, -1;
  CHECK(classical_dbc_check(m, RVec::Constant(2, 0.5)));
  RMat m2(2, 2);
  m2 << -2, 2, 1, -1;
  RVec p(2);
  p << 1.0 / 3.0, 2.0 / 3.0;
  CHECK(classical_dbc_check(m2, p));
  CHECK_FALSE(classical_dbc_check(m2, RVec::Constant(2, 0.5)));
}

TEST_CASE("restriction of decay and zero generators") {
  CHECK(restrict_to_diagonal(Superoperator::zero(2), diagonal_projections(2)).norm() == 0.0);
  const double g = 0.7;
  const LindbladData decay(CMat::Zero(2, 2), 0.5 * g * basis_matrix(2, 1, 1),
                           CpMapData(2, 2, {CMat(std::sqrt(g) * basis_matrix(2, 0, 1))}));
  const RMat m = restrict_to_diagonal(build_generator(decay), diagonal_projections(2));
  CHECK(m(1, 0) == doctest::Approx(g));
  CHECK(m(1, 1) == doctest::Approx(-g));
  CHECK(std::abs(m(0, 1)) <= 1e-15);
  CHECK(std::abs(m(0, 0)) <= 1e-15);
}

TEST_CASE("lift examples") {
  RVec th(2);
  th << 1, 2;
  const LindbladData L = lift_classical(RMat::Zero(2, 2), th);
  CHECK(L.nu.h_dim() == 0);
  CHECK((L.theta - CMat(th.cast<cd>().asDiagonal())).norm() <= 1e-15);
  const LindbladData c = canonical_form(build_generator(L));
  CHECK(std::abs(c.theta.trace()) <= 1e-12);
  RMat m(2, 2);
  m << -1, 1, 1, -1;
  const LindbladData l2 = lift_classical(m, RVec::Zero(2));
  CHECK(l2.nu.h_dim() == 2);
  for (const CMat& v : l2.nu.kraus) CHECK(v.norm() == doctest::Approx(1.0));
  CHECK((restrict_to_diagonal(build_generator(l2), diagonal_projections(2)) - m).norm() <= 1e-12);
}

TEST_CASE("lift and restrict round trip on random rates, rotated bases included") {
  std::mt19937_64 rng(31);
  for (int rep = 0; rep < 50; ++rep) {
    const int n = 2 + rep % 4;
    const RMat m = oracle::rate_matrix(rng, n);
    const CMat basis = rep % 2 ? haar_unitary(rng, n) : CMat();
    const LindbladData L = lift_classical(m, RVec::Zero(n), basis);
    std::vector<CMat> P;
    for (int j = 0; j < n; ++j) {
      const CVec e = basis.size() ? CVec(basis.col(j)) : CVec(CVec::Unit(n, j));
      P.push_back(e * e.adjoint());
    }
    CHECK((restrict_to_diagonal(build_generator(L), P) - m).norm() <= 1e-10);
    CHECK(is_markov(L));
  }
}

TEST_CASE("stochastic semigroup") {
  std::mt19937_64 rng(32);
  for (int rep = 0; rep < 10; ++rep) {
    const RMat m = oracle::rate_matrix(rng, 4);
    for (double t : {0.1, 1.0, 10.0}) {
      const RMat P = expm(RMat(t * m));
      CHECK((P.rowwise().sum() - RVec::Ones(4)).cwiseAbs().maxCoeff() <= 1e-10);
      CHECK(P.minCoeff() >= -1e-10);
      CHECK((P - oracle::expm_taylor(RMat(t * m))).norm() <= 1e-9);
    }
  }
}

TEST_CASE("classical detailed balance implies stationarity") {
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> u(0.2, 1.0);
  for (int rep = 0; rep < 20; ++rep) {
    RVec p(4);
    for (int i = 0; i < 4; ++i) p(i) = u(rng);
    p /= p.sum();
    const RMat m = balanced_rates(rng, p);
    REQUIRE(classical_dbc_check(m, p));
    CHECK((p.transpose() * m).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("classical and quantum detailed balance agree") {
  std::mt19937_64 rng(34);
  std::uniform_real_distribution<double> u(0.2, 1.0);
  int disagreements = 0;
  for (int rep = 0; rep < 40; ++rep) {
    const int n = 2 + rep % 3;
    RMat m;
    RVec p(n);
    if (rep % 2 == 0) {
      for (int i = 0; i < n; ++i) p(i) = u(rng);
      p /= p.sum();
      m = balanced_rates(rng, p);
    } else {
      m = oracle::rate_matrix(rng, n);
      p = stationary(m);
    }
    ThermalState st;
    st.rho = CMat(p.cast<cd>().asDiagonal());
    const Superoperator M = build_generator(lift_classical(m, RVec::Zero(n)));
    const bool classical = classical_dbc_check(m, p, 1e-9);
    disagreements += classical != dbc_check_standard(M, st);
    disagreements += classical != dbc_check_alt(M, st);
  }
  CHECK(disagreements == 0);
}
