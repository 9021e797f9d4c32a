#include <doctest.h>

#include <limits>

#include "cpsemi/classical.hpp"
#include "cpsemi/pauli_fierz.hpp"
#include "oracles.hpp"

using namespace cpsemi;

namespace {

const double G = 0.1;

CMat two_level_K(double e) {
  CMat K = CMat::Zero(2, 2);
  K(1, 1) = e;
  return K;
}

SpectralCouplingModel vacuum(double g = G) {
  SpectralCouplingModel m;
  m.sys = SmallSystem(two_level_K(2));
  BohrWindow w;
  w.omega = 2;
  w.a = 1;
  w.b = 3;
  w.profile = Profile::flat(g);
  w.ops = {basis_matrix(2, 0, 1)};
  m.windows = {w};
  return m;
}

SpectralCouplingModel thermal(double beta, double g = G) {
  SpectralCouplingModel m;
  m.sys = SmallSystem(two_level_K(2));
  m.beta = beta;
  m.windows = make_thermal_coupling(Profile::flat(g), basis_matrix(2, 0, 1), 2, 1, 3, beta);
  return m;
}

}  // namespace

TEST_CASE("Bohr frequencies") {
  auto same = [](std::vector<double> a, std::vector<double> b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
      if (std::abs(a[i] - b[i]) > 1e-12) return false;
    return true;
  };
  CHECK(same(bohr_frequencies(SmallSystem(two_level_K(1))), {-1, 0, 1}));
  CMat K3 = CMat::Zero(3, 3);
  K3(1, 1) = 1;
  K3(2, 2) = 2;
  CHECK(same(bohr_frequencies(SmallSystem(K3)), {-2, -1, 0, 1, 2}));
  CHECK(same(bohr_frequencies(SmallSystem(CMat::Identity(2, 2))), {0}));
}

TEST_CASE("model validation") {
  SpectralCouplingModel m = vacuum();
  m.windows[0].omega = 1.5;
  CHECK_THROWS_AS(validate(m), PreconditionViolated);
  m = vacuum();
  m.windows[0].a = 2.5;
  CHECK_THROWS_AS(validate(m), InvalidGrid);
  CHECK_THROWS_AS(make_thermal_coupling(Profile::flat(G), basis_matrix(2, 0, 1), 2, 1, 3, 0.0), BetaNonPositive);
}

TEST_CASE("Davies generator of the vacuum model") {
  const DaviesData zero = davies_generator(vacuum(0.0));
  CHECK(norm(zero.M) <= 1e-14);
  CHECK(zero.upsilon.norm() <= 1e-14);
  const DaviesData dv = davies_generator(vacuum());
  CHECK(dv.orientation == "k'<-k");
  CHECK(dv.upsilon_identity <= 1e-10);
  CHECK(dv.commutes_with_K <= 1e-10);
  CHECK(dv.markov <= 1e-12);
  // log-linear fit of the excited population
  std::vector<double> ts = {0.5, 1.0, 2.0, 4.0}, ys;
  for (double t : ts) ys.push_back(std::log(evolve(dv.M, t, basis_matrix(2, 1, 1))(1, 1).real()));
  double st = 0, sy = 0, stt = 0, sty = 0;
  for (size_t i = 0; i < ts.size(); ++i) {
    st += ts[i];
    sy += ys[i];
    stt += ts[i] * ts[i];
    sty += ts[i] * ys[i];
  }
  const double n = ts.size();
  const double slope = (n * sty - st * sy) / (n * stt - st * st);
  CHECK(std::abs(-slope - 2 * M_PI * G * G) <= 1e-6);
  const RMat m = restrict_to_diagonal(dv.M, {basis_matrix(2, 0, 0), basis_matrix(2, 1, 1)});
  CHECK(is_classical_generator(m));
}

TEST_CASE("Davies generator of the thermal model") {
  const double beta = 1.0;
  const SpectralCouplingModel model = thermal(beta);
  const DaviesData dv = davies_generator(model);
  CHECK(dv.condi6 <= 1e-8);
  CHECK(quadratic_balance_residual(dv.nu, dv.Y, beta) <= 1e-8);
  const ThermalState st = gibbs_state(model.sys, beta);
  CHECK(adjoint(dv.M)(st.rho).norm() <= 1e-8);
  CHECK(dbc_check_standard(dv.M, st));
  CHECK(dbc_check_alt(dv.M, st));
  const RMat m = restrict_to_diagonal(dv.M, {basis_matrix(2, 0, 0), basis_matrix(2, 1, 1)});
  CHECK(std::abs(m(0, 1) / m(1, 0) - std::exp(-2 * beta)) <= 1e-8);
  const AntiunitaryMap eps = construct_epsilon(dv.nu, dv.Y, beta);
  CHECK(epsilon_involution_residual(eps) <= 1e-8);
  CHECK(epsilon_flip_residual(eps, dv.Y) <= 1e-8);
}

TEST_CASE("thermal coupling") {
  const auto inf = make_thermal_coupling(Profile::flat(G), basis_matrix(2, 0, 1), 2, 1, 3,
                                         std::numeric_limits<double>::infinity());
  REQUIRE(inf.size() == 1);
  CHECK((inf[0].ops[0] - basis_matrix(2, 0, 1)).norm() <= 1e-15);
  const SpectralCouplingModel th = thermal(1.0);
  CHECK(thermal_condition_residual(th, 1.0) <= 1e-10);
  CHECK(thermal_condition_residual(thermal(1.0, 0.0), 1.0) == 0.0);
  CHECK(thermal_condition_residual(vacuum(), 1.0) > 1e-4);
  // independent evaluation on one cell pair
  const ReservoirCells cells = reservoir_cells(th);
  for (Index c = 0; c < cells.size(); ++c) {
    const Index mc = cells.mirror(c);
    REQUIRE(mc >= 0);
    const CMat A = basis_matrix(2, 1, 1);
    CMat lhs = CMat::Zero(2, 2), rhs = CMat::Zero(2, 2);
    for (const CMat& v : cells.v[mc]) lhs += v * A * v.adjoint();
    for (const CMat& v : cells.v[c]) rhs += std::exp(-cells.x(c)) * v.adjoint() * A * v;
    CHECK((lhs - rhs).norm() <= 1e-12);
  }
}

TEST_CASE("reservoir conjugation") {
  const ReservoirConjugation rc = reservoir_conjugation(thermal(1.0), 1.0);
  CHECK(rc.intertwining <= 1e-8);
  CHECK(rc.involution <= 1e-8);
  CHECK(rc.flip <= 1e-8);
  CHECK_THROWS_AS(reservoir_conjugation(vacuum(), 1.0), NotThermal);
}

TEST_CASE("two-point KMS identity") {
  const SpectralCouplingModel th = thermal(1.0);
  for (double t : {0.0, 0.5, 1.0}) CHECK(kms_twopoint_check(th, 1.0, t).residual <= 1e-8);
  const KmsCheck z = kms_twopoint_check(thermal(1.0, 0.0), 1.0, 0.5);
  CHECK(std::abs(z.lhs) == 0.0);
  CHECK(std::abs(z.rhs) == 0.0);
  CHECK(kms_twopoint_check(vacuum(), 1.0, 0.5).residual > 1e-3);
  const CMat Id = CMat::Identity(2, 2), X = basis_matrix(2, 0, 1) + basis_matrix(2, 1, 0);
  CHECK(kms_twopoint_check(th, 1.0, 0.3, X, Id, Id, X).residual <= 1e-8);
}

TEST_CASE("reduced weak coupling limit on Fock space") {
  for (const PfRow& r : reduced_wcl_pf_experiment(vacuum(0.0), {0.6, 0.45}, 1.0, basis_matrix(2, 1, 1), 2))
    CHECK(r.error <= 1e-12);
  for (const PfRow& r : reduced_wcl_pf_experiment(vacuum(), {0.6, 0.45}, 1.0, CMat::Identity(2, 2), 2))
    CHECK(r.error <= 1e-10);
  const auto rows = reduced_wcl_pf_experiment(vacuum(), {0.6, 0.45}, 1.0, basis_matrix(2, 1, 1), 2);
  CHECK(rows[1].error < rows[0].error);
  const auto th = reduced_wcl_pf_experiment(thermal(1.0), {0.6, 0.45}, 1.0, basis_matrix(2, 1, 1), 2);
  CHECK(th[1].error < th[0].error);
  CHECK_THROWS_AS(reduced_wcl_pf_experiment(vacuum(), {0.45, 0.6}, 1.0, basis_matrix(2, 1, 1), 2), PreconditionViolated);
}
