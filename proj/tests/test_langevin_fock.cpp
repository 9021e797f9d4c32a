#include <doctest.h>

#include "cpsemi/dilation_toy.hpp"
#include "cpsemi/langevin_fock.hpp"
#include "oracles.hpp"

using namespace cpsemi;

namespace {

CMat scalar(cd v) { return CMat::Constant(1, 1, v); }

struct CovariantData {
  CMat K, upsilon, Y;
  CpMapData nu;
};

// blocks c E_ab with jump energies k_b - k_a, Re Υ diagonal with K
CovariantData covariant(std::mt19937_64& rng, Index d) {
  std::uniform_real_distribution<double> u(0.0, 2.0);
  CMat K = CMat::Zero(d, d), R = CMat::Zero(d, d);
  for (Index i = 0; i < d; ++i) {
    K(i, i) = u(rng) + i;
    R(i, i) = u(rng);
  }
  std::vector<CMat> blocks;
  std::vector<double> ys;
  for (Index a = 0; a < d; ++a)
    for (Index b = 0; b < d; ++b)
      if (a != b && u(rng) > 0.7) {
        blocks.push_back(std::polar(u(rng), 3.0 * u(rng)) * basis_matrix(d, a, b));
        ys.push_back((K(b, b) - K(a, a)).real());
      }
  if (blocks.empty()) {
    blocks.push_back(basis_matrix(d, 0, 1));
    ys.push_back((K(1, 1) - K(0, 0)).real());
  }
  CMat nn = CMat::Zero(d, d);
  for (const CMat& v : blocks) nn += v.adjoint() * v;
  CMat Y = CMat::Zero(blocks.size(), blocks.size());
  for (size_t j = 0; j < ys.size(); ++j) Y(j, j) = ys[j];
  return {K, CMat(R - 0.5 * I_UNIT * nn), Y, CpMapData(d, d, blocks)};
}

}  // namespace

TEST_CASE("truncated Fock space") {
  const TruncatedFock f(1, 2);
  CHECK(f.dim() == 3);
  CMat a = CMat::Zero(3, 3);
  a(0, 1) = 1;
  a(1, 2) = std::sqrt(2.0);
  CHECK((CMat(f.annihilation(0)) - a).norm() <= 1e-15);
  CHECK((CMat(f.creation(0)) - a.adjoint()).norm() <= 1e-15);
  CHECK(TruncatedFock::dimension(4, 2) == 15);
  CHECK(TruncatedFock(4, 2).dim() == 15);
  const TruncatedFock g(3, 3);
  CHECK(g.index_of({0, 0, 0}) == 0);
  CHECK(g.index_of({2, 1, 1}) == -1);
  for (Index m = 0; m < 3; ++m)
    for (Index n = 0; n < 3; ++n) {
      const CMat am(g.annihilation(m)), an(g.annihilation(n));
      const CMat comm = am * an.adjoint() - an.adjoint() * am;
      for (Index s = 0; s < g.dim(); ++s) {
        int total = 0;
        for (int k : g.basis()[s]) total += k;
        if (total > 2) continue;
        CVec e = CVec::Unit(g.dim(), s);
        const CVec lhs = comm * e;
        CHECK((lhs - (m == n ? e : CVec(CVec::Zero(g.dim())))).norm() <= 1e-12);
      }
    }
  CMat h = CMat::Zero(3, 3);
  h(0, 0) = 1;
  h(1, 1) = 2;
  h(2, 2) = 3;
  const CMat N(g.dGamma(h));
  CHECK(std::abs(N(g.index_of({1, 0, 2}), g.index_of({1, 0, 2})) - 7.0) <= 1e-12);
  CHECK_THROWS_AS(TruncatedFock(60, 4), FockTooLarge);
}

TEST_CASE("Langevin generator structure") {
  const CMat ups = scalar(cd(0, -0.5));
  const CpMapData nu(1, 1, {CMat(CMat::Ones(1, 1))});
  const ReservoirGrid grid = ReservoirGrid::symmetric(3, 7);
  const LangevinGenerator gen = build_langevin_Z(ups, nu, grid, 2);
  CHECK(gen.dim() == TruncatedFock::dimension(7, 2));
  CHECK(hermiticity_defect(CMat(gen.Z)) <= 1e-12);
  const ToyDilation toy = build_Zr(ups, grid);
  CHECK((one_excitation_block(gen) - toy.Z).norm() <= 1e-12);
  const ReductionErrors e0 = langevin_reduction_check(gen, 0.0, CMat::Ones(1, 1));
  CHECK(e0.semigroup <= 1e-14);
  CHECK(e0.cp <= 1e-14);
  CHECK(unitarity_defect(expm_hermitian(CMat(gen.Z), 1.0)) <= 1e-10);
  const LangevinGenerator free = build_langevin_Z(CMat::Zero(2, 2), CpMapData(2, 2, {}), grid, 2);
  CHECK(CMat(free.coupling).norm() == 0.0);
  for (double t : {0.5, 2.0}) {
    const ReductionErrors e = langevin_reduction_check(free, t, basis_matrix(2, 0, 1));
    CHECK(e.semigroup <= 1e-12);
    CHECK(e.cp <= 1e-12);
  }
}

TEST_CASE("one-excitation sector reproduces the toy dilation") {
  const CMat ups = scalar(cd(0, -0.5));
  const CpMapData nu(1, 1, {CMat(CMat::Ones(1, 1))});
  for (auto [r, n] : std::vector<std::pair<double, Index>>{{10, 41}, {20, 81}}) {
    const ReservoirGrid grid = ReservoirGrid::symmetric(r, n);
    const LangevinGenerator one = build_langevin_Z(ups, nu, grid, 1);
    const ToyDilation toy = build_Zr(ups, grid);
    CHECK(langevin_reduction_check(one, 1.0, CMat::Ones(1, 1)).semigroup ==
          doctest::Approx(dilation_check(toy, 1.0)).epsilon(1e-10));
  }
}

TEST_CASE("reduction errors decrease with refinement") {
  CMat ups = CMat::Zero(2, 2);
  ups(1, 1) = cd(0, -0.5);
  const CpMapData nu(2, 2, {basis_matrix(2, 0, 1)});
  const ReductionErrors a = langevin_reduction_check(build_langevin_Z(ups, nu, ReservoirGrid::symmetric(10, 41), 2), 1.0,
                                                     basis_matrix(2, 1, 1));
  const ReductionErrors b = langevin_reduction_check(build_langevin_Z(ups, nu, ReservoirGrid::symmetric(20, 81), 2), 1.0,
                                                     basis_matrix(2, 1, 1));
  CHECK(b.semigroup < a.semigroup);
  CHECK(b.cp < a.cp);
}

TEST_CASE("total energy examples") {
  const ReservoirGrid grid = ReservoirGrid::symmetric(2, 5);
  const LangevinGenerator free = build_langevin_Z(CMat::Zero(2, 2), CpMapData(2, 2, {CMat(CMat::Zero(2, 2))}), grid, 2);
  CHECK(commutation_residual(total_energy(CMat::Zero(2, 2), CMat::Zero(1, 1), free), free.Z) == 0.0);
  CMat K = CMat::Zero(2, 2);
  K(1, 1) = 1.5;
  CMat ups = CMat::Zero(2, 2);
  ups(1, 1) = cd(0, -0.5);
  const LangevinGenerator gen = build_langevin_Z(ups, CpMapData(2, 2, {basis_matrix(2, 0, 1)}), grid, 2);
  CHECK(condi6b_residual(K, CMat::Constant(1, 1, 1.5), gen) <= 1e-12);
  CHECK(commutation_residual(total_energy(K, CMat::Constant(1, 1, 1.5), gen), gen.Z) <= 1e-10);
  const double r1 = commutation_residual(total_energy(K, CMat::Constant(1, 1, 1.6), gen), gen.Z);
  const double r2 = commutation_residual(total_energy(K, CMat::Constant(1, 1, 1.7), gen), gen.Z);
  CHECK(r1 > 1e-3);
  CHECK(r2 / r1 == doctest::Approx(2.0).epsilon(1e-6));
  CHECK_THROWS_AS(total_energy_checked(K, CMat::Constant(1, 1, 1.6), gen), PreconditionViolated);
}

TEST_CASE("energy conservation on random covariant data") {
  std::mt19937_64 rng(61);
  for (int rep = 0; rep < 50; ++rep) {
    const CovariantData c = covariant(rng, 2 + rep % 2);
    const LangevinGenerator gen = build_langevin_Z(c.upsilon, c.nu, ReservoirGrid::symmetric(2, 3), 2);
    REQUIRE(condi6b_residual(c.K, c.Y, gen) <= 1e-12);
    CHECK(commutation_residual(total_energy(c.K, c.Y, gen), gen.Z) <= 1e-10);
  }
}
