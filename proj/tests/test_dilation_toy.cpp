#include <doctest.h>

#include "cpsemi/dilation_toy.hpp"
#include "oracles.hpp"

using namespace cpsemi;

namespace {

CMat scalar(cd v) { return CMat::Constant(1, 1, v); }

// [Re Υ, C^*; C, diag x] with C = √(Δx/2π) ν on each grid row, noise index major
CMat z_oracle(const CMat& ups, const CMat& nu, const ReservoirGrid& g) {
  const Index d = ups.rows(), h = nu.rows(), n = g.n;
  CMat Z = CMat::Zero(d + h * n, d + h * n);
  Z.topLeftCorner(d, d) = 0.5 * (ups + ups.adjoint());
  const double c = std::sqrt(g.dx / (2 * M_PI));
  for (Index a = 0; a < h; ++a)
    for (Index i = 0; i < n; ++i) {
      const Index row = d + a * n + i;
      Z(row, row) = g.points(i);
      Z.block(row, 0, 1, d) = c * nu.row(a);
      Z.block(0, row, d, 1) = c * nu.row(a).adjoint();
    }
  return Z;
}

}  // namespace

TEST_CASE("grids") {
  const ReservoirGrid s = ReservoirGrid::symmetric(10, 401);
  CHECK(s.dx == doctest::Approx(20.0 / 401.0));
  CHECK(std::abs(s.points(200)) <= 1e-14);
  CHECK(s.points(0) == doctest::Approx(-10 + 0.5 * s.dx));
  CHECK(s.is_symmetric());
  CHECK_THROWS_AS(ReservoirGrid::symmetric(10, 400), InvalidGrid);
  const ReservoirGrid a = ReservoirGrid::asymmetric(-1, 3, 4);
  CHECK(a.points(0) == doctest::Approx(-0.5));
  CHECK_FALSE(a.is_symmetric());
  const ReservoirGrid c = ReservoirGrid::centred(0.5, 5);
  CHECK(c.points(0) == doctest::Approx(-1.0));
  CHECK(c.points(4) == doctest::Approx(1.0));
}

TEST_CASE("noise factor examples") {
  const NoiseFactor s = noise_factor(scalar(cd(0, -0.5)));
  CHECK(s.h_dim == 1);
  CHECK(std::abs(std::abs(s.nu(0, 0)) - 1.0) <= 1e-12);
  std::mt19937_64 rng(51);
  CHECK(noise_factor(random_hermitian(rng, 3)).h_dim == 0);
  CMat u = CMat::Zero(2, 2);
  u(0, 0) = 1;
  u(1, 1) = cd(1, -1);
  const NoiseFactor f = noise_factor(u);
  REQUIRE(f.h_dim == 1);
  CHECK(std::abs(f.nu(0, 0)) <= 1e-12);
  CHECK(std::abs(std::abs(f.nu(0, 1)) - std::sqrt(2.0)) <= 1e-12);
  CHECK_THROWS_AS(noise_factor(scalar(cd(0, 0.5))), NotDissipative);
}

TEST_CASE("Z_r against the block formula") {
  std::mt19937_64 rng(52);
  const CMat ups = random_hermitian(rng, 2) - 0.5 * I_UNIT * CMat::Identity(2, 2);
  const ToyDilation dil = build_Zr(ups, ReservoirGrid::symmetric(3, 31));
  CHECK(dil.h_dim() == 2);
  CHECK((dil.Z - z_oracle(ups, dil.nu, dil.grid)).norm() <= 1e-13);
  CHECK(hermiticity_defect(dil.Z) <= 1e-14);
  CHECK((dil.nu.adjoint() * dil.nu - I_UNIT * (ups - ups.adjoint())).norm() <= 1e-12);
  CHECK(unitarity_defect(expm_hermitian(dil.Z, 2.0)) <= 1e-10);
}

TEST_CASE("dilation error against a direct exponential") {
  const CMat ups = scalar(cd(0, -0.5));
  const ToyDilation dil = build_Zr(ups, ReservoirGrid::symmetric(5, 41));
  for (double t : {0.5, 1.0, 2.0}) {
    const cd amp = oracle::expm_taylor(CMat(-I_UNIT * t * dil.Z))(0, 0);
    CHECK(dilation_check(dil, t) == doctest::Approx(std::abs(amp - std::exp(-0.5 * t))).epsilon(1e-8));
  }
  CHECK(dilation_check(dil, 0.0) <= 1e-14);
  std::mt19937_64 rng(53);
  const ToyDilation herm = build_Zr(random_hermitian(rng, 2), ReservoirGrid::symmetric(5, 41));
  CHECK(herm.h_dim() == 0);
  for (double t : {0.5, 3.0}) CHECK(dilation_check(herm, t) <= 1e-12);
  CHECK_THROWS_AS(dilation_check(dil, -1.0), PreconditionViolated);
}

TEST_CASE("dilation error decreases along the refinement ladder") {
  const CMat ups = scalar(cd(0, -0.5));
  double last = 1e9;
  for (auto [r, n] : std::vector<std::pair<double, Index>>{{10, 401}, {20, 801}, {40, 1601}}) {
    const double e = dilation_check(build_Zr(ups, ReservoirGrid::symmetric(r, n)), 1.0);
    CHECK(e < last);
    last = e;
  }
  CHECK(last <= 0.02);
}

TEST_CASE("resolvent formula") {
  std::mt19937_64 rng(54);
  const ToyDilation herm = build_Zr(random_hermitian(rng, 2), ReservoirGrid::symmetric(5, 41));
  CHECK(resolvent_compare(herm, cd(0.3, 1.0)) <= 1e-12);
  const CMat ups = scalar(cd(0, -0.5));
  CHECK(resolvent_compare(build_Zr(ups, ReservoirGrid::symmetric(5, 51)), cd(0, 5)) <= 1e-6);
  double last = 1e9;
  for (auto [r, n] : std::vector<std::pair<double, Index>>{{10, 401}, {20, 801}, {40, 1601}}) {
    const double e = resolvent_compare(build_Zr(ups, ReservoirGrid::symmetric(r, n)), cd(0, 1));
    CHECK(e <= 0.5 * last);
    last = e;
  }
  // the cutoff error of Υ itself falls like 1/r
  const double l1 = resolvent_limit_residual(build_Zr(ups, ReservoirGrid::symmetric(10, 401)), cd(0, 1));
  const double l2 = resolvent_limit_residual(build_Zr(ups, ReservoirGrid::symmetric(20, 801)), cd(0, 1));
  CHECK(l2 < 0.6 * l1);
  CHECK_THROWS_AS(resolvent_compare(herm, cd(1, 0)), ImZNotPositive);
}

TEST_CASE("scaling covariance") {
  const ToyDilation dil = build_Zr(scalar(cd(0, -0.5)), ReservoirGrid::symmetric(2, 41));
  CHECK(scaling_covariance_check(dil, 1.0) == 0.0);
  CHECK(scaling_covariance_check(dil, 0.5) <= 1e-10);
  CHECK_THROWS_AS(scaling_covariance_check(dil, 1.0 / std::sqrt(M_PI)), IncompatibleScale);
}

TEST_CASE("quadratic conjugation") {
  const CMat ups = -0.5 * I_UNIT * CMat::Identity(2, 2);
  const ToyDilation dil = build_Zr(ups, ReservoirGrid::symmetric(2, 21));
  const ToyDilation same = toy_quadratic_conjugation(dil, CMat::Identity(2, 2));
  CHECK((same.Z - dil.Z).norm() <= 1e-12);
  std::mt19937_64 rng(55);
  const ToyDilation c = toy_quadratic_conjugation(dil, haar_unitary(rng, 2));
  CHECK(hermiticity_defect(c.Z) <= 1e-10);
  CHECK(c.Z.topLeftCorner(2, 2).isApprox(dil.Z.topLeftCorner(2, 2)));
  const ToyDilation s1 = build_Zr(scalar(cd(0, -0.5)), ReservoirGrid::symmetric(10, 201));
  CHECK(dilation_check(toy_quadratic_conjugation(s1, scalar(-1.0)), 1.0) ==
        doctest::Approx(dilation_check(s1, 1.0)).epsilon(1e-8));
  CHECK_THROWS_AS(toy_quadratic_conjugation(dil, 2.0 * CMat::Identity(2, 2)), NotUnitary);
}
