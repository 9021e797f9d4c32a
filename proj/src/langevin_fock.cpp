#include "cpsemi/langevin_fock.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>

#include "cpsemi/invariance_dbc.hpp"

namespace cpsemi {

namespace {

void enumerate(std::vector<int>& occ, Index pos, int remaining, std::vector<std::vector<int>>& out) {
  if (pos == static_cast<Index>(occ.size())) {
    out.push_back(occ);
    return;
  }
  for (int k = 0; k <= remaining; ++k) {
    occ[pos] = k;
    enumerate(occ, pos + 1, remaining - k, out);
  }
  occ[pos] = 0;
}

SpCMat sparse_identity(Index n) {
  SpCMat I(n, n);
  I.setIdentity();
  return I;
}

SpCMat sparse_of(const CMat& A) { return A.sparseView(); }

}  // namespace

size_t TruncatedFock::Hash::operator()(const std::vector<int>& v) const {
  size_t h = 1469598103934665603ull;
  for (int x : v) h = (h ^ static_cast<size_t>(x + 1)) * 1099511628211ull;
  return h;
}

Index TruncatedFock::dimension(Index modes, int n_max) {
  // C(modes + n_max, n_max), saturating
  double c = 1.0;
  for (int k = 1; k <= n_max; ++k) c = c * static_cast<double>(modes + k) / k;
  return c > 9e15 ? Index(9e15) : static_cast<Index>(std::llround(c));
}

TruncatedFock::TruncatedFock(Index modes, int n_max, Index cap) : modes_(modes), n_max_(n_max) {
  if (modes < 0 || n_max < 0) throw PreconditionViolated("TruncatedFock: negative size");
  const Index dim = dimension(modes, n_max);
  if (dim > cap) throw FockTooLarge("Fock dimension " + std::to_string(dim) + " exceeds cap " + std::to_string(cap));
  basis_.reserve(dim);
  std::vector<int> occ(modes, 0);
  enumerate(occ, 0, n_max, basis_);
  for (Index i = 0; i < static_cast<Index>(basis_.size()); ++i) index_.emplace(basis_[i], i);
}

Index TruncatedFock::index_of(const std::vector<int>& occ) const {
  auto it = index_.find(occ);
  return it == index_.end() ? -1 : it->second;
}

SpCMat TruncatedFock::annihilation(Index mode) const {
  std::vector<Eigen::Triplet<cd>> trip;
  for (Index s = 0; s < dim(); ++s) {
    const int n = basis_[s][mode];
    if (n == 0) continue;
    std::vector<int> occ = basis_[s];
    --occ[mode];
    trip.emplace_back(index_of(occ), s, cd(std::sqrt(static_cast<double>(n))));
  }
  SpCMat a(dim(), dim());
  a.setFromTriplets(trip.begin(), trip.end());
  return a;
}

SpCMat TruncatedFock::creation(Index mode) const { return annihilation(mode).adjoint(); }

SpCMat TruncatedFock::number() const { return dGamma(CMat::Identity(modes_, modes_)); }

SpCMat TruncatedFock::dGamma(const CMat& h) const {
  if (h.rows() != modes_ || h.cols() != modes_) throw DimensionMismatch("dGamma: one-particle operator has wrong size");
  std::vector<Eigen::Triplet<cd>> trip;
  std::vector<std::vector<Index>> col_nz(modes_);
  for (Index nu = 0; nu < modes_; ++nu)
    for (Index mu = 0; mu < modes_; ++mu)
      if (h(mu, nu) != cd(0.0)) col_nz[nu].push_back(mu);
  for (Index s = 0; s < dim(); ++s) {
    const std::vector<int>& occ = basis_[s];
    for (Index nu = 0; nu < modes_; ++nu) {
      if (occ[nu] == 0) continue;
      std::vector<int> tmp = occ;
      --tmp[nu];
      const double an = std::sqrt(static_cast<double>(occ[nu]));
      for (Index mu : col_nz[nu]) {
        ++tmp[mu];
        const double cr = std::sqrt(static_cast<double>(tmp[mu]));
        trip.emplace_back(index_of(tmp), s, h(mu, nu) * an * cr);
        --tmp[mu];
      }
    }
  }
  SpCMat out(dim(), dim());
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

LangevinGenerator build_langevin_Z(const CMat& upsilon, const CpMapData& nu, const ReservoirGrid& grid, int n_max,
                                   Index cap) {
  const Index d = upsilon.rows();
  if (upsilon.cols() != d) throw DimensionMismatch("build_langevin_Z: Υ is not square");
  if (nu.h_dim() > 0 && (nu.d_in != d || nu.d_out != d)) throw DimensionMismatch("build_langevin_Z: blocks are not d x d");
  const Index h = nu.h_dim(), n = grid.n, m = h * n;
  if (d * TruncatedFock::dimension(m, n_max) > cap)
    throw FockTooLarge("K ⊗ Fock dimension exceeds cap " + std::to_string(cap));
  LangevinGenerator g;
  g.d = d;
  g.upsilon = upsilon;
  g.nu = CpMapData(d, d, nu.kraus);
  g.grid = grid;
  g.fock = std::make_shared<const TruncatedFock>(m, n_max, cap);
  const TruncatedFock& F = *g.fock;
  const SpCMat IF = sparse_identity(F.dim()), IK = sparse_identity(d);

  g.system_part = Eigen::kroneckerProduct(sparse_of(hermitian_part(upsilon)), IF);
  CMat x = CMat::Zero(m, m);
  for (Index a = 0; a < h; ++a)
    for (Index i = 0; i < n; ++i) x(a * n + i, a * n + i) = grid.points(i);
  g.field_part = Eigen::kroneckerProduct(IK, F.dGamma(x));
  SpCMat c(d * F.dim(), d * F.dim());
  const double w = std::sqrt(grid.dx / (2.0 * M_PI));
  for (Index a = 0; a < h; ++a) {
    const SpCMat na = sparse_of(CMat(w * nu.kraus[a]));
    for (Index i = 0; i < n; ++i) c += SpCMat(Eigen::kroneckerProduct(na, F.creation(a * n + i)));
  }
  g.coupling = c + SpCMat(c.adjoint());
  g.Z = g.system_part + g.field_part + g.coupling;
  g.Z.prune(cd(0.0));
  return g;
}

namespace {

CMat vacuum_columns(const LangevinGenerator& gen) {
  const Index F = gen.fock->dim();
  CMat I = CMat::Zero(gen.dim(), gen.d);
  for (Index s = 0; s < gen.d; ++s) I(s * F, s) = 1.0;
  return I;
}

CMat vacuum_rows(const LangevinGenerator& gen, const CMat& X) {
  const Index F = gen.fock->dim();
  CMat out(gen.d, X.cols());
  for (Index s = 0; s < gen.d; ++s) out.row(s) = X.row(s * F);
  return out;
}

}  // namespace

ReductionErrors langevin_reduction_check(const LangevinGenerator& gen, double t, const CMat& A) {
  if (t < 0) throw PreconditionViolated("langevin_reduction_check: negative time");
  if (A.rows() != gen.d || A.cols() != gen.d) throw DimensionMismatch("langevin_reduction_check: A has wrong size");
  const Index F = gen.fock->dim();
  const CMat I = vacuum_columns(gen);
  const CMat fwd = evolve_hermitian(gen.Z, t, I);
  const double e1 = (vacuum_rows(gen, fwd) - expm(CMat(-I_UNIT * t * gen.upsilon))).norm();
  const CMat X = evolve_hermitian(gen.Z, -t, I);  // e^{itZ} I
  CMat AX(X.rows(), X.cols());
  for (Index s = 0; s < gen.d; ++s) {
    AX.middleRows(s * F, F).setZero();
    for (Index r = 0; r < gen.d; ++r)
      if (A(s, r) != cd(0.0)) AX.middleRows(s * F, F) += A(s, r) * X.middleRows(r * F, F);
  }
  const CMat lhs = X.adjoint() * AX;
  const Superoperator M = build_generator(from_upsilon(gen.upsilon, gen.nu));
  const double e2 = (lhs - evolve(M, t, A)).norm();
  return {e1, e2};
}

std::vector<Index> one_excitation_indices(const LangevinGenerator& gen) {
  const TruncatedFock& F = *gen.fock;
  std::vector<Index> idx;
  for (Index s = 0; s < gen.d; ++s) idx.push_back(s * F.dim());
  if (F.n_max() < 1) return idx;
  for (Index s = 0; s < gen.d; ++s)
    for (Index mu = 0; mu < F.modes(); ++mu) {
      std::vector<int> occ(F.modes(), 0);
      occ[mu] = 1;
      idx.push_back(s * F.dim() + F.index_of(occ));
    }
  return idx;
}

CMat one_excitation_block(const LangevinGenerator& gen) {
  const std::vector<Index> idx = one_excitation_indices(gen);
  const CMat Zd(gen.Z);
  CMat out(idx.size(), idx.size());
  for (size_t r = 0; r < idx.size(); ++r)
    for (size_t c = 0; c < idx.size(); ++c) out(r, c) = Zd(idx[r], idx[c]);
  return out;
}

SpCMat total_energy(const CMat& K, const CMat& Y, const LangevinGenerator& gen) {
  const Index h = gen.nu.h_dim(), n = gen.grid.n;
  if (K.rows() != gen.d || K.cols() != gen.d) throw DimensionMismatch("total_energy: K has wrong size");
  if (Y.rows() != h || Y.cols() != h) throw DimensionMismatch("total_energy: Y has wrong size");
  const SpCMat IF = sparse_identity(gen.fock->dim()), IK = sparse_identity(gen.d);
  const CMat y = kron(Y, CMat(CMat::Identity(n, n)));
  SpCMat E = Eigen::kroneckerProduct(sparse_of(K), IF);
  E += SpCMat(Eigen::kroneckerProduct(IK, gen.fock->dGamma(y)));
  return E;
}

double condi6b_residual(const CMat& K, const CMat& Y, const LangevinGenerator& gen) {
  const double cov = gen.nu.h_dim() > 0 ? covariance_residual(gen.nu, K, Y) : 0.0;
  return std::max(cov, commutator(hermitian_part(gen.upsilon), K).norm());
}

SpCMat total_energy_checked(const CMat& K, const CMat& Y, const LangevinGenerator& gen, double tol) {
  const double r = condi6b_residual(K, Y, gen);
  if (r > tol) throw PreconditionViolated("total_energy: jump-energy balance residual " + std::to_string(r));
  return total_energy(K, Y, gen);
}

double commutation_residual(const SpCMat& E, const SpCMat& Z) {
  const SpCMat C = E * Z - Z * E;
  return C.norm();
}

}  // namespace cpsemi
