#include "cpsemi/pauli_fierz.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <chrono>
#include <cmath>

#include "cpsemi/langevin_fock.hpp"

namespace cpsemi {

namespace {

const double TWO_PI = 2.0 * M_PI;

bool close(double x, double y) { return std::abs(x - y) <= 1e-8 * (1.0 + std::abs(x) + std::abs(y)); }

struct Oriented {
  std::vector<CMat> blocks;
  std::vector<double> omegas;
};

Oriented orient(const SpectralCouplingModel& model, bool natural) {
  Oriented o;
  const auto& pr = model.sys.projections;
  for (const auto& w : model.windows) {
    const double s = std::sqrt(TWO_PI) * w.profile(w.omega);
    for (const CMat& C : w.ops) {
      CMat nu = CMat::Zero(model.d(), model.d());
      for (const auto& pk : pr)
        for (const auto& pl : pr)
          if (close(pk.value - pl.value, w.omega)) nu += natural ? CMat(pl.P * C * pk.P) : CMat(pk.P * C * pl.P);
      o.blocks.push_back(s * nu);
      o.omegas.push_back(w.omega);
    }
  }
  return o;
}

CMat diag_of(const std::vector<double>& v) {
  CMat Y = CMat::Zero(v.size(), v.size());
  for (size_t i = 0; i < v.size(); ++i) Y(i, i) = v[i];
  return Y;
}

CMat gibbs_matrix(const CMat& K, double beta) {
  CMat r = herm_function(K, [beta](double x) { return cd(std::exp(-beta * x), 0.0); });
  return r / r.trace().real();
}

}  // namespace

std::vector<double> bohr_frequencies(const SmallSystem& sys) {
  std::vector<double> out;
  for (const auto& a : sys.projections)
    for (const auto& b : sys.projections) out.push_back(a.value - b.value);
  std::sort(out.begin(), out.end());
  std::vector<double> dedup;
  for (double w : out)
    if (dedup.empty() || !close(dedup.back(), w)) dedup.push_back(w);
  return dedup;
}

void validate(const SpectralCouplingModel& model) {
  const std::vector<double> bohr = bohr_frequencies(model.sys);
  std::vector<std::pair<double, double>> spans;
  for (const auto& w : model.windows) {
    if (!(w.a < w.omega && w.omega < w.b)) throw InvalidGrid("window must contain its Bohr frequency in the interior");
    if (w.n < 1) throw InvalidGrid("window needs at least one cell");
    if (std::none_of(bohr.begin(), bohr.end(), [&](double x) { return close(x, w.omega); }))
      throw PreconditionViolated("window centre " + std::to_string(w.omega) + " is not a Bohr frequency");
    for (double x : bohr)
      if (!close(x, w.omega) && x >= w.a && x <= w.b)
        throw InvalidGrid("another Bohr frequency lies in the window of " + std::to_string(w.omega));
    for (const CMat& C : w.ops)
      if (C.rows() != model.d() || C.cols() != model.d()) throw DimensionMismatch("coupling operator must be d x d");
    spans.emplace_back(w.a, w.b);
  }
  std::sort(spans.begin(), spans.end());
  for (size_t i = 1; i < spans.size(); ++i)
    if (spans[i].first < spans[i - 1].second) throw InvalidGrid("Bohr windows overlap");
}

DaviesData davies_generator(const SpectralCouplingModel& model) {
  validate(model);
  const Index d = model.d();
  const CMat& K = model.sys.K;
  CMat ups = CMat::Zero(d, d);
  for (const auto& w : model.windows) {
    const Profile& p = w.profile;
    const auto p2 = [&p](double x) { const double v = p(x); return v * v; };
    for (const CMat& C : w.ops)
      for (const auto& pk : model.sys.projections)
        for (const auto& pl : model.sys.projections) {
          const CMat block = pk.P * C.adjoint() * pl.P * C * pk.P;
          if (block.norm() == 0.0) continue;
          const double e = pk.value - pl.value;
          ups -= principal_value(p2, w.a, w.b, e) * block;
          if (e > w.a && e < w.b) ups -= I_UNIT * M_PI * p2(e) * block;
        }
  }
  const CMat gap = (ups - ups.adjoint()) / I_UNIT;
  const double scale = 1.0 + ups.norm();

  DaviesData out{ups, CpMapData(d, d, {}), {}, CMat(), Superoperator::zero(d), "", 0.0, 0.0, 0.0, 0.0};
  bool found = false;
  for (bool natural : {true, false}) {
    Oriented o = orient(model, natural);
    CMat nn = CMat::Zero(d, d);
    for (const CMat& b : o.blocks) nn += b.adjoint() * b;
    const double ident = (gap + nn).norm();
    std::vector<CMat> kept;
    std::vector<double> om;
    for (size_t j = 0; j < o.blocks.size(); ++j)
      if (o.blocks[j].norm() > 1e-14 * scale) {
        kept.push_back(o.blocks[j]);
        om.push_back(o.omegas[j]);
      }
    const CpMapData nu(d, d, kept);
    const CMat Y = diag_of(om);
    const double cov = kept.empty() ? 0.0 : covariance_residual(nu, K, Y);
    if (ident <= 1e-6 * scale && cov <= 1e-6 * (1.0 + K.norm())) {
      out.nu = nu;
      out.omegas = om;
      out.Y = Y;
      out.orientation = natural ? "k'<-k" : "k<-k'";
      out.upsilon_identity = ident;
      out.condi6 = cov;
      found = true;
      break;
    }
  }
  if (!found) throw OrientationUnresolvable("davies_generator: neither index orientation satisfies the balance checks");
  out.commutes_with_K = commutator(ups, K).norm();
  out.M = build_generator(from_upsilon(ups, out.nu));
  out.markov = out.M(CMat::Identity(d, d)).norm();
  return out;
}

std::vector<BohrWindow> make_thermal_coupling(const Profile& g, const CMat& G, double omega, double a, double b,
                                              double beta, Index n) {
  if (!(beta > 0)) throw BetaNonPositive("make_thermal_coupling: β must be positive");
  if (!(a > 0) || !(b > a)) throw PreconditionViolated("make_thermal_coupling: window must lie in x > 0");
  const auto occ = [beta](double x) { return std::isinf(beta) ? 0.0 : 1.0 / std::expm1(beta * x); };
  BohrWindow up;
  up.omega = omega;
  up.a = a;
  up.b = b;
  up.n = n;
  up.ops = {G};
  up.profile = Profile::custom([g, occ](double x) { return std::sqrt(1.0 + occ(x)) * g(x); });
  std::vector<BohrWindow> out{up};
  if (std::isinf(beta)) return out;
  BohrWindow down;
  down.omega = -omega;
  down.a = -b;
  down.b = -a;
  down.n = n;
  down.ops = {CMat(G.adjoint())};
  down.profile = Profile::custom([g, occ](double x) { return std::sqrt(occ(-x)) * g(-x); });
  out.push_back(down);
  return out;
}

Index ReservoirCells::mirror(Index c) const {
  for (Index j = 0; j < size(); ++j)
    if (std::abs(x(j) + x(c)) <= 1e-9 * (1.0 + std::abs(x(c)))) return j;
  return -1;
}

ReservoirCells reservoir_cells(const SpectralCouplingModel& model) {
  ReservoirCells rc;
  Index total = 0;
  for (const auto& w : model.windows) total += w.n;
  rc.x.resize(total);
  rc.dx.resize(total);
  Index c = 0;
  for (size_t W = 0; W < model.windows.size(); ++W) {
    const auto& w = model.windows[W];
    const double h = (w.b - w.a) / static_cast<double>(w.n);
    for (Index i = 0; i < w.n; ++i, ++c) {
      rc.x(c) = w.a + (static_cast<double>(i) + 0.5) * h;
      rc.dx(c) = h;
      std::vector<CMat> v;
      for (const CMat& C : w.ops) v.push_back(w.profile(rc.x(c)) * C);
      rc.v.push_back(v);
      rc.window.push_back(static_cast<Index>(W));
    }
  }
  return rc;
}

double thermal_condition_residual(const SpectralCouplingModel& model, double beta) {
  const ReservoirCells rc = reservoir_cells(model);
  const Index d = model.d();
  double worst = 0.0;
  for (Index c = 0; c < rc.size(); ++c) {
    const Index m = rc.mirror(c);
    for (Index i = 0; i < d; ++i)
      for (Index j = 0; j < d; ++j) {
        const CMat A = basis_matrix(d, i, j);
        CMat lhs = CMat::Zero(d, d), rhs = CMat::Zero(d, d);
        if (m >= 0)
          for (const CMat& v : rc.v[m]) lhs += v * A * v.adjoint();
        for (const CMat& v : rc.v[c]) rhs += v.adjoint() * A * v;
        worst = std::max(worst, (lhs - std::exp(-beta * rc.x(c)) * rhs).norm());
      }
  }
  return worst;
}

ReservoirConjugation reservoir_conjugation(const SpectralCouplingModel& model, double beta) {
  const double th = thermal_condition_residual(model, beta);
  if (th > 1e-8) throw NotThermal("reservoir_conjugation: thermal residual " + std::to_string(th));
  const ReservoirCells rc = reservoir_cells(model);
  std::vector<Index> active, offset(rc.size(), -1);
  Index dim = 0;
  for (Index c = 0; c < rc.size(); ++c) {
    double s = 0.0;
    for (const CMat& v : rc.v[c]) s += v.norm();
    if (s == 0.0) continue;
    active.push_back(c);
    offset[c] = dim;
    dim += static_cast<Index>(rc.v[c].size());
  }
  ReservoirConjugation out{AntiunitaryMap{CMat::Zero(dim, dim), 1.0}, RVec(dim), 0.0, 0.0, 0.0};
  for (Index c : active) {
    const Index m = rc.mirror(c);
    if (m < 0 || offset[m] < 0) throw NotThermal("reservoir_conjugation: coupled cell without a coupled mirror");
    std::vector<CMat> a;
    for (const CMat& v : rc.v[m]) a.push_back(std::exp(0.5 * beta * rc.x(c)) * CMat(v.adjoint()));
    const CpMapData A(a), B(rc.v[c]);
    const CMat U = dilation_equivalence(A, B);
    out.eps.U.block(offset[c], offset[m], U.rows(), U.cols()) = U;
    for (Index r = 0; r < U.rows(); ++r) {
      CMat s = -rc.v[c][r];
      for (Index k = 0; k < U.cols(); ++k) s += U(r, k) * a[k];
      out.intertwining = std::max(out.intertwining, s.norm());
      out.energies(offset[c] + r) = rc.x(c);
    }
  }
  const CMat& U = out.eps.U;
  const CMat X = out.energies.cast<cd>().asDiagonal();
  out.involution = (U * U.conjugate() - CMat::Identity(dim, dim)).norm();
  out.flip = (U * X * U.conjugate() + X).norm();
  return out;
}

KmsCheck kms_twopoint_check(const SpectralCouplingModel& model, double beta, double t, const CMat& D1,
                            const CMat& D1p, const CMat& D2, const CMat& D2p) {
  const ReservoirCells rc = reservoir_cells(model);
  const CMat& K = model.sys.K;
  const CMat rho = gibbs_matrix(K, beta);
  const CMat fwd = expm_hermitian(K, -t);  // e^{itK}
  const CMat bwd = expm_hermitian(K, t);   // e^{-itK}
  const Index d = model.d();
  // V^*(X ⊗ f(H_R))V = Σ_c Δx f(x_c) Σ_a v^* X v
  const auto sandwich_sum = [&](const CMat& X, auto f) {
    CMat s = CMat::Zero(d, d);
    for (Index c = 0; c < rc.size(); ++c) {
      const cd w = rc.dx(c) * f(rc.x(c));
      for (const CMat& v : rc.v[c]) s += w * v.adjoint() * X * v;
    }
    return s;
  };
  const CMat inner_l = sandwich_sum(CMat(D1p * bwd * D2), [t](double x) { return std::exp(-I_UNIT * t * x); });
  const cd lhs = (rho * fwd * D1 * inner_l * D2p).trace();
  const CMat inner_r = sandwich_sum(CMat(D2p * rho * fwd * D1),
                                    [t, beta](double x) { return std::exp((-beta + I_UNIT * t) * x); });
  const cd rhs = (D2 * inner_r * D1p * bwd).trace();
  const double den = std::max(std::abs(lhs), std::abs(rhs));
  return {lhs, rhs, den == 0.0 ? 0.0 : std::abs(lhs - rhs) / den};
}

KmsCheck kms_twopoint_check(const SpectralCouplingModel& model, double beta, double t) {
  const CMat I = CMat::Identity(model.d(), model.d());
  return kms_twopoint_check(model, beta, t, I, I, I, I);
}

std::vector<PfRow> reduced_wcl_pf_experiment(const SpectralCouplingModel& model, const std::vector<double>& lambdas,
                                             double t, const CMat& A, int n_max, Index cap) {
  if (n_max < 1) throw PreconditionViolated("reduced_wcl_pf_experiment: N_max must be at least 1");
  if (!(t > 0)) throw PreconditionViolated("reduced_wcl_pf_experiment: t must be positive");
  const Index d = model.d();
  if (A.rows() != d || A.cols() != d) throw DimensionMismatch("reduced_wcl_pf_experiment: A has wrong size");
  const DaviesData dav = davies_generator(model);
  const CMat target = evolve(dav.M, t, A);
  const ReservoirCells rc = reservoir_cells(model);

  std::vector<double> energy;
  std::vector<CMat> coupling;
  for (Index c = 0; c < rc.size(); ++c)
    for (const CMat& v : rc.v[c]) {
      energy.push_back(rc.x(c));
      coupling.push_back(std::sqrt(rc.dx(c)) * v);
    }
  const Index m = static_cast<Index>(energy.size());
  if (d * TruncatedFock::dimension(m, n_max) > cap) throw FockTooLarge("K ⊗ Fock dimension exceeds cap");
  const TruncatedFock F(m, n_max, cap);
  SpCMat IF(F.dim(), F.dim()), IK(d, d);
  IF.setIdentity();
  IK.setIdentity();
  CMat x = CMat::Zero(m, m);
  for (Index i = 0; i < m; ++i) x(i, i) = energy[i];
  const SpCMat H0 = SpCMat(Eigen::kroneckerProduct(SpCMat(model.sys.K.sparseView()), IF)) +
                    SpCMat(Eigen::kroneckerProduct(IK, F.dGamma(x)));
  SpCMat Vc(d * F.dim(), d * F.dim());
  for (Index i = 0; i < m; ++i) Vc += SpCMat(Eigen::kroneckerProduct(SpCMat(coupling[i].sparseView()), F.creation(i)));
  const SpCMat Vint = Vc + SpCMat(Vc.adjoint());

  std::vector<PfRow> rows;
  for (size_t li = 0; li < lambdas.size(); ++li) {
    const double lam = lambdas[li];
    if (!(lam > 0) || (li > 0 && !(lam < lambdas[li - 1])))
      throw PreconditionViolated("λ list must be positive and strictly descending");
    const auto tick = std::chrono::steady_clock::now();
    const double l2 = lam * lam;
    const SpCMat H = H0 + lam * Vint;
    CMat I = CMat::Zero(H.rows(), d);
    for (Index s = 0; s < d; ++s) I(s * F.dim(), s) = 1.0;
    CMat X = evolve_hermitian(H, -t / l2, I) * expm_hermitian(model.sys.K, t / l2);
    CMat AX = CMat::Zero(X.rows(), X.cols());
    for (Index s = 0; s < d; ++s)
      for (Index r = 0; r < d; ++r)
        if (A(s, r) != cd(0.0)) AX.middleRows(s * F.dim(), F.dim()) += A(s, r) * X.middleRows(r * F.dim(), F.dim());
    const CMat lhs = X.adjoint() * AX;
    rows.push_back({lam, H.rows(), operator_norm(lhs - target),
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - tick).count()});
  }
  return rows;
}

}  // namespace cpsemi
