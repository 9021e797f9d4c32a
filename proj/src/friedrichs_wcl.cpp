#include "cpsemi/friedrichs_wcl.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>

namespace cpsemi {

namespace {

const double TWO_PI = 2.0 * M_PI;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// PV ∫_a^b f(x)/(x-e) dx by midpoint rule; subtraction when e is inside (a, b).
double pv_midpoint(const std::function<double(double)>& f, double a, double b, double e, Index n) {
  const double h = (b - a) / static_cast<double>(n);
  const bool inside = e > a && e < b;
  const double fe = inside ? f(e) : 0.0;
  double s = 0.0;
  for (Index i = 0; i < n; ++i) {
    const double x = a + (static_cast<double>(i) + 0.5) * h;
    const double dxe = x - e;
    if (!inside) {
      s += f(x) / dxe;
    } else if (std::abs(dxe) < 1e-12 * h) {
      s += (f(e + 0.5 * h) - f(e - 0.5 * h)) / h;
    } else {
      s += (f(x) - fe) / dxe;
    }
  }
  s *= h;
  if (inside) s += fe * std::log((b - e) / (e - a));
  return s;
}

struct PvResult {
  double value;
  double change;
};

PvResult pv_refined(const std::function<double(double)>& f, double a, double b, double e) {
  Index n = 1024;
  double prev = pv_midpoint(f, a, b, e, n);
  double change = 0.0;
  while (n < (Index(1) << 18)) {
    n *= 2;
    const double cur = pv_midpoint(f, a, b, e, n);
    change = std::abs(cur - prev);
    prev = cur;
    if (change <= 1e-13 * (1.0 + std::abs(cur))) break;
  }
  if (change > 1e-4) throw GridTooCoarse("level_shift: principal value quadrature did not settle");
  return {prev, change};
}

}  // namespace

double principal_value(const std::function<double(double)>& f, double a, double b, double e, double* last_change) {
  const PvResult r = pv_refined(f, a, b, e);
  if (last_change) *last_change = r.change;
  return r.value;
}

namespace {

void check_descending(const std::vector<double>& lambdas) {
  for (size_t i = 0; i < lambdas.size(); ++i) {
    if (!(lambdas[i] > 0)) throw PreconditionViolated("λ values must be positive");
    if (i > 0 && !(lambdas[i] < lambdas[i - 1])) throw PreconditionViolated("λ list must be strictly descending");
  }
}

}  // namespace

double operator_norm(const CMat& A) {
  if (A.size() == 0) return 0.0;
  Eigen::BDCSVD<CMat> svd(A);
  return svd.singularValues()(0);
}

Profile Profile::flat(double g) {
  Profile p;
  p.kind = Kind::Flat;
  p.g = g;
  return p;
}

Profile Profile::lorentzian(double g, double gamma, double centre) {
  if (!(gamma > 0)) throw PreconditionViolated("lorentzian width must be positive");
  Profile p;
  p.kind = Kind::Lorentzian;
  p.g = g;
  p.gamma = gamma;
  p.centre = centre;
  return p;
}

Profile Profile::samples(RVec xs, RVec values) {
  if (xs.size() < 2 || xs.size() != values.size()) throw InvalidGrid("profile samples need matching x and value lists");
  for (Index i = 1; i < xs.size(); ++i)
    if (!(xs(i) > xs(i - 1))) throw InvalidGrid("profile sample abscissae must increase");
  Profile p;
  p.kind = Kind::Samples;
  p.xs = std::move(xs);
  p.values = std::move(values);
  return p;
}

Profile Profile::custom(std::function<double(double)> f) {
  Profile p;
  p.kind = Kind::Custom;
  p.fn = std::move(f);
  return p;
}

double Profile::operator()(double x) const {
  switch (kind) {
    case Kind::Flat:
      return g;
    case Kind::Lorentzian:
      return g * gamma * gamma / ((x - centre) * (x - centre) + gamma * gamma);
    case Kind::Samples: {
      if (x <= xs(0)) return values(0);
      const Index n = xs.size();
      if (x >= xs(n - 1)) return values(n - 1);
      const double* p = std::upper_bound(xs.data(), xs.data() + n, x);
      const Index i = static_cast<Index>(p - xs.data());
      const double w = (x - xs(i - 1)) / (xs(i) - xs(i - 1));
      return (1.0 - w) * values(i - 1) + w * values(i);
    }
    case Kind::Custom:
      return fn ? fn(x) : 0.0;
  }
  return 0.0;
}

Index FriedrichsModel::noise_dim() const {
  Index m = 0;
  for (const auto& iv : intervals) m += iv.B.rows();
  return m;
}

CMat FriedrichsModel::eigen_projection(double k) const {
  for (const auto& p : sys.projections)
    if (std::abs(p.value - k) <= 1e-8 * (1.0 + std::abs(k))) return p.P;
  throw PreconditionViolated("interval centre " + std::to_string(k) + " is not an eigenvalue of K");
}

void validate(const FriedrichsModel& model) {
  const Index d = model.d();
  std::vector<std::pair<double, double>> spans;
  for (const auto& iv : model.intervals) {
    if (!(iv.a < iv.k && iv.k < iv.b)) throw InvalidGrid("interval must contain its eigenvalue in the interior");
    if (iv.B.cols() != d) throw DimensionMismatch("coupling block must have d columns");
    if (iv.n < 1) throw InvalidGrid("interval needs at least one cell");
    model.eigen_projection(iv.k);
    if (iv.profile.kind == Profile::Kind::Samples &&
        (iv.profile.xs(0) > iv.a || iv.profile.xs(iv.profile.xs.size() - 1) < iv.b))
      throw InvalidGrid("profile samples must cover the interval");
    for (const auto& p : model.sys.projections)
      if (std::abs(p.value - iv.k) > 1e-8 * (1.0 + std::abs(iv.k)) && p.value >= iv.a && p.value <= iv.b)
        throw InvalidGrid("another eigenvalue of K lies in the interval of " + std::to_string(iv.k));
    spans.emplace_back(iv.a, iv.b);
  }
  std::sort(spans.begin(), spans.end());
  for (size_t i = 1; i < spans.size(); ++i)
    if (spans[i].first < spans[i - 1].second) throw InvalidGrid("coupling intervals overlap");
}

Index PhysicalGrid::cells() const {
  Index n = 0;
  for (const RVec& p : points) n += p.size();
  return n;
}

PhysicalGrid default_grid(const FriedrichsModel& model) {
  PhysicalGrid g;
  for (const auto& iv : model.intervals) {
    const double h = (iv.b - iv.a) / static_cast<double>(iv.n);
    RVec x(iv.n);
    for (Index i = 0; i < iv.n; ++i) x(i) = iv.a + (static_cast<double>(i) + 0.5) * h;
    g.points.push_back(x);
    g.dx.push_back(h);
  }
  return g;
}

PhysicalGrid aligned_grid(const FriedrichsModel& model, double dx) {
  if (!(dx > 0)) throw InvalidGrid("grid spacing must be positive");
  PhysicalGrid g;
  for (const auto& iv : model.intervals) {
    const long lo = static_cast<long>(std::ceil((iv.a - iv.k) / dx + 0.5 - 1e-9));
    const long hi = static_cast<long>(std::floor((iv.b - iv.k) / dx - 0.5 + 1e-9));
    if (hi < lo) throw InvalidGrid("grid spacing exceeds the interval");
    RVec x(hi - lo + 1);
    for (long m = lo; m <= hi; ++m) x(m - lo) = iv.k + static_cast<double>(m) * dx;
    g.points.push_back(x);
    g.dx.push_back(dx);
  }
  return g;
}

LevelShift level_shift(const FriedrichsModel& model) {
  validate(model);
  const Index d = model.d();
  LevelShift out{CMat::Zero(d, d), CMat::Zero(model.noise_dim(), d), 0.0};
  for (const auto& proj : model.sys.projections) {
    const double e = proj.value;
    CMat block = CMat::Zero(d, d);
    for (const auto& iv : model.intervals) {
      const CMat BB = iv.B.adjoint() * iv.B;
      if (BB.norm() == 0.0) continue;
      const Profile& p = iv.profile;
      const PvResult pv = pv_refined([&p](double x) { double v = p(x); return v * v; }, iv.a, iv.b, e);
      out.quadrature_change = std::max(out.quadrature_change, pv.change);
      block -= pv.value * BB;
      if (e > iv.a && e < iv.b) block -= I_UNIT * M_PI * p(e) * p(e) * BB;
    }
    out.upsilon += proj.P * block * proj.P;
  }
  Index row = 0;
  for (const auto& iv : model.intervals) {
    const CMat P = model.eigen_projection(iv.k);
    out.nu.middleRows(row, iv.B.rows()) = std::sqrt(TWO_PI) * iv.profile(iv.k) * iv.B * P;
    row += iv.B.rows();
  }
  return out;
}

SpCMat build_friedrichs(const FriedrichsModel& model, const PhysicalGrid& grid, double lambda) {
  const Index d = model.d();
  if (grid.points.size() != model.intervals.size()) throw DimensionMismatch("grid does not match the intervals");
  Index N = d;
  for (size_t I = 0; I < model.intervals.size(); ++I) N += model.intervals[I].B.rows() * grid.points[I].size();
  std::vector<Eigen::Triplet<cd>> trip;
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j)
      if (model.sys.K(i, j) != cd(0.0)) trip.emplace_back(i, j, model.sys.K(i, j));
  Index off = d;
  for (size_t I = 0; I < model.intervals.size(); ++I) {
    const auto& iv = model.intervals[I];
    const RVec& x = grid.points[I];
    const double w = std::sqrt(grid.dx[I]);
    for (Index a = 0; a < iv.B.rows(); ++a)
      for (Index i = 0; i < x.size(); ++i) {
        const Index r = off + a * x.size() + i;
        trip.emplace_back(r, r, cd(x(i)));
        const double c = lambda * w * iv.profile(x(i));
        if (c == 0.0) continue;
        for (Index col = 0; col < d; ++col) {
          const cd v = c * iv.B(a, col);
          if (v == cd(0.0)) continue;
          trip.emplace_back(r, col, v);
          trip.emplace_back(col, r, std::conj(v));
        }
      }
    off += iv.B.rows() * x.size();
  }
  SpCMat H(N, N);
  H.setFromTriplets(trip.begin(), trip.end());
  return H;
}

CMat build_friedrichs(const FriedrichsModel& model) {
  validate(model);
  return CMat(build_friedrichs(model, default_grid(model), model.lambda));
}

std::vector<WclRow> reduced_wcl_experiment(const FriedrichsModel& model, double t, const std::vector<double>& lambdas) {
  if (!(t > 0)) throw PreconditionViolated("reduced_wcl_experiment: t must be positive");
  check_descending(lambdas);
  const LevelShift ls = level_shift(model);
  const Index d = model.d();
  const CMat target = expm(CMat(-I_UNIT * t * ls.upsilon));
  std::vector<WclRow> rows;
  for (double lam : lambdas) {
    const auto start = std::chrono::steady_clock::now();
    const double l2 = lam * lam;
    const PhysicalGrid grid = aligned_grid(model, l2 * l2);
    const SpCMat H = build_friedrichs(model, grid, lam);
    const CMat V = evolve_hermitian(H, t / l2, CMat(CMat::Identity(H.rows(), d)));
    const CMat R = expm_hermitian(model.sys.K, -t / l2) * V.topRows(d);
    rows.push_back({lam, grid.cells(), operator_norm(R - target), seconds_since(start)});
  }
  return rows;
}

Index AsymptoticGrid::n() const { return 2 * static_cast<Index>(std::floor(r_u / du + 1e-9)) + 1; }

RVec AsymptoticGrid::points() const {
  const Index m = n(), c = (m - 1) / 2;
  RVec u(m);
  for (Index j = 0; j < m; ++j) u(j) = static_cast<double>(j - c) * du;
  return u;
}

PhysicalGrid wcl_physical_grid(const FriedrichsModel& model, const AsymptoticGrid& grid, double lambda) {
  const double l2 = lambda * lambda, dx = l2 * grid.du;
  const double reach = l2 * static_cast<double>((grid.n() - 1) / 2) * grid.du + 0.5 * dx;
  for (const auto& iv : model.intervals)
    if (iv.k - reach < iv.a - 1e-12 || iv.k + reach > iv.b + 1e-12)
      throw WindowOverflow("asymptotic window does not fit in the interval at λ = " + std::to_string(lambda));
  return aligned_grid(model, dx);
}

SpCMat build_J_lambda(const FriedrichsModel& model, const AsymptoticGrid& grid, double lambda) {
  const PhysicalGrid phys = wcl_physical_grid(model, grid, lambda);
  const Index d = model.d(), nu = grid.n(), cu = (nu - 1) / 2;
  const double dx = lambda * lambda * grid.du;
  Index rows = d, cols = d;
  for (size_t I = 0; I < model.intervals.size(); ++I) {
    rows += model.intervals[I].B.rows() * phys.points[I].size();
    cols += model.intervals[I].B.rows() * nu;
  }
  std::vector<Eigen::Triplet<cd>> trip;
  for (Index i = 0; i < d; ++i) trip.emplace_back(i, i, cd(1.0));
  Index roff = d, coff = d;
  for (size_t I = 0; I < model.intervals.size(); ++I) {
    const auto& iv = model.intervals[I];
    const RVec& x = phys.points[I];
    const Index m0 = static_cast<Index>(std::llround((x(0) - iv.k) / dx));
    for (Index a = 0; a < iv.B.rows(); ++a)
      for (Index j = 0; j < nu; ++j) {
        const Index i = (j - cu) - m0;
        trip.emplace_back(roff + a * x.size() + i, coff + a * nu + j, cd(1.0));
      }
    roff += iv.B.rows() * x.size();
    coff += iv.B.rows() * nu;
  }
  SpCMat J(rows, cols);
  J.setFromTriplets(trip.begin(), trip.end());
  return J;
}

double partial_isometry_residual(const SpCMat& J) {
  const CMat JJ = CMat(J.adjoint() * J);
  const double iso = (JJ - CMat::Identity(J.cols(), J.cols())).norm();
  const SpCMat P = J * SpCMat(J.adjoint());
  const double proj = CMat(P * P - P).norm();
  return std::max(iso, proj);
}

std::vector<WclRow> extended_wcl_experiment(const FriedrichsModel& model, double t, double t0,
                                            const std::vector<double>& lambdas, const ExtendedWclOptions& opt) {
  check_descending(lambdas);
  if (t < 0 || t0 < 0) throw PreconditionViolated("extended_wcl_experiment: times must be non-negative");
  const LevelShift ls = level_shift(model);
  const Index d = model.d(), h = model.noise_dim();
  AsymptoticGrid ag;
  ag.r_u = opt.r_u;
  ag.du = opt.du > 0 ? opt.du : std::min(0.05, lambdas.back() * lambdas.back());
  const Index nu = ag.n(), cu = (nu - 1) / 2;
  const RVec u = ag.points();
  const Index W = d + h * nu;

  // reference generator on a wide centred grid with the same spacing
  const Index cref = static_cast<Index>(std::llround(opt.reference_r / ag.du));
  if (cref < cu) throw WindowOverflow("reference grid is narrower than the window");
  const ReservoirGrid rg = ReservoirGrid::centred(ag.du, 2 * cref + 1);
  const ToyDilation ref = build_Zr(ls.upsilon, ls.nu, rg);
  std::vector<Index> widx(W);
  for (Index i = 0; i < d; ++i) widx[i] = i;
  for (Index a = 0; a < h; ++a)
    for (Index j = 0; j < nu; ++j) widx[d + a * nu + j] = d + a * rg.n + (cref - cu) + j;
  CMat start = CMat::Zero(ref.dim(), W);
  for (Index c = 0; c < W; ++c) {
    const double e = c < d ? 0.0 : u((c - d) % nu);
    start(widx[c], c) = std::exp(-I_UNIT * t0 * e);
  }
  const CMat evolved = evolve_hermitian(ref.Z_sparse(), t - t0, start);
  CMat rhs(W, W);
  for (Index r = 0; r < W; ++r) {
    const double e = r < d ? 0.0 : u((r - d) % nu);
    rhs.row(r) = std::exp(I_UNIT * t * e) * evolved.row(widx[r]);
  }

  std::vector<WclRow> rows;
  for (double lam : lambdas) {
    const auto tick = std::chrono::steady_clock::now();
    const double l2 = lam * lam;
    const PhysicalGrid phys = wcl_physical_grid(model, ag, lam);
    const SpCMat J = build_J_lambda(model, ag, lam);
    const SpCMat H = build_friedrichs(model, phys, lam);
    RVec energy(H.rows());
    Index off = d;
    for (size_t I = 0; I < model.intervals.size(); ++I)
      for (Index a = 0; a < model.intervals[I].B.rows(); ++a)
        for (Index i = 0; i < phys.points[I].size(); ++i) energy(off++) = phys.points[I](i);
    CMat V = CMat(J);
    V.topRows(d) = expm_hermitian(model.sys.K, t0 / l2) * V.topRows(d);
    for (Index r = d; r < V.rows(); ++r) V.row(r) *= std::exp(-I_UNIT * t0 * energy(r) / l2);
    CMat X = evolve_hermitian(H, (t - t0) / l2, V);
    X.topRows(d) = expm_hermitian(model.sys.K, -t / l2) * X.topRows(d);
    for (Index r = d; r < X.rows(); ++r) X.row(r) *= std::exp(I_UNIT * t * energy(r) / l2);
    const CMat lhs = CMat(J.adjoint() * X);
    rows.push_back({lam, phys.cells(), operator_norm(lhs - rhs), seconds_since(tick)});
  }
  return rows;
}

}  // namespace cpsemi
