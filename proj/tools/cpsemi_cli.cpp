#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cpsemi/classical.hpp"
#include "cpsemi/cpmap.hpp"
#include "cpsemi/dilation_toy.hpp"
#include "cpsemi/friedrichs_wcl.hpp"
#include "cpsemi/invariance_dbc.hpp"
#include "cpsemi/io.hpp"
#include "cpsemi/langevin_fock.hpp"
#include "cpsemi/lindblad.hpp"
#include "cpsemi/pauli_fierz.hpp"

using namespace cpsemi;
using nlohmann::json;

namespace {

constexpr int EXIT_PASS = 0;
constexpr int EXIT_FAIL = 1;
constexpr int EXIT_INPUT = 2;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double round6(double x) {
  if (!std::isfinite(x)) return x;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return std::stod(buf);
}

std::string fmt(double x, const char* f = "%.6g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

struct Options {
  std::string model;
  std::string out = ".";
  std::uint64_t seed = 12345;
  std::vector<std::string> tols;
  std::vector<double> lambdas;
  std::vector<std::string> grids;
  int nmax = -1;
};

class Tolerances {
 public:
  Tolerances() {
    values_ = {{"hermitian", 1e-10}, {"markov", 1e-10}, {"cp", 1e-8},         {"roundtrip", 1e-9},
               {"trace", 1e-10},     {"dbc", 1e-8},     {"level_shift", 1e-6}, {"condi6", 1e-8},
               {"condi2", 1e-8},     {"thermal", 1e-10}, {"kms", 1e-8},       {"epsilon", 1e-8},
               {"isometry", 1e-10},  {"block", 1e-12},  {"energy", 1e-10},    {"stationary", 1e-8},
               {"kadison", 1e-10},   {"haar_sigma", 3.0}};
  }
  void apply(const std::vector<std::string>& items) {
    for (const std::string& s : items) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw InputError("--tol expects NAME=VALUE, got '" + s + "'");
      const std::string name = s.substr(0, eq);
      if (!values_.count(name)) throw InputError("unknown tolerance '" + name + "'");
      try {
        values_[name] = std::stod(s.substr(eq + 1));
      } catch (const std::exception&) {
        throw InputError("bad tolerance value in '" + s + "'");
      }
    }
  }
  double operator[](const std::string& name) const { return values_.at(name); }

 private:
  std::map<std::string, double> values_;
};

struct Check {
  std::string name;
  bool pass;
  double residual;
  double tolerance;
};

struct Table {
  std::string name;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct Report {
  std::string command;
  std::string kind;
  std::uint64_t seed = 0;
  std::vector<Check> checks;
  std::vector<Table> tables;
  json extra = json::object();
  std::string error_code;
  std::string error_message;

  void check(const std::string& name, double residual, double tol) { checks.push_back({name, residual <= tol, residual, tol}); }
  void flag(const std::string& name, bool pass, double residual, double tol) { checks.push_back({name, pass, residual, tol}); }
  bool passed() const {
    if (!error_code.empty()) return false;
    for (const Check& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

void write_outputs(const Report& r, const Options& opt) {
  namespace fs = std::filesystem;
  fs::create_directories(opt.out);
  json j;
  j["command"] = r.command;
  j["model"] = fs::path(opt.model).filename().string();
  j["kind"] = r.kind;
  j["seed"] = r.seed;
  json checks = json::array();
  for (const Check& c : r.checks)
    checks.push_back({{"name", c.name}, {"status", c.pass ? "pass" : "fail"}, {"residual", round6(c.residual)},
                      {"tolerance", round6(c.tolerance)}});
  j["checks"] = checks;
  json tables = json::array();
  for (const Table& t : r.tables) tables.push_back(t.name + ".csv");
  j["tables"] = tables;
  if (!r.extra.empty()) j["details"] = r.extra;
  if (!r.error_code.empty()) j["error"] = {{"code", r.error_code}, {"message", r.error_message}};
  j["status"] = r.passed() ? "pass" : "fail";
  std::ofstream(fs::path(opt.out) / "report.json") << j.dump(2) << "\n";
  for (const Table& t : r.tables) {
    std::ofstream f(fs::path(opt.out) / (t.name + ".csv"));
    for (size_t i = 0; i < t.header.size(); ++i) f << (i ? "," : "") << t.header[i];
    f << "\n";
    for (const auto& row : t.rows) {
      for (size_t i = 0; i < row.size(); ++i) f << (i ? "," : "") << row[i];
      f << "\n";
    }
  }
}

void print_summary(const Report& r) {
  for (const Check& c : r.checks)
    std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << " residual=" << fmt(c.residual) << " tol=" << fmt(c.tolerance)
              << "\n";
  for (const Table& t : r.tables) {
    std::cout << "[" << t.name << "]\n";
    for (size_t i = 0; i < t.header.size(); ++i) std::cout << (i ? "," : "") << t.header[i];
    std::cout << "\n";
    for (const auto& row : t.rows) {
      for (size_t i = 0; i < row.size(); ++i) std::cout << (i ? "," : "") << row[i];
      std::cout << "\n";
    }
  }
  if (!r.error_code.empty()) std::cout << "ERROR " << r.error_code << ": " << r.error_message << "\n";
  std::cout << (r.passed() ? "status: pass" : "status: fail") << "\n";
}

// largest increase along the sequence; <= 0 iff strictly decreasing when also no ties
double worst_increase(const std::vector<double>& v) {
  double w = -INFINITY;
  for (size_t i = 1; i < v.size(); ++i) w = std::max(w, v[i] - v[i - 1]);
  return v.size() < 2 ? 0.0 : w;
}

void monotone_check(Report& r, const std::string& name, const std::vector<double>& v) {
  const double w = worst_increase(v);
  r.flag(name, v.size() < 2 || w < 0.0, w, 0.0);
}

io::GridList grids_from(const Options& opt, const io::GridList& fallback) {
  if (opt.grids.empty()) return fallback;
  io::GridList out;
  for (const std::string& g : opt.grids) {
    const auto comma = g.find(',');
    if (comma == std::string::npos) throw InputError("--grid expects r,n");
    try {
      out.emplace_back(std::stod(g.substr(0, comma)), static_cast<Index>(std::stol(g.substr(comma + 1))));
    } catch (const std::exception&) {
      throw InputError("bad --grid value '" + g + "'");
    }
  }
  return out;
}

std::vector<double> lambdas_from(const Options& opt, const std::vector<double>& model, const std::vector<double>& fallback) {
  if (!opt.lambdas.empty()) return opt.lambdas;
  return model.empty() ? fallback : model;
}

double dbc_residual(const DbcResiduals& r) { return std::max(r.dissipative, r.hamiltonian); }

// ---------------------------------------------------------------------------

void run_validate(const io::ModelFile& mf, const Tolerances& tol, Report& r) {
  if (mf.kind == "lindblad") {
    const auto s = io::parse_lindblad(mf.payload);
    const double scale = 1.0 + s.data.theta.norm() + s.data.delta.norm();
    r.check("hermitian", std::max(hermiticity_defect(s.data.theta), hermiticity_defect(s.data.delta)) / scale,
            tol["hermitian"]);
    if (s.markov.value_or(false)) r.check("markov 2Δ=ν*ν", markov_defect(s.data), tol["markov"] * (1.0 + s.data.delta.norm()));
  } else if (mf.kind == "classical") {
    const auto s = io::parse_classical(mf.payload);
    const RMat& m = s.m;
    double neg = 0.0;
    for (Index i = 0; i < m.rows(); ++i)
      for (Index j = 0; j < m.cols(); ++j)
        if (i != j) neg = std::max(neg, -m(i, j));
    const double rows = m.rows() ? m.rowwise().sum().cwiseAbs().maxCoeff() : 0.0;
    r.flag("classical_generator", is_classical_generator(m), std::max(neg, rows), tol["markov"]);
    if (s.p) {
      RMat pm = s.p->asDiagonal() * m;
      r.flag("classical_dbc", classical_dbc_check(m, *s.p), (pm - pm.transpose()).cwiseAbs().maxCoeff(), 1e-10);
    }
  } else if (mf.kind == "friedrichs") {
    const auto s = io::parse_friedrichs(mf.payload);
    const LevelShift ls = level_shift(s.model);
    const CMat gap = (ls.upsilon - ls.upsilon.adjoint()) / I_UNIT + ls.nu.adjoint() * ls.nu;
    r.check("upsilon_identity", gap.norm(), tol["level_shift"]);
    r.check("upsilon_commutes_with_K", commutator(ls.upsilon, s.model.sys.K).norm(), tol["hermitian"]);
  } else if (mf.kind == "pauli_fierz") {
    const auto s = io::parse_pauli_fierz(mf.payload);
    const DaviesData dv = davies_generator(s.model);
    r.check("upsilon_identity", dv.upsilon_identity, tol["level_shift"]);
    r.check("condi6", dv.condi6, tol["condi6"]);
    r.check("markov", dv.markov, tol["markov"]);
    r.check("upsilon_commutes_with_K", dv.commutes_with_K, tol["hermitian"]);
  } else if (mf.kind == "toy_dilation") {
    const auto s = io::parse_toy(mf.payload);
    const CMat P = hermitian_part(I_UNIT * (s.upsilon - s.upsilon.adjoint()));
    r.check("dissipative", std::max(0.0, -min_eigenvalue(P)), 1e-12 * std::max(1.0, P.norm()));
    if (s.nu) r.check("noise_factor", (s.nu->adjoint() * *s.nu - P).norm(), tol["level_shift"]);
  } else if (mf.kind == "langevin") {
    const auto s = io::parse_langevin(mf.payload);
    CMat P = I_UNIT * (s.upsilon - s.upsilon.adjoint());
    for (const CMat& v : s.nu.kraus) P -= v.adjoint() * v;
    r.check("noise_balance", P.norm(), tol["markov"]);
  }
}

void need_kind(const io::ModelFile& mf, std::initializer_list<const char*> kinds, const std::string& cmd) {
  for (const char* k : kinds)
    if (mf.kind == k) return;
  throw InputError(cmd + " does not accept models of kind '" + mf.kind + "'");
}

void run_canonical(const io::ModelFile& mf, const Tolerances& tol, const Options& opt, Report& r) {
  need_kind(mf, {"lindblad"}, "canonical");
  const auto s = io::parse_lindblad(mf.payload);
  const Superoperator M = build_generator(s.data);
  const LindbladData c = canonical_form(M);
  r.check("roundtrip", (build_generator(c).mat - M.mat).norm(), tol["roundtrip"] * (1.0 + M.mat.norm()));
  r.check("trace_theta", std::abs(c.theta.trace()), tol["trace"]);
  double tn = 0.0;
  for (const CMat& v : c.nu.kraus) tn = std::max(tn, std::abs(v.trace()));
  r.check("trace_nu", tn, tol["trace"]);
  std::mt19937_64 rng(opt.seed);
  const HaarEstimate est = haar_average_monte_carlo(M, rng, 10000);
  r.check("haar_average", (est.mean - haar_average_check(M)).norm(), tol["haar_sigma"] * est.std_error);
  r.extra["canonical"] = io::lindblad_to_json(c);
  r.extra["blocks"] = c.nu.h_dim();
}

void run_stinespring(const io::ModelFile& mf, const Tolerances& tol, const Options& opt, Report& r) {
  need_kind(mf, {"lindblad"}, "stinespring");
  const auto s = io::parse_lindblad(mf.payload);
  const Superoperator X = superop(s.data.nu);
  const CpMapData minimal = stinespring_minimal(X);
  r.check("roundtrip", (superop(minimal).mat - X.mat).norm(), tol["roundtrip"] * (1.0 + X.mat.norm()));
  if (s.data.nu.h_dim() > 0 && is_minimal(s.data.nu)) {
    const CMat U = dilation_equivalence(minimal, s.data.nu);
    r.check("equivalence_unitary", unitarity_defect(U), tol["cp"]);
  }
  std::mt19937_64 rng(opt.seed);
  const CMat unit = X(CMat::Identity(X.d_in, X.d_in));
  if (minimal.h_dim() > 0 && min_eigenvalue(unit) > 1e-10) {
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
      const CMat A = ginibre(rng, X.d_in, X.d_in);
      const CMat R = kadison_schwarz_residual(X, A);
      worst = std::max(worst, std::max(0.0, -min_eigenvalue(R)) / std::max(1e-300, X(CMat(A.adjoint() * A)).norm()));
    }
    r.check("kadison_schwarz", worst, tol["kadison"]);
  }
  json blocks = json::array();
  for (const CMat& v : minimal.kraus) blocks.push_back(io::to_json(v));
  r.extra["minimal_kraus"] = blocks;
  r.extra["rank"] = minimal.h_dim();
}

void run_dbc(const io::ModelFile& mf, const Tolerances& tol, Report& r) {
  need_kind(mf, {"lindblad", "pauli_fierz"}, "dbc");
  Superoperator M = Superoperator::zero(1);
  ThermalState st;
  if (mf.kind == "lindblad") {
    const auto s = io::parse_lindblad(mf.payload);
    M = build_generator(s.data);
    if (s.rho) {
      st.rho = *s.rho;
    } else if (s.K && s.beta) {
      st = gibbs_state(SmallSystem(*s.K), *s.beta);
    } else {
      throw InputError("dbc needs 'rho' or both 'K' and 'beta'");
    }
  } else {
    const auto s = io::parse_pauli_fierz(mf.payload);
    M = davies_generator(s.model).M;
    if (s.rho) {
      st.rho = *s.rho;
    } else if (s.model.beta) {
      st = gibbs_state(s.model.sys, *s.model.beta);
    } else {
      throw InputError("dbc needs 'rho' or 'beta'");
    }
  }
  const double scale = 1.0 + M.mat.norm();
  r.check("dbc_standard", dbc_residual(dbc_residuals_standard(M, st)), tol["dbc"] * scale);
  r.check("dbc_alt", dbc_residual(dbc_residuals_alt(M, st)), tol["dbc"] * scale);
}

void run_davies(const io::ModelFile& mf, const Tolerances& tol, Report& r) {
  need_kind(mf, {"pauli_fierz"}, "davies");
  const auto s = io::parse_pauli_fierz(mf.payload);
  const DaviesData dv = davies_generator(s.model);
  const double scale = 1.0 + dv.M.mat.norm();
  json cert;
  r.check("markov", dv.markov, tol["markov"]);
  r.check("k_invariant", k_invariance_residual(dv.M, s.model.sys), 1e-9 * scale);
  r.check("condi6", dv.condi6, tol["condi6"]);
  r.check("upsilon_identity", dv.upsilon_identity, tol["level_shift"]);
  cert["markov"] = r.checks[0].pass;
  cert["k_invariant"] = r.checks[1].pass;
  if (s.model.beta) {
    const double beta = *s.model.beta;
    const ThermalState st = gibbs_state(s.model.sys, beta);
    r.check("dbc_standard", dbc_residual(dbc_residuals_standard(dv.M, st)), tol["dbc"] * scale);
    r.check("dbc_alt", dbc_residual(dbc_residuals_alt(dv.M, st)), tol["dbc"] * scale);
    cert["dbc_standard"] = r.checks[r.checks.size() - 2].pass;
    cert["dbc_alt"] = r.checks.back().pass;
    const double q = quadratic_balance_residual(dv.nu, dv.Y, beta);
    r.check("condi2", q, tol["condi2"]);
    cert["condi2_residual"] = round6(q);
    bool eps_ok = false;
    double eres = INFINITY;
    try {
      const AntiunitaryMap eps = construct_epsilon(dv.nu, dv.Y, beta);
      eres = std::max(epsilon_involution_residual(eps), epsilon_flip_residual(eps, dv.Y));
      eps_ok = eres <= tol["epsilon"];
    } catch (const Error&) {
    }
    r.flag("epsilon", eps_ok, eres, tol["epsilon"]);
    cert["epsilon_ok"] = eps_ok;
    r.check("gibbs_stationary", adjoint(dv.M)(st.rho).norm(),
            tol["stationary"]);
    r.check("thermal_condition", thermal_condition_residual(s.model, beta), tol["thermal"]);
    double kms = 0.0;
    for (double t : {0.0, 0.5, 1.0}) kms = std::max(kms, kms_twopoint_check(s.model, beta, t).residual);
    r.check("kms_twopoint", kms, tol["kms"]);
  }
  r.extra["certification"] = cert;
  r.extra["orientation"] = dv.orientation;
  json nu = json::array();
  for (const CMat& v : dv.nu.kraus) nu.push_back(io::to_json(v));
  r.extra["davies"] = {{"upsilon", io::to_json(dv.upsilon)}, {"nu", nu}, {"omegas", dv.omegas}};
}

void run_wcl_reduced(const io::ModelFile& mf, const Options& opt, Report& r) {
  need_kind(mf, {"friedrichs", "pauli_fierz"}, "wcl_reduced");
  Table tab{"wcl_reduced", {}, {}};
  std::vector<double> errs;
  if (mf.kind == "friedrichs") {
    const auto s = io::parse_friedrichs(mf.payload);
    tab.header = {"lambda", "grid_n", "error", "runtime_s"};
    for (const WclRow& row : reduced_wcl_experiment(s.model, s.t, lambdas_from(opt, s.lambdas, {0.5, 0.35, 0.25}))) {
      tab.rows.push_back({fmt(row.lambda), std::to_string(row.grid_n), fmt(row.error), fmt(row.runtime_s, "%.3f")});
      errs.push_back(row.error);
    }
  } else {
    const auto s = io::parse_pauli_fierz(mf.payload);
    const int nmax = opt.nmax > 0 ? opt.nmax : s.nmax;
    tab.header = {"lambda", "dim", "nmax", "error", "runtime_s"};
    for (const PfRow& row : reduced_wcl_pf_experiment(s.model, lambdas_from(opt, s.lambdas, {0.6, 0.45}), s.t, s.A, nmax)) {
      tab.rows.push_back(
          {fmt(row.lambda), std::to_string(row.dim), std::to_string(nmax), fmt(row.error), fmt(row.runtime_s, "%.3f")});
      errs.push_back(row.error);
    }
  }
  monotone_check(r, "monotone_decreasing", errs);
  r.extra["errors"] = json::array();
  for (double e : errs) r.extra["errors"].push_back(round6(e));
  r.tables.push_back(tab);
}

void run_wcl_extended(const io::ModelFile& mf, const Tolerances& tol, const Options& opt, Report& r) {
  need_kind(mf, {"friedrichs"}, "wcl_extended");
  const auto s = io::parse_friedrichs(mf.payload);
  const std::vector<double> lams = lambdas_from(opt, s.lambdas, {0.5, 0.35, 0.25});
  Table tab{"wcl_extended", {"lambda", "grid_n", "error", "runtime_s"}, {}};
  std::vector<double> errs;
  ExtendedWclOptions eo;
  for (const WclRow& row : extended_wcl_experiment(s.model, s.t, s.t0, lams, eo)) {
    tab.rows.push_back({fmt(row.lambda), std::to_string(row.grid_n), fmt(row.error), fmt(row.runtime_s, "%.3f")});
    errs.push_back(row.error);
  }
  AsymptoticGrid ag;
  ag.r_u = eo.r_u;
  ag.du = std::min(0.05, lams.back() * lams.back());
  double iso = 0.0;
  for (double l : lams) iso = std::max(iso, partial_isometry_residual(build_J_lambda(s.model, ag, l)));
  monotone_check(r, "monotone_decreasing", errs);
  r.check("partial_isometry", iso, tol["isometry"]);
  r.extra["errors"] = json::array();
  for (double e : errs) r.extra["errors"].push_back(round6(e));
  r.tables.push_back(tab);
}

void run_toy(const io::ModelFile& mf, const Options& opt, Report& r) {
  need_kind(mf, {"toy_dilation"}, "toy_dilation");
  const auto s = io::parse_toy(mf.payload);
  Table tab{"toy_dilation", {"r", "n", "dilation_error", "resolvent_residual", "runtime_s"}, {}};
  std::vector<double> dil, res;
  for (const auto& [rr, n] : grids_from(opt, s.grids)) {
    const auto tick = std::chrono::steady_clock::now();
    const ReservoirGrid g = ReservoirGrid::symmetric(rr, n);
    const ToyDilation td = s.nu ? build_Zr(s.upsilon, *s.nu, g) : build_Zr(s.upsilon, g);
    dil.push_back(dilation_check(td, s.t));
    res.push_back(resolvent_compare(td, s.z));
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - tick).count();
    tab.rows.push_back({fmt(rr), std::to_string(n), fmt(dil.back()), fmt(res.back()), fmt(sec, "%.3f")});
  }
  monotone_check(r, "dilation_decreasing", dil);
  monotone_check(r, "resolvent_decreasing", res);
  r.tables.push_back(tab);
}

void run_langevin(const io::ModelFile& mf, const Tolerances& tol, const Options& opt, Report& r) {
  need_kind(mf, {"langevin"}, "langevin");
  const auto s = io::parse_langevin(mf.payload);
  const int nmax = opt.nmax > 0 ? opt.nmax : s.nmax;
  Table tab{"langevin", {"r", "n", "nmax", "dim", "err_semigroup", "err_cp", "runtime_s"}, {}};
  std::vector<double> e1, e2;
  double block = 0.0, energy = 0.0;
  for (const auto& [rr, n] : grids_from(opt, s.grids)) {
    const auto tick = std::chrono::steady_clock::now();
    const ReservoirGrid g = ReservoirGrid::symmetric(rr, n);
    const LangevinGenerator gen = build_langevin_Z(s.upsilon, s.nu, g, nmax);
    const ReductionErrors e = langevin_reduction_check(gen, s.t, s.A);
    e1.push_back(e.semigroup);
    e2.push_back(e.cp);
    if (gen.d == 1 && s.nu.h_dim() == 1) {
      const CMat nu_row = s.nu.kraus[0];
      block = std::max(block, (one_excitation_block(gen) - build_Zr(s.upsilon, nu_row, g).Z).norm());
    }
    if (s.K && s.Y) energy = std::max(energy, commutation_residual(total_energy_checked(*s.K, *s.Y, gen), gen.Z));
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - tick).count();
    tab.rows.push_back({fmt(rr), std::to_string(n), std::to_string(nmax), std::to_string(gen.dim()), fmt(e.semigroup),
                        fmt(e.cp), fmt(sec, "%.3f")});
  }
  monotone_check(r, "semigroup_decreasing", e1);
  double cp_max = 0.0;
  for (double x : e2) cp_max = std::max(cp_max, x);
  if (cp_max <= 1e-12) {
    r.check("cp_exact", cp_max, 1e-12);
  } else {
    monotone_check(r, "cp_decreasing", e2);
  }
  if (s.upsilon.rows() == 1 && s.nu.h_dim() == 1) r.check("one_excitation_block", block, tol["block"]);
  if (s.K && s.Y) r.check("energy_commutation", energy, tol["energy"]);
  r.tables.push_back(tab);
}

int dispatch(const std::string& cmd, const Options& opt) {
  Report r;
  r.command = cmd;
  r.seed = opt.seed;
  io::ModelFile mf;
  Tolerances tol;
  try {
    tol.apply(opt.tols);
    mf = io::load_model(opt.model);
    r.kind = mf.kind;
    if (cmd == "validate") run_validate(mf, tol, r);
    else if (cmd == "canonical") run_canonical(mf, tol, opt, r);
    else if (cmd == "stinespring") run_stinespring(mf, tol, opt, r);
    else if (cmd == "dbc") run_dbc(mf, tol, r);
    else if (cmd == "davies") run_davies(mf, tol, r);
    else if (cmd == "wcl_reduced") run_wcl_reduced(mf, opt, r);
    else if (cmd == "wcl_extended") run_wcl_extended(mf, tol, opt, r);
    else if (cmd == "toy_dilation") run_toy(mf, opt, r);
    else if (cmd == "langevin") run_langevin(mf, tol, opt, r);
  } catch (const ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return EXIT_INPUT;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return EXIT_INPUT;
  } catch (const Error& e) {
    r.error_code = e.code();
    r.error_message = e.what();
  }
  write_outputs(r, opt);
  print_summary(r);
  return r.passed() ? EXIT_PASS : EXIT_FAIL;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Completely positive semigroups: certification and weak coupling experiments"};
  app.require_subcommand(1);
  Options opt;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"validate", "check model invariants and generator validity"},
      {"canonical", "canonical Lindblad form of a generator"},
      {"stinespring", "minimal Kraus form of the jump map"},
      {"dbc", "detailed balance under both inner products"},
      {"davies", "Davies generator and its certification"},
      {"wcl_reduced", "reduced weak coupling limit table"},
      {"wcl_extended", "extended weak coupling limit table"},
      {"toy_dilation", "dilation and resolvent checks for Z_r"},
      {"langevin", "Langevin dilation on truncated Fock spaces"}};
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--model", opt.model, "model file (JSON)")->required();
    sub->add_option("--out", opt.out, "output directory");
    sub->add_option("--seed", opt.seed, "random seed");
    sub->add_option("--tol", opt.tols, "tolerance override NAME=VALUE");
    sub->add_option("--lambda-list", opt.lambdas, "coupling ladder, descending")->delimiter(',');
    sub->add_option("--grid", opt.grids, "reservoir grid r,n (repeatable)");
    sub->add_option("--nmax", opt.nmax, "Fock excitation cap");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : EXIT_INPUT;
  }
  for (const auto& [name, help] : commands)
    if (app.got_subcommand(name)) return dispatch(name, opt);
  return EXIT_INPUT;
}
