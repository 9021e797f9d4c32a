#include "cpsemi/io.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>

namespace cpsemi::io {

namespace {

void allow_only(const json& obj, std::initializer_list<const char*> keys, const std::string& where) {
  if (!obj.is_object()) throw ParseError(where + ": expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* k : keys) ok = ok || it.key() == k;
    if (!ok) throw ParseError(where + ": unknown field '" + it.key() + "'");
  }
}

const json& need(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(where + ": missing field '" + key + "'");
  return *it;
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ParseError(where + ": expected a number");
  return j.get<double>();
}

Index count(const json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<long long>() < 0) throw ParseError(where + ": expected a non-negative integer");
  return static_cast<Index>(j.get<long long>());
}

double number_or(const json& obj, const char* key, double fallback, const std::string& where) {
  auto it = obj.find(key);
  return it == obj.end() ? fallback : number(*it, where + "." + key);
}

cd entry(const json& e, const std::string& where) {
  if (e.is_number()) return {e.get<double>(), 0.0};
  if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number())
    return {e[0].get<double>(), e[1].get<double>()};
  throw ParseError(where + ": matrix entry must be a number or [re, im]");
}

std::vector<double> number_list(const json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": expected a list of numbers");
  std::vector<double> out;
  for (size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<CMat> matrix_list(const json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": expected a list of matrices");
  std::vector<CMat> out;
  for (size_t i = 0; i < j.size(); ++i) out.push_back(parse_matrix(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

GridList grid_list(const json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": expected a list of [r, n] pairs");
  GridList out;
  for (size_t i = 0; i < j.size(); ++i) {
    const std::string w = where + "[" + std::to_string(i) + "]";
    if (!j[i].is_array() || j[i].size() != 2) throw ParseError(w + ": expected [r, n]");
    out.emplace_back(number(j[i][0], w), count(j[i][1], w));
  }
  return out;
}

Profile parse_profile(const json& j, double centre, const std::string& where) {
  if (!j.is_object()) throw ParseError(where + ": expected a profile object");
  auto tp = j.find("type");
  if (tp == j.end() || !tp->is_string()) throw ParseError(where + ": profile needs a string 'type'");
  const std::string type = tp->get<std::string>();
  if (type == "flat") {
    allow_only(j, {"type", "g"}, where);
    return Profile::flat(number(need(j, "g", where), where + ".g"));
  }
  if (type == "lorentzian") {
    allow_only(j, {"type", "g", "gamma"}, where);
    return Profile::lorentzian(number(need(j, "g", where), where + ".g"), number(need(j, "gamma", where), where + ".gamma"),
                               centre);
  }
  if (type == "samples") {
    allow_only(j, {"type", "x", "v"}, where);
    const std::vector<double> x = number_list(need(j, "x", where), where + ".x");
    const std::vector<double> v = number_list(need(j, "v", where), where + ".v");
    return Profile::samples(Eigen::Map<const RVec>(x.data(), x.size()), Eigen::Map<const RVec>(v.data(), v.size()));
  }
  throw ParseError(where + ": unknown profile type '" + type + "'");
}

CMat square(const json& j, const std::string& where) {
  CMat A = parse_matrix(j, where);
  if (A.rows() != A.cols()) throw ParseError(where + ": expected a square matrix");
  return A;
}

}  // namespace

CMat parse_matrix(const json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": matrix must be a list of rows");
  const Index rows = static_cast<Index>(j.size());
  if (rows == 0) return CMat(0, 0);
  if (!j[0].is_array()) throw ParseError(where + ": matrix rows must be lists");
  const Index cols = static_cast<Index>(j[0].size());
  CMat A(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    const json& row = j[r];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols) throw ParseError(where + ": ragged matrix rows");
    for (Index c = 0; c < cols; ++c)
      A(r, c) = entry(row[c], where + "[" + std::to_string(r) + "][" + std::to_string(c) + "]");
  }
  return A;
}

RMat parse_real_matrix(const json& j, const std::string& where) {
  const CMat A = parse_matrix(j, where);
  if (A.size() > 0 && A.imag().cwiseAbs().maxCoeff() != 0.0) throw ParseError(where + ": expected a real matrix");
  return A.real();
}

RVec parse_real_vector(const json& j, const std::string& where) {
  const std::vector<double> v = number_list(j, where);
  return Eigen::Map<const RVec>(v.data(), v.size());
}

json to_json(const CMat& A) {
  json rows = json::array();
  for (Index r = 0; r < A.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < A.cols(); ++c) row.push_back({A(r, c).real(), A(r, c).imag()});
    rows.push_back(row);
  }
  return rows;
}

json to_json(const RMat& A) { return to_json(CMat(A.cast<cd>())); }

ModelFile parse_model(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("model: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("model: top level must be an object");
  ModelFile m;
  m.schema_version = static_cast<int>(count(need(doc, "schema_version", "model"), "model.schema_version"));
  if (m.schema_version != SCHEMA_VERSION)
    throw ParseError("model: unsupported schema_version " + std::to_string(m.schema_version));
  const json& kind = need(doc, "kind", "model");
  if (!kind.is_string()) throw ParseError("model.kind: expected a string");
  m.kind = kind.get<std::string>();
  static const char* kinds[] = {"lindblad", "classical", "friedrichs", "pauli_fierz", "toy_dilation", "langevin"};
  bool known = false;
  for (const char* k : kinds) known = known || m.kind == k;
  if (!known) throw ParseError("model.kind: unknown kind '" + m.kind + "'");
  doc.erase("schema_version");
  doc.erase("kind");
  m.payload = doc;
  return m;
}

ModelFile load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read model file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_model(ss.str());
}

LindbladSpec parse_lindblad(const json& p) {
  const std::string w = "lindblad";
  allow_only(p, {"dim", "theta", "delta", "nu", "markov", "rho", "K", "beta"}, w);
  Index d = -1;
  if (p.contains("dim")) d = count(p["dim"], w + ".dim");
  std::optional<CMat> theta, delta;
  if (p.contains("theta")) theta = square(p["theta"], w + ".theta");
  if (p.contains("delta")) delta = square(p["delta"], w + ".delta");
  std::vector<CMat> nu;
  if (p.contains("nu")) nu = matrix_list(p["nu"], w + ".nu");
  if (d < 0) d = theta ? theta->rows() : delta ? delta->rows() : !nu.empty() ? nu.front().rows() : -1;
  if (d < 0) throw ParseError(w + ": dimension cannot be inferred; give 'dim'");
  LindbladSpec s;
  try {
    s.data = LindbladData(theta.value_or(CMat::Zero(d, d)), delta.value_or(CMat::Zero(d, d)), CpMapData(d, d, nu));
  } catch (const DimensionMismatch& e) {
    throw ParseError(w + ": " + e.what());
  }
  if (p.contains("markov")) {
    if (!p["markov"].is_boolean()) throw ParseError(w + ".markov: expected a boolean");
    s.markov = p["markov"].get<bool>();
  }
  if (p.contains("rho")) s.rho = square(p["rho"], w + ".rho");
  if (p.contains("K")) s.K = square(p["K"], w + ".K");
  if (p.contains("beta")) s.beta = number(p["beta"], w + ".beta");
  return s;
}

ClassicalSpec parse_classical(const json& p) {
  allow_only(p, {"m", "p"}, "classical");
  ClassicalSpec s;
  s.m = parse_real_matrix(need(p, "m", "classical"), "classical.m");
  if (s.m.rows() != s.m.cols()) throw ParseError("classical.m: expected a square matrix");
  if (p.contains("p")) s.p = parse_real_vector(p["p"], "classical.p");
  return s;
}

FriedrichsSpec parse_friedrichs(const json& p) {
  const std::string w = "friedrichs";
  allow_only(p, {"K", "intervals", "lambda", "lambda_schedule", "t", "t0"}, w);
  FriedrichsSpec s;
  s.model.sys = SmallSystem(square(need(p, "K", w), w + ".K"));
  const json& ivs = need(p, "intervals", w);
  if (!ivs.is_array()) throw ParseError(w + ".intervals: expected a list");
  for (size_t i = 0; i < ivs.size(); ++i) {
    const std::string wi = w + ".intervals[" + std::to_string(i) + "]";
    const json& j = ivs[i];
    allow_only(j, {"k", "a", "b", "n", "profile", "B"}, wi);
    CouplingInterval iv;
    iv.k = number(need(j, "k", wi), wi + ".k");
    iv.a = number(need(j, "a", wi), wi + ".a");
    iv.b = number(need(j, "b", wi), wi + ".b");
    if (j.contains("n")) iv.n = count(j["n"], wi + ".n");
    iv.profile = parse_profile(need(j, "profile", wi), iv.k, wi + ".profile");
    iv.B = j.contains("B") ? parse_matrix(j["B"], wi + ".B") : CMat(CMat::Ones(1, s.model.d()));
    s.model.intervals.push_back(iv);
  }
  s.model.lambda = number_or(p, "lambda", 1.0, w);
  if (p.contains("lambda_schedule")) s.lambdas = number_list(p["lambda_schedule"], w + ".lambda_schedule");
  s.t = number_or(p, "t", 1.0, w);
  s.t0 = number_or(p, "t0", 0.0, w);
  return s;
}

PauliFierzSpec parse_pauli_fierz(const json& p) {
  const std::string w = "pauli_fierz";
  allow_only(p, {"K", "beta", "bohr", "thermal", "lambda_schedule", "t", "A", "nmax", "rho"}, w);
  PauliFierzSpec s;
  s.model.sys = SmallSystem(square(need(p, "K", w), w + ".K"));
  const Index d = s.model.d();
  if (p.contains("beta")) s.model.beta = number(p["beta"], w + ".beta");
  if (p.contains("bohr")) {
    const json& bs = p["bohr"];
    if (!bs.is_array()) throw ParseError(w + ".bohr: expected a list");
    for (size_t i = 0; i < bs.size(); ++i) {
      const std::string wi = w + ".bohr[" + std::to_string(i) + "]";
      const json& j = bs[i];
      allow_only(j, {"omega", "a", "b", "n", "profile", "coupling"}, wi);
      BohrWindow bw;
      bw.omega = number(need(j, "omega", wi), wi + ".omega");
      bw.a = number(need(j, "a", wi), wi + ".a");
      bw.b = number(need(j, "b", wi), wi + ".b");
      if (j.contains("n")) bw.n = count(j["n"], wi + ".n");
      bw.profile = parse_profile(need(j, "profile", wi), bw.omega, wi + ".profile");
      bw.ops = matrix_list(need(j, "coupling", wi), wi + ".coupling");
      s.model.windows.push_back(bw);
    }
  }
  if (p.contains("thermal")) {
    if (!s.model.beta) throw ParseError(w + ".thermal: needs 'beta'");
    const json& ts = p["thermal"];
    if (!ts.is_array()) throw ParseError(w + ".thermal: expected a list");
    for (size_t i = 0; i < ts.size(); ++i) {
      const std::string wi = w + ".thermal[" + std::to_string(i) + "]";
      const json& j = ts[i];
      allow_only(j, {"omega", "a", "b", "n", "profile", "G"}, wi);
      const double om = number(need(j, "omega", wi), wi + ".omega");
      const Index n = j.contains("n") ? count(j["n"], wi + ".n") : 8;
      const Profile g = parse_profile(need(j, "profile", wi), om, wi + ".profile");
      const CMat G = square(need(j, "G", wi), wi + ".G");
      for (auto& bw : make_thermal_coupling(g, G, om, number(need(j, "a", wi), wi + ".a"),
                                            number(need(j, "b", wi), wi + ".b"), *s.model.beta, n))
        s.model.windows.push_back(bw);
    }
  }
  if (p.contains("lambda_schedule")) s.lambdas = number_list(p["lambda_schedule"], w + ".lambda_schedule");
  s.t = number_or(p, "t", 1.0, w);
  s.A = p.contains("A") ? square(p["A"], w + ".A") : CMat(basis_matrix(d, d - 1, d - 1));
  if (p.contains("nmax")) s.nmax = static_cast<int>(count(p["nmax"], w + ".nmax"));
  if (p.contains("rho")) s.rho = square(p["rho"], w + ".rho");
  return s;
}

ToySpec parse_toy(const json& p) {
  const std::string w = "toy_dilation";
  allow_only(p, {"upsilon", "nu", "grids", "t", "z"}, w);
  ToySpec s;
  s.upsilon = square(need(p, "upsilon", w), w + ".upsilon");
  if (p.contains("nu")) s.nu = parse_matrix(p["nu"], w + ".nu");
  s.grids = p.contains("grids") ? grid_list(p["grids"], w + ".grids") : GridList{{10, 401}, {20, 801}, {40, 1601}};
  s.t = number_or(p, "t", 1.0, w);
  if (p.contains("z")) s.z = entry(p["z"], w + ".z");
  return s;
}

LangevinSpec parse_langevin(const json& p) {
  const std::string w = "langevin";
  allow_only(p, {"upsilon", "nu", "grids", "nmax", "t", "A", "K", "Y"}, w);
  LangevinSpec s;
  s.upsilon = square(need(p, "upsilon", w), w + ".upsilon");
  const Index d = s.upsilon.rows();
  try {
    s.nu = CpMapData(d, d, p.contains("nu") ? matrix_list(p["nu"], w + ".nu") : std::vector<CMat>{});
  } catch (const DimensionMismatch& e) {
    throw ParseError(w + ".nu: " + e.what());
  }
  s.grids = p.contains("grids") ? grid_list(p["grids"], w + ".grids") : GridList{{10, 41}, {20, 81}};
  if (p.contains("nmax")) s.nmax = static_cast<int>(count(p["nmax"], w + ".nmax"));
  s.t = number_or(p, "t", 1.0, w);
  s.A = p.contains("A") ? square(p["A"], w + ".A") : CMat(basis_matrix(d, d - 1, d - 1));
  if (p.contains("K")) s.K = square(p["K"], w + ".K");
  if (p.contains("Y")) s.Y = square(p["Y"], w + ".Y");
  return s;
}

json lindblad_to_json(const LindbladData& data) {
  json nu = json::array();
  for (const CMat& v : data.nu.kraus) nu.push_back(to_json(v));
  return json{{"theta", to_json(data.theta)}, {"delta", to_json(data.delta)}, {"nu", nu}};
}

}  // namespace cpsemi::io
