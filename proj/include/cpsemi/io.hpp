#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cpsemi/classical.hpp"
#include "cpsemi/friedrichs_wcl.hpp"
#include "cpsemi/lindblad.hpp"
#include "cpsemi/matrixcore.hpp"
#include "cpsemi/pauli_fierz.hpp"

namespace cpsemi::io {

using json = nlohmann::json;

inline constexpr int SCHEMA_VERSION = 1;

// Matrix literal: row-major rows of entries, each a number or [re, im].
CMat parse_matrix(const json& j, const std::string& where);
RMat parse_real_matrix(const json& j, const std::string& where);
RVec parse_real_vector(const json& j, const std::string& where);
json to_json(const CMat& A);
json to_json(const RMat& A);

struct ModelFile {
  int schema_version = SCHEMA_VERSION;
  std::string kind;
  json payload;  // the document without schema_version and kind
};
ModelFile load_model(const std::string& path);
ModelFile parse_model(const std::string& text);

using GridList = std::vector<std::pair<double, Index>>;

struct LindbladSpec {
  LindbladData data;
  std::optional<bool> markov;
  std::optional<CMat> rho;
  std::optional<CMat> K;
  std::optional<double> beta;
};
LindbladSpec parse_lindblad(const json& p);

struct ClassicalSpec {
  RMat m;
  std::optional<RVec> p;
};
ClassicalSpec parse_classical(const json& p);

struct FriedrichsSpec {
  FriedrichsModel model;
  std::vector<double> lambdas;
  double t = 1.0;
  double t0 = 0.0;
};
FriedrichsSpec parse_friedrichs(const json& p);

struct PauliFierzSpec {
  SpectralCouplingModel model;
  std::vector<double> lambdas;
  double t = 1.0;
  CMat A;
  int nmax = 2;
  std::optional<CMat> rho;
};
PauliFierzSpec parse_pauli_fierz(const json& p);

struct ToySpec {
  CMat upsilon;
  std::optional<CMat> nu;
  GridList grids;
  double t = 1.0;
  cd z{0.0, 1.0};
};
ToySpec parse_toy(const json& p);

struct LangevinSpec {
  CMat upsilon;
  CpMapData nu;
  GridList grids;
  int nmax = 2;
  double t = 1.0;
  CMat A;
  std::optional<CMat> K;
  std::optional<CMat> Y;
};
LangevinSpec parse_langevin(const json& p);

json lindblad_to_json(const LindbladData& data);

}  // namespace cpsemi::io
