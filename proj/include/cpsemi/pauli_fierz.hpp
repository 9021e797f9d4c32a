#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "cpsemi/cpmap.hpp"
#include "cpsemi/friedrichs_wcl.hpp"
#include "cpsemi/invariance_dbc.hpp"
#include "cpsemi/lindblad.hpp"
#include "cpsemi/matrixcore.hpp"

namespace cpsemi {

// Reservoir window around a Bohr frequency ω; the coupling at energy x is
// v(x) = p(x) Σ_a C_a ⊗ e_a, one noise row per operator C_a.
struct BohrWindow {
  double omega = 0.0;
  double a = 0.0;
  double b = 0.0;
  Profile profile;
  std::vector<CMat> ops;  // d x d each
  Index n = 8;            // midpoint cells
};

struct SpectralCouplingModel {
  SmallSystem sys;
  std::vector<BohrWindow> windows;
  std::optional<double> beta;

  Index d() const { return sys.dim(); }
};

std::vector<double> bohr_frequencies(const SmallSystem& sys);
void validate(const SpectralCouplingModel& model);

struct DaviesData {
  CMat upsilon;
  CpMapData nu;
  std::vector<double> omegas;  // Bohr frequency of each kept block
  CMat Y;                      // diag(omegas)
  Superoperator M;
  std::string orientation;     // "k'<-k" or "k<-k'"
  double upsilon_identity;     // ||(1/i)(Υ - Υ^*) + ν^*ν||
  double condi6;               // covariance residual with Y
  double commutes_with_K;      // ||[Υ, K]||
  double markov;               // ||M(1)||
};
DaviesData davies_generator(const SpectralCouplingModel& model);

// Windows on I and -I carrying √(1+n) p G and √n p G^*, n = (e^{βx} - 1)^{-1}.
// β = +inf gives the vacuum coupling on I alone.
std::vector<BohrWindow> make_thermal_coupling(const Profile& g, const CMat& G, double omega, double a, double b,
                                              double beta, Index n = 8);

// Cells of all windows, with per-cell coupling blocks v_{c,a} = p(x_c) C_a.
struct ReservoirCells {
  RVec x;
  RVec dx;
  std::vector<std::vector<CMat>> v;
  std::vector<Index> window;
  Index size() const { return x.size(); }
  Index mirror(Index c) const;  // cell at -x_c, or -1
};
ReservoirCells reservoir_cells(const SpectralCouplingModel& model);

// max over cells c and E_ij of ||Σ_a v_{m,a} A v_{m,a}^* - e^{-βx_c} Σ_a v_{c,a}^* A v_{c,a}||, m the mirror of c
double thermal_condition_residual(const SpectralCouplingModel& model, double beta);

struct ReservoirConjugation {
  AntiunitaryMap eps;  // on ⊕_c noise rows of cell c
  RVec energies;       // H_R on the same space
  double intertwining; // max_c ||v_c - e^{βx_c/2} Σ U v_m^*||
  double involution;   // ||U conj(U) - 1||
  double flip;         // ||U diag(x) conj(U) + diag(x)||
};
ReservoirConjugation reservoir_conjugation(const SpectralCouplingModel& model, double beta);

struct KmsCheck {
  cd lhs;
  cd rhs;
  double residual;  // |lhs - rhs| / max(|lhs|, |rhs|)
};
// Both sides of the two-point KMS identity for B_j = D_j (a^*(V) + a(V)) D_j'.
KmsCheck kms_twopoint_check(const SpectralCouplingModel& model, double beta, double t, const CMat& D1,
                            const CMat& D1p, const CMat& D2, const CMat& D2p);
KmsCheck kms_twopoint_check(const SpectralCouplingModel& model, double beta, double t);

struct PfRow {
  double lambda;
  Index dim;
  double error;
  double runtime_s;
};
// e_λ = ||X^*(A⊗1)X - e^{tM}(A)||, X = e^{itH_λ/λ²} I_K e^{-itK/λ²}, on K ⊗ truncated Fock
std::vector<PfRow> reduced_wcl_pf_experiment(const SpectralCouplingModel& model, const std::vector<double>& lambdas,
                                             double t, const CMat& A, int n_max, Index cap = 20000);

}  // namespace cpsemi
