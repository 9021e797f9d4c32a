#pragma once

#include <random>
#include <utility>

#include "cpsemi/cpmap.hpp"
#include "cpsemi/matrixcore.hpp"

namespace cpsemi {

// M(A) = i[Θ,A] - [Δ,A]_+ + Σ_j ν_j^* A ν_j
struct LindbladData {
  CMat theta;
  CMat delta;
  CpMapData nu;

  LindbladData() = default;
  LindbladData(CMat th, CMat de, CpMapData n);
  explicit LindbladData(Index d);  // zero generator

  Index dim() const { return theta.rows(); }
};

Superoperator build_generator(const LindbladData& data);

CMat evolve(const Superoperator& M, double t, const CMat& A);
CMat evolve_predual(const Superoperator& M, double t, const CMat& rho);

bool is_markov(const LindbladData& data, double tol = 1e-10);
double markov_defect(const LindbladData& data);  // ||2Δ - Σ ν_j^*ν_j||

bool is_canonical(const LindbladData& data, double tol = 1e-10);

// Same generator with ν_j -> ν_j + w_j 1 and the matching changes of Θ, Δ.
LindbladData shift_presentation(const LindbladData& data, const CVec& w);

LindbladData canonical_form(const Superoperator& M, double cp_tol = 1e-8);

struct HamiltonianSplit {
  CMat theta;          // traceless
  Superoperator dissipative;
};
HamiltonianSplit split_hamiltonian_dissipative(const Superoperator& M);

// ∫ M(U^*) U dU over the normalized Haar measure, closed form (1/d) Σ_ij M(E_ij) E_ji.
CMat haar_average_check(const Superoperator& M);

struct HaarEstimate {
  CMat mean;
  double std_error;  // Frobenius norm of the entrywise standard errors
  int samples;
};
HaarEstimate haar_average_monte_carlo(const Superoperator& M, std::mt19937_64& rng, int samples = 10000);

}  // namespace cpsemi

namespace cpsemi {

// M(A) = -i(ΥA - AΥ^*) + Σ_j ν_j^* A ν_j, i.e. Θ = -Re Υ, Δ = i(Υ - Υ^*)/2
LindbladData from_upsilon(const CMat& upsilon, const CpMapData& nu);

}  // namespace cpsemi
