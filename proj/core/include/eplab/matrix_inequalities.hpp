#pragma once

#include "eplab/common.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace eplab {

/// PSD verdicts pass when min eigenvalue ≥ −kPsdRelativeTolerance · scale,
/// with scale = max(1, largest spectral norm among the terms being compared).
inline constexpr double kPsdRelativeTolerance = 1e-9;

struct PsdCheckReport {
  std::string claim;
  double min_eigenvalue = 0.0;
  double scale = 1.0;
  double tolerance = 0.0;
  bool pass = false;
  Vector witness;  // eigenvector of the most negative eigenvalue; empty on pass

  double margin() const { return min_eigenvalue / scale; }
};

/// Eigenvalue certificate for `m` at tolerance kPsdRelativeTolerance · scale.
PsdCheckReport certify_psd(std::string claim, const Matrix& m, double scale);

/// CCᵀ with C an n×(n+4) Gaussian factor (well conditioned, full rank a.s.).
Matrix random_psd(int n, std::uint64_t seed);
/// Q diag(spectrum) Qᵀ for a Haar-random orthogonal Q. Entries must be ≥ 0.
Matrix random_psd(int n, std::uint64_t seed, const Vector& spectrum);
/// CCᵀ with C n×rank; rank 0 gives the zero matrix.
Matrix random_psd_of_rank(int n, int rank, std::uint64_t seed);
/// D^{-1/2} A D^{-1/2} for a random PD A, D = Diag(A).
Matrix random_correlation(int n, std::uint64_t seed);

/// Diag(A) = A ∘ I.
Matrix diag_matrix(const Matrix& a);

/// [[A, A], [A, A]] ⪰ 0 for PSD A.
PsdCheckReport check_block_replication(const Matrix& a);

/// [[A, I], [I, A⁻¹]] ⪰ 0 for PD A (min eig > 1e-10‖A‖ required).
PsdCheckReport check_block_inverse(const Matrix& a);

struct SchurProductReport {
  PsdCheckReport psd;
  bool inputs_positive_definite = false;
  bool product_positive_definite = false;
};
/// A ∘ B ⪰ 0 for PSD A, B; strict definiteness is reported when both are PD.
SchurProductReport check_schur_product(const Matrix& a, const Matrix& b);

struct SchurComplementReport {
  bool block_psd = false;    // [[A, D], [Dᵀ, B]] ⪰ 0
  bool b_dominates = false;  // B ⪰ Dᵀ A⁻¹ D
  bool a_dominates = false;  // A ⪰ D B⁻¹ Dᵀ
  double margins[3] = {0.0, 0.0, 0.0};  // normalized min eigenvalues, same order
  bool agree = false;
};
/// Evaluates the three equivalent statements for PD A (n×n), PD B (m×m) and
/// arbitrary D (n×m).
SchurComplementReport check_schur_complement_equivalence(const Matrix& a, const Matrix& b,
                                                         const Matrix& d);

/// A ∘ B⁻¹ ⪰ Diag(A) (A ∘ B)⁻¹ Diag(A) for PD A, B.
PsdCheckReport check_prop1(const Matrix& a, const Matrix& b);

struct Cor1Report {
  double value = 0.0;  // diag(A)ᵀ (A ∘ A)⁻¹ diag(A)
  int n = 0;
  bool pass = false;      // value ≤ n + 1e-9 n
  bool equality = false;  // |value − n| ≤ 1e-9 n
};
Cor1Report check_cor1(const Matrix& a);

/// A ∘ A ⪰ diag(A) diag(A)ᵀ / n for PSD A (semidefinite allowed).
PsdCheckReport check_prop2(const Matrix& a);

/// R ∘ R⁻¹ + I ⪰ 2 (R ∘ R)⁻¹ for a PD correlation matrix R.
PsdCheckReport check_styan(const Matrix& r);

/// 𝟙ᵀ (A ∘ A⁻¹) 𝟙, which equals n for every invertible symmetric A.
double hadamard_inverse_sum(const Matrix& a);

struct ClaimSummary {
  std::string claim;
  int trials = 0;
  double min_margin = 0.0;
  bool pass = true;
  std::optional<Matrix> witness;  // first failing input, if any
};

struct LemmaSuiteOptions {
  int trials = 1000;
  std::uint64_t seed = 42;
  int max_dim = 8;
};

/// Seeded random trials of every claim; dimension cycles through 1..max_dim.
std::vector<ClaimSummary> run_lemma_suite(const LemmaSuiteOptions& options);

}  // namespace eplab
