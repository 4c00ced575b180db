#pragma once

#include "eplab/common.hpp"

#include <cstdint>
#include <random>

namespace eplab {

struct SymmetricEigen {
  Vector values;   // ascending
  Matrix vectors;  // columns match `values`
};

/// Eigen-decomposition of the symmetric part of `m`.
SymmetricEigen symmetric_eigen(const Matrix& m);

double min_eigenvalue(const Matrix& m);
double max_eigenvalue(const Matrix& m);

/// Largest absolute eigenvalue of a symmetric matrix (its spectral norm).
double spectral_norm(const Matrix& m);

/// max(1, ‖m‖₂); the scale that relative PSD tolerances are measured against.
double tolerance_scale(const Matrix& m);

/// True when ‖m − mᵀ‖max ≤ rel_tol · max(1, ‖m‖max).
bool is_symmetric(const Matrix& m, double rel_tol = 1e-12);

/// Symmetric square root of a PSD matrix. Eigenvalues in [−1e-10‖T‖, 0) are
/// clamped to zero; anything more negative is rejected.
Matrix symmetric_psd_root(const Matrix& t);

/// Haar-distributed orthogonal matrix (QR of a Gaussian matrix, sign-fixed).
Matrix random_orthogonal(int n, std::mt19937_64& rng);

Matrix gaussian_matrix(int rows, int cols, std::mt19937_64& rng);

/// Upper-triangle packed index for (i, j), i ≤ j, of an n×n symmetric matrix.
constexpr int packed_index(int i, int j, int n) {
  return i * n - i * (i - 1) / 2 + (j - i);
}

constexpr int packed_size(int n) { return n * (n + 1) / 2; }

Matrix unpack_symmetric(const double* packed, int n);

}  // namespace eplab
