#include "eplab/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace eplab {

SymmetricEigen symmetric_eigen(const Matrix& m) {
  if (m.rows() != m.cols()) {
    throw ValidationError("symmetric_eigen: matrix is not square");
  }
  if (m.size() == 0) return {Vector(0), Matrix(0, 0)};
  const Matrix sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("symmetric_eigen: eigen-decomposition failed");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

double min_eigenvalue(const Matrix& m) {
  const auto eig = symmetric_eigen(m);
  return eig.values.size() == 0 ? 0.0 : eig.values(0);
}

double max_eigenvalue(const Matrix& m) {
  const auto eig = symmetric_eigen(m);
  return eig.values.size() == 0 ? 0.0 : eig.values(eig.values.size() - 1);
}

double spectral_norm(const Matrix& m) {
  const auto eig = symmetric_eigen(m);
  if (eig.values.size() == 0) return 0.0;
  return std::max(std::abs(eig.values(0)), std::abs(eig.values(eig.values.size() - 1)));
}

double tolerance_scale(const Matrix& m) { return std::max(1.0, spectral_norm(m)); }

bool is_symmetric(const Matrix& m, double rel_tol) {
  if (m.rows() != m.cols()) return false;
  if (m.size() == 0) return true;
  if (!m.allFinite()) return false;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

Matrix symmetric_psd_root(const Matrix& t) {
  if (!is_symmetric(t)) {
    throw ValidationError("symmetric_psd_root: matrix is not symmetric");
  }
  const auto eig = symmetric_eigen(t);
  const long n = eig.values.size();
  if (n == 0) return Matrix(0, 0);
  const double norm = std::max(std::abs(eig.values(0)), std::abs(eig.values(n - 1)));
  if (eig.values(0) < -1e-10 * norm) {
    throw ValidationError("symmetric_psd_root: matrix is not positive semidefinite");
  }
  const Vector roots = eig.values.cwiseMax(0.0).cwiseSqrt();
  return eig.vectors * roots.asDiagonal() * eig.vectors.transpose();
}

Matrix gaussian_matrix(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(rows, cols);
  // Column-major fill order is part of the reproducibility contract.
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) g(i, j) = normal(rng);
  }
  return g;
}

Matrix random_orthogonal(int n, std::mt19937_64& rng) {
  const Matrix g = gaussian_matrix(n, n, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  }
  return q;
}

Matrix unpack_symmetric(const double* packed, int n) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      m(i, j) = packed[packed_index(i, j, n)];
      m(j, i) = m(i, j);
    }
  }
  return m;
}

}  // namespace eplab
