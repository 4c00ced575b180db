#pragma once

#include "eplab/common.hpp"

#include <vector>

namespace eplab {

/// Finite Gaussian mixture with component means m_k, weights p_k and one shared
/// diagonal covariance diag(σ²):
///
///   f(y) = Σ_k p_k 𝒩(y; m_k, diag(σ²)).
///
/// The channel output Y = Λ^{1/2}X + W is the case σ² = 1; the reciprocal
/// channel Z = X + Γ^{1/2}W is the case m_k = x_k, σ² = γ.
///
/// All evaluation happens in the log domain with a max shift, so atoms that
/// are many standard deviations apart do not underflow.
class GaussianMixture {
 public:
  /// `means` is n×K (one column per component); zero-probability components
  /// are kept but never contribute.
  GaussianMixture(Matrix means, const Vector& probs, Vector noise_variance);

  int dimension() const { return static_cast<int>(means_.rows()); }
  int components() const { return static_cast<int>(means_.cols()); }

  const Matrix& means() const { return means_; }
  const Vector& probs() const { return probs_; }
  const Vector& noise_variance() const { return noise_variance_; }

  /// Core kernel: returns log f(y) and writes the posterior component weights
  /// r_k(y) into `resp[0..K)`. `y` must point at n values.
  double log_density_and_responsibilities(const double* y, double* resp) const;

  double log_density(const Vector& y) const;
  Vector responsibilities(const Vector& y) const;

  /// ∇ log f(y) = Σ_k r_k (m_k − y) / σ².
  Vector score(const Vector& y) const;

  /// ∇² log f(y) = D⁻¹ Cov_r[m] D⁻¹ − D⁻¹ with D = diag(σ²).
  Matrix log_density_hessian(const Vector& y) const;

 private:
  void check_point(const Vector& y) const;

  Matrix means_;
  Vector probs_;
  Vector noise_variance_;
  Vector inv_variance_;
  std::vector<int> active_;
  std::vector<double> log_weights_;
  double log_normalizer_ = 0.0;
};

}  // namespace eplab
