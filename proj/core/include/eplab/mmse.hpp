#pragma once

#include "eplab/common.hpp"
#include "eplab/constellation.hpp"
#include "eplab/quadrature.hpp"

namespace eplab {

/// Posterior moments of X given one observation Y = y.
struct ConditionalMoments {
  Vector responsibilities;    // r_k(y)
  Vector cond_mean;           // E[X | y]
  Matrix cond_second_moment;  // E[XXᵀ | y]
  Matrix phi;                 // Φ_X(y) = E[XXᵀ|y] − E[X|y]E[X|y]ᵀ
};

/// r_k(y) ∝ p_k exp(−½‖y − A x_k‖²), computed in the log domain.
Vector posterior_responsibilities(const ChannelModel& model, const Vector& y);

/// Exact finite sums over atoms. Φ is accumulated in centered form
/// Σ r_k (x_k − x̂)(x_k − x̂)ᵀ so it stays PSD in floating point.
ConditionalMoments conditional_moments(const ChannelModel& model, const Vector& y);

/// Averaged MMSE matrix E_X = E[Φ_X(Y)].
struct MmseSummary {
  Matrix e_matrix;
  Vector diag_e;
  Matrix integration_error;
  bool tolerance_met = true;
};

MmseSummary mmse_matrix(const ChannelModel& model, const IntegratorConfig& cfg);

/// Everything the entropy analytics need from one pass over the law of Y:
/// h(Y) = −E[log f_Y(Y)], E_X = E[Φ], and E[Φ∘Φ], each with its error.
struct ChannelExpectations {
  int dimension = 0;
  double entropy = 0.0;
  double entropy_error = 0.0;
  Matrix mmse;
  Matrix mmse_error;
  Matrix phi_hadamard;
  Matrix phi_hadamard_error;
  bool error_estimated = false;
  bool tolerance_met = true;
  std::int64_t evaluations = 0;
};

ChannelExpectations integrate_channel(const ChannelModel& model, const IntegratorConfig& cfg);

}  // namespace eplab
