#pragma once

#include "eplab/common.hpp"
#include "eplab/constellation.hpp"
#include "eplab/mixture.hpp"
#include "eplab/quadrature.hpp"

namespace eplab {

/// Reciprocal channel Z = X + Γ^{1/2} W with γ_i = 1/λ_i, i.e. Z = Λ^{-1/2} Y.
/// Only defined when every λ_i > 0.
class ReciprocalView {
 public:
  ReciprocalView(Constellation constellation, Vector gamma);
  /// Throws ValidationError for matrix scalings or any λ_i = 0.
  static ReciprocalView from_model(const ChannelModel& model);

  const Vector& gamma() const { return gamma_; }
  const GaussianMixture& z_law() const { return z_law_; }

  /// ∂ log f_Z / ∂z_i = (E[x_i | z] − z_i) / γ_i.
  Vector score(const Vector& z) const { return z_law_.score(z); }
  Matrix log_density_hessian(const Vector& z) const { return z_law_.log_density_hessian(z); }

  struct Expectations {
    double entropy = 0.0;        // h(Z)
    double entropy_error = 0.0;
    Vector fisher;               // ½ E[(∂ log f_Z/∂z_i)²]
    Vector fisher_error;
    Matrix gamma_hessian;        // −½ E[(∂² log f_Z/∂z_i∂z_j)²]
    Matrix gamma_hessian_error;
    bool tolerance_met = true;
  };

  /// One pass over the law of Z.
  Expectations integrate(const IntegratorConfig& cfg) const;

 private:
  Constellation constellation_;
  Vector gamma_;
  GaussianMixture z_law_;
};

/// Checks h(Λ^{1/2}X + W) = h(X + Λ^{-1/2}W) + ½ log|Λ| with two independent
/// integrations. Residual and bound are relative to max(1, |h(Y)|).
struct ReciprocalIdentityResult {
  double entropy_y = 0.0;
  double entropy_z = 0.0;
  double half_log_det = 0.0;
  double residual = 0.0;
  double bound = 0.0;
  bool pass = false;
};
ReciprocalIdentityResult reciprocal_identity_check(const ChannelModel& model,
                                                   const IntegratorConfig& cfg);

/// ∂h(Z)/∂γ_i by central differences against ½E[score_i²] per component.
struct DeBruijnResult {
  Vector finite_difference;
  Vector fisher_side;
  Vector residual;
  Vector bound;  // max(1e-4, 3 × error) per component
  bool pass = false;
};
DeBruijnResult de_bruijn_check(const ChannelModel& model, const IntegratorConfig& cfg);

/// (E[X | Y = Λ^{1/2}z] − z)/γ evaluated through the Y-channel posterior.
Vector score_via_posterior_mean(const ChannelModel& model, const Vector& z);

/// Z-mixture score against score_via_posterior_mean at `points` draws of Z
/// (seeded by cfg.seed). Both sides are exact finite sums; bound 1e-10
/// relative to max(1, |score|).
struct ScoreIdentityResult {
  int points = 0;
  double max_residual = 0.0;
  bool pass = false;
};
ScoreIdentityResult score_identity_check(const ChannelModel& model, const IntegratorConfig& cfg,
                                         int points = 100);

/// λ-space Hessian rebuilt from the γ-space closed forms through
///   ∂²h_Y/∂λ_i∂λ_j = H^γ_ij/(λ_i²λ_j²) + δ_ij (2 g^γ_i/λ_i³ − 1/(2λ_i²))
/// compared with −½E[Φ∘Φ]. Residual relative to max(1, ‖direct‖max); bound
/// max(1e-3, 3 × propagated error).
struct GammaHessianResult {
  Vector gamma_gradient;
  Matrix gamma_hessian;
  Matrix via_gamma;
  Matrix direct;
  double residual = 0.0;
  double bound = 0.0;
  bool pass = false;
};
GammaHessianResult hessian_gamma_check(const ChannelModel& model, const IntegratorConfig& cfg);

}  // namespace eplab
