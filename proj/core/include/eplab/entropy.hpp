#pragma once

#include "eplab/common.hpp"
#include "eplab/constellation.hpp"
#include "eplab/mmse.hpp"
#include "eplab/quadrature.hpp"

#include <optional>

namespace eplab {

double entropy_power_from_entropy(double entropy, int dimension);

/// I(X;Y) = h(Y) − h(W) with h(W) = (n/2) log(2πe).
double mutual_information_from_entropy(double entropy, int dimension);

/// h(Y), N(Y) and I(X;Y) in nats. N and I are always derived from the stored
/// h, so the three values are exactly consistent.
struct EntropyReport {
  int dimension = 0;
  double entropy = 0.0;
  double entropy_power = 0.0;
  double mutual_information = 0.0;
  double entropy_error = 0.0;
  double entropy_power_error = 0.0;
  double mutual_information_error = 0.0;
  bool tolerance_met = true;

  static EntropyReport from_entropy(int dimension, double entropy, double entropy_error,
                                    bool tolerance_met = true);
};

EntropyReport differential_entropy(const ChannelModel& model, const IntegratorConfig& cfg);

/// [∇λ h]_i = ½ [E_X]_ii. Requires a diagonal scaling; λ_i = 0 is allowed.
Vector entropy_gradient(const ChannelModel& model, const IntegratorConfig& cfg);

/// ∇²λ h = −½ E[Φ_X(Y) ∘ Φ_X(Y)].
Matrix entropy_hessian(const ChannelModel& model, const IntegratorConfig& cfg);

/// (N/n)(diag(E) diag(E)ᵀ/n − E[Φ∘Φ]).
Matrix entropy_power_hessian_from_mmse(double entropy_power, const Vector& diag_e,
                                       const Matrix& phi_hadamard);

/// (2N/n)(2 ∇h ∇hᵀ/n + ∇²h), the chain rule through N = exp(2h/n)/(2πe).
Matrix entropy_power_hessian_chain_rule(double entropy_power, const Vector& gradient_h,
                                        const Matrix& hessian_h);

/// Finite-difference comparison attached by --check-fd style callers.
struct FdResiduals {
  Vector fd_gradient;
  Matrix fd_hessian;
  double gradient_residual = 0.0;  // ‖∇h − FD(h)‖∞
  double gradient_bound = 0.0;     // max(1e-4, 3 × error)
  double hessian_residual = 0.0;   // ‖∇²h − FD(∇h)‖max
  double hessian_bound = 0.0;      // max(1e-3, 3 × error)
  bool pass = false;
};

struct HessianReport {
  EntropyReport entropy;
  Vector gradient_h;
  Vector gradient_error;
  Matrix hessian_h;
  Matrix hessian_h_error;
  Matrix hessian_N;
  double max_eigenvalue_h = 0.0;
  double max_eigenvalue_N = 0.0;
  std::optional<FdResiduals> fd_residuals;
};

/// Pure assembly from one integration pass.
HessianReport assemble_hessian_report(const ChannelExpectations& ex);

HessianReport entropy_power_hessian(const ChannelModel& model, const IntegratorConfig& cfg);

/// ‖EqN − chain‖_F / ‖EqN‖_F (0 when both vanish).
double chain_rule_residual(const HessianReport& report);
double chain_rule_assembly_check(const ChannelModel& model, const IntegratorConfig& cfg);

}  // namespace eplab
