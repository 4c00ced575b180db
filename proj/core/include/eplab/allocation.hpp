#pragma once

#include "eplab/common.hpp"
#include "eplab/constellation.hpp"
#include "eplab/quadrature.hpp"

#include <vector>

namespace eplab {

/// Euclidean projection onto {λ ≥ 0, Σλ ≤ P}. When the clamped point exceeds
/// the budget the result lies on the face Σλ = P (Michelot's algorithm).
Vector project_onto_budget(const Vector& v, double power);

struct AllocationOptions {
  double power = 1.0;
  double tolerance = 1e-6;  // on the KKT residual
  int max_iter = 500;
  bool newton = false;      // Newton steps on the free face with ∇²λh
};

struct AllocationResult {
  Vector lambda;
  double mutual_information = 0.0;
  double mutual_information_error = 0.0;
  int iterations = 0;
  /// ‖λ − Proj(λ + ∇I)‖∞; zero exactly at a KKT point.
  double kkt_residual = 0.0;
  Vector gradient;
  bool converged = false;
  bool tolerance_met = true;
  /// I at the starting point and after every accepted step.
  std::vector<double> objective_history;
};

/// ‖λ − Proj(λ + g)‖∞.
double kkt_residual(const Vector& lambda, const Vector& gradient, double power);

/// Projected gradient ascent of I(λ) from (P/n)𝟙 with Armijo backtracking
/// (factor ½, initial step 1, c = 1e-4). Iterates are evaluated without error
/// estimation; the final point is re-evaluated with `cfg` as given. Running
/// out of iterations returns the last iterate with `converged = false`.
AllocationResult optimize_power_allocation(const Constellation& c, const AllocationOptions& options,
                                           const IntegratorConfig& cfg);

}  // namespace eplab
