#pragma once

#include "eplab/constellation.hpp"
#include "eplab/entropy.hpp"
#include "eplab/quadrature.hpp"

#include <functional>

namespace eplab {

/// Step 1e-4 · max(1, λ).
double finite_difference_step(double lambda);

/// Derivative of a scalar function of λ along coordinate i: central
/// differences, or the second-order forward stencil when λ_i ≤ step (the
/// λ = 0 boundary).
double partial_derivative(const std::function<double(const Vector&)>& f, const Vector& lambda,
                          int i);

/// FD(h): finite differences of differential_entropy over λ.
Vector fd_entropy_gradient(const Constellation& c, const ScalingVector& lambda,
                           const IntegratorConfig& cfg);

/// FD(∇h): finite differences of the MMSE-based gradient, column j holding
/// ∂(∇h)/∂λ_j.
Matrix fd_entropy_hessian(const Constellation& c, const ScalingVector& lambda,
                          const IntegratorConfig& cfg);

/// Compares `report` (computed at the model's λ) against both FD routes with
/// the bounds max(1e-4, 3·err) for the gradient and max(1e-3, 3·err) for the
/// Hessian.
FdResiduals check_finite_differences(const ChannelModel& model, const HessianReport& report,
                                     const IntegratorConfig& cfg);

}  // namespace eplab
