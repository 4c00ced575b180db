#include "eplab/finite_difference.hpp"

#include "eplab/mmse.hpp"

#include <algorithm>
#include <cmath>

namespace eplab {

double finite_difference_step(double lambda) { return 1e-4 * std::max(1.0, lambda); }

namespace {

template <class Value, class F>
Value stencil(const F& f, const Vector& lambda, int i) {
  const double h = finite_difference_step(lambda(i));
  Vector shifted = lambda;
  if (lambda(i) > h) {
    shifted(i) = lambda(i) + h;
    const Value plus = f(shifted);
    shifted(i) = lambda(i) - h;
    const Value minus = f(shifted);
    return (plus - minus) / (2.0 * h);
  }
  const Value f0 = f(lambda);
  shifted(i) = lambda(i) + h;
  const Value f1 = f(shifted);
  shifted(i) = lambda(i) + 2.0 * h;
  const Value f2 = f(shifted);
  return (-3.0 * f0 + 4.0 * f1 - f2) / (2.0 * h);
}

}  // namespace

double partial_derivative(const std::function<double(const Vector&)>& f, const Vector& lambda,
                          int i) {
  return stencil<double>(f, lambda, i);
}

Vector fd_entropy_gradient(const Constellation& c, const ScalingVector& lambda,
                           const IntegratorConfig& cfg) {
  const auto quiet = cfg.without_error_estimate();
  auto entropy_at = [&](const Vector& l) {
    return differential_entropy(ChannelModel(c, ScalingVector(l)), quiet).entropy;
  };
  Vector g(lambda.dimension());
  for (int i = 0; i < lambda.dimension(); ++i) g(i) = partial_derivative(entropy_at, lambda.values(), i);
  return g;
}

Matrix fd_entropy_hessian(const Constellation& c, const ScalingVector& lambda,
                          const IntegratorConfig& cfg) {
  const int n = lambda.dimension();
  const auto quiet = cfg.without_error_estimate();
  auto gradient_at = [&](const Vector& l) -> Vector {
    return 0.5 * integrate_channel(ChannelModel(c, ScalingVector(l)), quiet).mmse.diagonal();
  };
  Matrix h(n, n);
  for (int col = 0; col < n; ++col) h.col(col) = stencil<Vector>(gradient_at, lambda.values(), col);
  return h;
}

FdResiduals check_finite_differences(const ChannelModel& model, const HessianReport& report,
                                     const IntegratorConfig& cfg) {
  const auto& lambda = model.require_diagonal("check_finite_differences");
  FdResiduals fd;
  fd.fd_gradient = fd_entropy_gradient(model.constellation(), lambda, cfg);
  fd.fd_hessian = fd_entropy_hessian(model.constellation(), lambda, cfg);
  fd.gradient_residual = (report.gradient_h - fd.fd_gradient).cwiseAbs().maxCoeff();
  fd.hessian_residual = (report.hessian_h - fd.fd_hessian).cwiseAbs().maxCoeff();
  const double grad_err = report.gradient_error.size() ? report.gradient_error.maxCoeff() : 0.0;
  const double hess_err = report.hessian_h_error.size() ? report.hessian_h_error.maxCoeff() : 0.0;
  fd.gradient_bound = std::max(1e-4, 3.0 * grad_err);
  fd.hessian_bound = std::max(1e-3, 3.0 * hess_err);
  fd.pass = fd.gradient_residual <= fd.gradient_bound && fd.hessian_residual <= fd.hessian_bound;
  return fd;
}

}  // namespace eplab
