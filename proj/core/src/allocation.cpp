#include "eplab/allocation.hpp"

#include "eplab/entropy.hpp"
#include "eplab/mmse.hpp"

#include <algorithm>
#include <cmath>

namespace eplab {

namespace {

constexpr double kArmijo = 1e-4;
constexpr int kMaxBacktracks = 60;

struct Evaluation {
  double value = 0.0;
  Vector gradient;
  Matrix hessian;
};

Evaluation evaluate(const Constellation& c, const Vector& lambda, const IntegratorConfig& cfg) {
  const auto ex = integrate_channel(ChannelModel(c, ScalingVector(lambda)), cfg);
  Evaluation e;
  e.value = mutual_information_from_entropy(ex.entropy, ex.dimension);
  e.gradient = 0.5 * ex.mmse.diagonal();
  e.hessian = -0.5 * ex.phi_hadamard;
  return e;
}

// Maximizer of gᵀd + ½dᵀHd over directions supported on `free` with Σd = 0
// when the budget is active. Returns an empty vector when the system is not
// usable.
Vector newton_direction(const Evaluation& e, const Vector& lambda, double power) {
  const long n = lambda.size();
  std::vector<long> free;
  for (long i = 0; i < n; ++i) {
    if (lambda(i) > 0.0) free.push_back(i);
  }
  if (free.empty()) return {};
  const long f = static_cast<long>(free.size());
  const bool budget_active = lambda.sum() >= power * (1.0 - 1e-12);
  const long size = f + (budget_active ? 1 : 0);
  Matrix kkt = Matrix::Zero(size, size);
  Vector rhs = Vector::Zero(size);
  const double shift = 1e-10 * std::max(1.0, e.hessian.cwiseAbs().maxCoeff());
  for (long a = 0; a < f; ++a) {
    for (long b = 0; b < f; ++b) kkt(a, b) = -e.hessian(free[a], free[b]);
    kkt(a, a) += shift;
    rhs(a) = e.gradient(free[a]);
    if (budget_active) {
      kkt(a, f) = 1.0;
      kkt(f, a) = 1.0;
    }
  }
  const Vector sol = kkt.fullPivLu().solve(rhs);
  if (!sol.allFinite()) return {};
  Vector d = Vector::Zero(n);
  for (long a = 0; a < f; ++a) d(free[a]) = sol(a);
  return d;
}

}  // namespace

Vector project_onto_budget(const Vector& v, double power) {
  if (!(power > 0.0) || !std::isfinite(power)) {
    throw ValidationError("project_onto_budget: power must be positive and finite");
  }
  if (!v.allFinite()) throw ValidationError("project_onto_budget: non-finite input");
  Vector clamped = v.cwiseMax(0.0);
  if (clamped.sum() <= power) return clamped;

  // Michelot: repeatedly drop coordinates that fall below the running
  // threshold until the active set is stable.
  std::vector<bool> active(static_cast<std::size_t>(v.size()), true);
  double theta = 0.0;
  for (bool changed = true; changed;) {
    changed = false;
    double sum = 0.0;
    long count = 0;
    for (long i = 0; i < v.size(); ++i) {
      if (active[static_cast<std::size_t>(i)]) {
        sum += v(i);
        ++count;
      }
    }
    theta = (sum - power) / static_cast<double>(count);
    for (long i = 0; i < v.size(); ++i) {
      if (active[static_cast<std::size_t>(i)] && v(i) <= theta) {
        active[static_cast<std::size_t>(i)] = false;
        changed = true;
      }
    }
  }
  Vector out = (v.array() - theta).cwiseMax(0.0);
  // Rounding can leave Σ a few ulps above P; pull the excess off the largest entry.
  const double excess = out.sum() - power;
  if (excess > 0.0) {
    Eigen::Index k = 0;
    out.maxCoeff(&k);
    out(k) = std::max(0.0, out(k) - excess);
  }
  return out;
}

double kkt_residual(const Vector& lambda, const Vector& gradient, double power) {
  return (lambda - project_onto_budget(lambda + gradient, power)).cwiseAbs().maxCoeff();
}

AllocationResult optimize_power_allocation(const Constellation& c, const AllocationOptions& options,
                                           const IntegratorConfig& cfg) {
  cfg.validate();
  if (!(options.power > 0.0) || !std::isfinite(options.power)) {
    throw ValidationError("optimize_power_allocation: power must be positive and finite");
  }
  if (!(options.tolerance > 0.0)) {
    throw ValidationError("optimize_power_allocation: tolerance must be positive");
  }
  if (options.max_iter < 0) throw ValidationError("optimize_power_allocation: max_iter < 0");

  const int n = c.dimension();
  const IntegratorConfig quiet = cfg.without_error_estimate();
  AllocationResult result;
  Vector lambda = Vector::Constant(n, options.power / n);
  Evaluation cur = evaluate(c, lambda, quiet);
  result.objective_history.push_back(cur.value);

  double residual = kkt_residual(lambda, cur.gradient, options.power);
  int it = 0;
  // Barzilai-Borwein estimate for the first trial step of the gradient
  // search; backtracking still enforces monotone Armijo ascent.
  double bb_step = 1.0;
  while (residual > options.tolerance && it < options.max_iter) {
    bool accepted = false;
    const Vector previous_lambda = lambda;
    const Vector previous_gradient = cur.gradient;
    auto try_direction = [&](double first_step, auto&& candidate_at) {
      double step = first_step;
      for (int k = 0; k < kMaxBacktracks; ++k, step *= 0.5) {
        const Vector next = candidate_at(step);
        const Vector move = next - lambda;
        if (move.cwiseAbs().maxCoeff() == 0.0) return false;
        Evaluation e = evaluate(c, next, quiet);
        if (e.value >= cur.value + kArmijo * cur.gradient.dot(move)) {
          lambda = next;
          cur = std::move(e);
          return true;
        }
      }
      return false;
    };
    if (options.newton) {
      const Vector d = newton_direction(cur, lambda, options.power);
      if (d.size() == n && cur.gradient.dot(d) > 0.0) {
        accepted = try_direction(1.0,
            [&](double s) { return project_onto_budget(lambda + s * d, options.power); });
      }
    }
    if (!accepted) {
      accepted = try_direction(bb_step, [&](double s) {
        return project_onto_budget(lambda + s * cur.gradient, options.power);
      });
    }
    if (!accepted) break;
    const Vector ds = lambda - previous_lambda;
    const double curvature = ds.dot(previous_gradient - cur.gradient);
    bb_step = curvature > 0.0 ? std::clamp(ds.squaredNorm() / curvature, 1e-4, 1e4) : 1.0;
    ++it;
    result.objective_history.push_back(cur.value);
    residual = kkt_residual(lambda, cur.gradient, options.power);
  }

  const auto final_ex = integrate_channel(ChannelModel(c, ScalingVector(lambda)), cfg);
  result.lambda = lambda;
  result.iterations = it;
  result.gradient = cur.gradient;
  result.kkt_residual = residual;
  result.converged = residual <= options.tolerance;
  result.mutual_information = mutual_information_from_entropy(final_ex.entropy, n);
  result.mutual_information_error = final_ex.entropy_error;
  result.tolerance_met = final_ex.tolerance_met;
  return result;
}

}  // namespace eplab
