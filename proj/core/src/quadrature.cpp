#include "eplab/quadrature.hpp"

#include <cmath>
#include <string>

namespace eplab {

GaussHermiteRule gauss_hermite(int order) {
  if (order < 1 || order > 256) throw ValidationError("gauss_hermite: order must be in [1, 256]");
  const int m = order;
  GaussHermiteRule rule;
  rule.nodes.resize(static_cast<std::size_t>(m));
  rule.weights.resize(static_cast<std::size_t>(m));
  if (m == 1) {
    rule.nodes[0] = 0.0;
    rule.weights[0] = 1.0;
    return rule;
  }

  // Jacobi matrix of the probabilists' Hermite polynomials.
  Vector diag = Vector::Zero(m);
  Vector sub(m - 1);
  for (int k = 1; k < m; ++k) sub(k - 1) = std::sqrt(static_cast<double>(k));
  Eigen::SelfAdjointEigenSolver<Matrix> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  const Vector guess = solver.eigenvalues();

  // Orthonormal recurrence p_{k+1} = (x p_k − √k p_{k−1}) / √(k+1).
  auto evaluate = [m](double x, double& pm, double& pm1, double& sum_sq) {
    double prev = 0.0;
    double cur = 1.0;
    sum_sq = 1.0;
    for (int k = 0; k < m - 1; ++k) {
      const double next = (x * cur - std::sqrt(static_cast<double>(k)) * prev) /
                          std::sqrt(static_cast<double>(k + 1));
      prev = cur;
      cur = next;
      sum_sq += cur * cur;
    }
    pm1 = cur;  // p_{m−1}
    pm = (x * cur - std::sqrt(static_cast<double>(m - 1)) * prev) / std::sqrt(static_cast<double>(m));
  };

  for (int j = 0; j < m; ++j) {
    double x = guess(j);
    double pm = 0.0;
    double pm1 = 0.0;
    double sum_sq = 0.0;
    for (int it = 0; it < 4; ++it) {
      evaluate(x, pm, pm1, sum_sq);
      const double deriv = std::sqrt(static_cast<double>(m)) * pm1;
      if (deriv == 0.0) break;
      const double step = pm / deriv;
      x -= step;
      if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(x))) break;
    }
    evaluate(x, pm, pm1, sum_sq);
    rule.nodes[static_cast<std::size_t>(j)] = x;
    rule.weights[static_cast<std::size_t>(j)] = 1.0 / sum_sq;
  }

  // Enforce exact symmetry about zero, then normalize the weights.
  for (int j = 0; j < m / 2; ++j) {
    const auto a = static_cast<std::size_t>(j);
    const auto b = static_cast<std::size_t>(m - 1 - j);
    const double x = 0.5 * (rule.nodes[b] - rule.nodes[a]);
    const double w = 0.5 * (rule.weights[a] + rule.weights[b]);
    rule.nodes[a] = -x;
    rule.nodes[b] = x;
    rule.weights[a] = w;
    rule.weights[b] = w;
  }
  if (m % 2 == 1) rule.nodes[static_cast<std::size_t>(m / 2)] = 0.0;
  double total = 0.0;
  for (double w : rule.weights) total += w;
  for (double& w : rule.weights) w /= total;
  return rule;
}

std::string_view to_string(IntegrationMethod method) {
  return method == IntegrationMethod::quadrature ? "quadrature" : "monte_carlo";
}

IntegrationMethod parse_integration_method(std::string_view name) {
  if (name == "quadrature") return IntegrationMethod::quadrature;
  if (name == "monte_carlo" || name == "monte-carlo" || name == "mc") {
    return IntegrationMethod::monte_carlo;
  }
  throw ValidationError("unknown integration method '" + std::string(name) + "'");
}

IntegratorConfig IntegratorConfig::quadrature(int order) {
  IntegratorConfig c;
  c.method = IntegrationMethod::quadrature;
  c.order = order;
  return c;
}

IntegratorConfig IntegratorConfig::monte_carlo(std::int64_t samples, std::uint64_t seed) {
  IntegratorConfig c;
  c.method = IntegrationMethod::monte_carlo;
  c.samples = samples;
  c.seed = seed;
  c.target_tolerance = 1e-2;
  return c;
}

IntegratorConfig IntegratorConfig::defaults_for(int dimension) {
  return dimension <= 3 ? quadrature() : monte_carlo();
}

void IntegratorConfig::validate() const {
  if (method == IntegrationMethod::quadrature) {
    if (order < 4 || order > 128) {
      throw ValidationError("integrator: quadrature order must be in [4, 128]");
    }
  } else if (samples < 1000) {
    throw ValidationError("integrator: Monte Carlo needs at least 1000 samples");
  }
  if (!(target_tolerance > 0.0) || !std::isfinite(target_tolerance)) {
    throw ValidationError("integrator: target tolerance must be positive");
  }
}

namespace detail {

std::vector<double> component_cdf(const GaussianMixture& law) {
  std::vector<double> cdf(static_cast<std::size_t>(law.components()));
  double acc = 0.0;
  for (int k = 0; k < law.components(); ++k) {
    acc += law.probs()(k);
    cdf[static_cast<std::size_t>(k)] = acc;
  }
  return cdf;
}

std::mt19937_64 batch_engine(std::uint64_t seed, std::int64_t batch) {
  const auto b = static_cast<std::uint64_t>(batch);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace detail
}  // namespace eplab
