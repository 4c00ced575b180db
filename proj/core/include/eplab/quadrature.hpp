#pragma once

#include "eplab/common.hpp"
#include "eplab/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace eplab {

/// Gauss–Hermite rule for the standard normal weight: Σ w_j g(x_j) ≈ E[g(W)],
/// W ~ 𝒩(0,1). Weights sum to 1.
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  int order() const { return static_cast<int>(nodes.size()); }
};

/// Golub–Welsch nodes polished by Newton steps on the orthonormal Hermite
/// recurrence; weights from the Christoffel function. 1 ≤ order ≤ 256.
GaussHermiteRule gauss_hermite(int order);

enum class IntegrationMethod { quadrature, monte_carlo };

std::string_view to_string(IntegrationMethod method);
IntegrationMethod parse_integration_method(std::string_view name);

/// Settings for every expectation over the channel output.
struct IntegratorConfig {
  IntegrationMethod method = IntegrationMethod::quadrature;
  int order = 48;                       // nodes per axis (quadrature)
  std::int64_t samples = 1'000'000;     // draws (Monte Carlo)
  std::uint64_t seed = 42;
  double target_tolerance = 1e-4;       // absolute, on every integrated entry
  bool estimate_error = true;

  static IntegratorConfig quadrature(int order = 48);
  static IntegratorConfig monte_carlo(std::int64_t samples = 1'000'000, std::uint64_t seed = 42);
  /// Quadrature for n ≤ 3, Monte Carlo otherwise.
  static IntegratorConfig defaults_for(int dimension);

  IntegratorConfig without_error_estimate() const {
    IntegratorConfig c = *this;
    c.estimate_error = false;
    return c;
  }

  /// Throws ValidationError when order < 4, samples < 1000 or tolerance ≤ 0.
  void validate() const;
};

struct Expectation {
  std::vector<double> values;
  std::vector<double> errors;  // all zero when !error_estimated
  bool error_estimated = false;
  bool tolerance_met = true;
  std::int64_t evaluations = 0;

  double max_error() const {
    return errors.empty() ? 0.0 : *std::max_element(errors.begin(), errors.end());
  }
};

namespace detail {

/// Tensor nodes whose product weight drops below this are skipped; with at
/// most 256³ nodes per component the dropped mass stays below 1e-14.
inline constexpr double kNodeWeightCutoff = 1e-22;
inline constexpr std::int64_t kMonteCarloBatch = std::int64_t{1} << 16;

std::vector<double> component_cdf(const GaussianMixture& law);
std::mt19937_64 batch_engine(std::uint64_t seed, std::int64_t batch);

// Sum over components k (ascending), then tensor nodes in lexicographic
// axis order. The order is fixed so results are bit-stable per config.
template <class Integrand>
std::int64_t quadrature_pass(const GaussianMixture& law, const GaussHermiteRule& rule, int width,
                             Integrand& integrand, std::vector<double>& total) {
  const int n = law.dimension();
  const int m = rule.order();
  std::vector<double> scaled(static_cast<std::size_t>(n * m));
  for (int i = 0; i < n; ++i) {
    const double sigma = std::sqrt(law.noise_variance()(i));
    for (int j = 0; j < m; ++j) {
      scaled[static_cast<std::size_t>(i * m + j)] = sigma * rule.nodes[static_cast<std::size_t>(j)];
    }
  }
  std::vector<double> y(static_cast<std::size_t>(n));
  std::vector<double> out(static_cast<std::size_t>(width));
  std::vector<double> component_sum(static_cast<std::size_t>(width));
  total.assign(static_cast<std::size_t>(width), 0.0);
  std::int64_t count = 0;

  for (int k = 0; k < law.components(); ++k) {
    const double p = law.probs()(k);
    if (p <= 0.0) continue;
    const double* mean = law.means().data() + static_cast<std::ptrdiff_t>(k) * n;
    std::fill(component_sum.begin(), component_sum.end(), 0.0);
    auto visit = [&](auto& self, int axis, double weight) -> void {
      if (axis == n) {
        integrand(static_cast<const double*>(y.data()), out.data());
        for (int v = 0; v < width; ++v) {
          component_sum[static_cast<std::size_t>(v)] += weight * out[static_cast<std::size_t>(v)];
        }
        ++count;
        return;
      }
      for (int j = 0; j < m; ++j) {
        const double w = weight * rule.weights[static_cast<std::size_t>(j)];
        if (w < kNodeWeightCutoff) continue;
        y[static_cast<std::size_t>(axis)] = mean[axis] + scaled[static_cast<std::size_t>(axis * m + j)];
        self(self, axis + 1, w);
      }
    };
    visit(visit, 0, 1.0);
    for (int v = 0; v < width; ++v) {
      total[static_cast<std::size_t>(v)] += p * component_sum[static_cast<std::size_t>(v)];
    }
  }
  return count;
}

// Batches of kMonteCarloBatch draws, batch b driven by its own engine seeded
// from (seed, b); batch partial sums are reduced in batch order. Each draw
// takes one uniform for the component and then n normals, so two laws with
// the same weights see the same (component, W) stream.
template <class Integrand>
void monte_carlo_pass(const GaussianMixture& law, const IntegratorConfig& cfg, int width,
                      Integrand& integrand, std::vector<double>& sum, std::vector<double>& sum_sq) {
  const int n = law.dimension();
  const auto cdf = component_cdf(law);
  std::vector<double> sigma(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) sigma[static_cast<std::size_t>(i)] = std::sqrt(law.noise_variance()(i));
  std::vector<double> y(static_cast<std::size_t>(n));
  std::vector<double> out(static_cast<std::size_t>(width));
  std::vector<double> batch_sum(static_cast<std::size_t>(width));
  std::vector<double> batch_sq(static_cast<std::size_t>(width));
  sum.assign(static_cast<std::size_t>(width), 0.0);
  sum_sq.assign(static_cast<std::size_t>(width), 0.0);

  const std::int64_t batches = (cfg.samples + kMonteCarloBatch - 1) / kMonteCarloBatch;
  for (std::int64_t b = 0; b < batches; ++b) {
    auto rng = batch_engine(cfg.seed, b);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::fill(batch_sum.begin(), batch_sum.end(), 0.0);
    std::fill(batch_sq.begin(), batch_sq.end(), 0.0);
    const std::int64_t draws = std::min(kMonteCarloBatch, cfg.samples - b * kMonteCarloBatch);
    for (std::int64_t s = 0; s < draws; ++s) {
      const double u = uniform(rng) * cdf.back();
      auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
      if (it == cdf.end()) --it;
      const long k = it - cdf.begin();
      const double* mean = law.means().data() + k * n;
      for (int i = 0; i < n; ++i) {
        y[static_cast<std::size_t>(i)] = mean[i] + sigma[static_cast<std::size_t>(i)] * normal(rng);
      }
      integrand(static_cast<const double*>(y.data()), out.data());
      for (int v = 0; v < width; ++v) {
        const double o = out[static_cast<std::size_t>(v)];
        batch_sum[static_cast<std::size_t>(v)] += o;
        batch_sq[static_cast<std::size_t>(v)] += o * o;
      }
    }
    for (int v = 0; v < width; ++v) {
      sum[static_cast<std::size_t>(v)] += batch_sum[static_cast<std::size_t>(v)];
      sum_sq[static_cast<std::size_t>(v)] += batch_sq[static_cast<std::size_t>(v)];
    }
  }
}

}  // namespace detail

/// E[g(Y)] for Y distributed as `law`, where `integrand(y, out)` writes the
/// `width` entries of g(y).
///
/// Quadrature integrates each mixture component with a tensor Gauss–Hermite
/// rule centered on its mean; the error estimate is |Q_m − Q_2m| per entry and
/// the reported value is Q_m. Monte Carlo reports the sample mean and its
/// standard error.
template <class Integrand>
Expectation expect(const GaussianMixture& law, const IntegratorConfig& cfg, int width,
                   Integrand&& integrand) {
  cfg.validate();
  if (width < 1) throw ValidationError("expect: width must be >= 1");
  Expectation result;
  result.errors.assign(static_cast<std::size_t>(width), 0.0);
  if (cfg.method == IntegrationMethod::quadrature) {
    const auto rule = gauss_hermite(cfg.order);
    result.evaluations = detail::quadrature_pass(law, rule, width, integrand, result.values);
    if (cfg.estimate_error) {
      std::vector<double> fine;
      const auto fine_rule = gauss_hermite(std::min(2 * cfg.order, 256));
      result.evaluations += detail::quadrature_pass(law, fine_rule, width, integrand, fine);
      for (int v = 0; v < width; ++v) {
        const auto i = static_cast<std::size_t>(v);
        result.errors[i] = std::abs(result.values[i] - fine[i]);
      }
    }
  } else {
    std::vector<double> sum;
    std::vector<double> sum_sq;
    detail::monte_carlo_pass(law, cfg, width, integrand, sum, sum_sq);
    const double count = static_cast<double>(cfg.samples);
    result.values.resize(static_cast<std::size_t>(width));
    for (int v = 0; v < width; ++v) {
      const auto i = static_cast<std::size_t>(v);
      const double mean = sum[i] / count;
      result.values[i] = mean;
      if (cfg.estimate_error) {
        const double var = std::max(0.0, sum_sq[i] / count - mean * mean) * count / (count - 1.0);
        result.errors[i] = std::sqrt(var / count);
      }
    }
    result.evaluations = cfg.samples;
  }
  result.error_estimated = cfg.estimate_error;
  result.tolerance_met = !cfg.estimate_error || result.max_error() <= cfg.target_tolerance;
  return result;
}

}  // namespace eplab
