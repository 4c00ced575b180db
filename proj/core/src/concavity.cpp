#include "eplab/concavity.hpp"

#include "eplab/entropy.hpp"
#include "eplab/linalg.hpp"
#include "eplab/matrix_inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace eplab {

namespace {

void require_grid(int grid) {
  if (grid < 3) throw ValidationError("probe: grid must have at least 3 points");
}

void require_lambda(const Vector& lambda, int n, const char* what) {
  if (lambda.size() != n) {
    throw ValidationError(std::string(what) + ": λ length does not match the constellation");
  }
  if (!lambda.allFinite() || (lambda.array() < 0.0).any()) {
    throw ValidationError(std::string(what) + ": λ entries must be finite and nonnegative");
  }
}

struct Point {
  double value;
  double error;
  bool tolerance_met;
};

Point entropy_power_at(const ChannelModel& model, const IntegratorConfig& cfg) {
  const auto r = differential_entropy(model, cfg);
  return {r.entropy_power, r.entropy_power_error, r.tolerance_met};
}

SegmentProbe finish(ProbeKind kind, std::vector<double> t, const std::vector<Point>& points) {
  std::vector<double> values;
  std::vector<double> errors;
  bool ok = true;
  for (const auto& p : points) {
    values.push_back(p.value);
    errors.push_back(p.error);
    ok = ok && p.tolerance_met;
  }
  auto probe = detect_concavity_violations(std::move(t), std::move(values), std::move(errors));
  probe.kind = kind;
  probe.tolerance_met = ok;
  return probe;
}

}  // namespace

std::string_view to_string(ProbeKind kind) {
  switch (kind) {
    case ProbeKind::diagonal: return "diagonal";
    case ProbeKind::scalar_signal: return "scalar-signal";
    case ProbeKind::scalar_noise: return "scalar-noise";
    case ProbeKind::matrix: return "matrix";
    case ProbeKind::synthetic: return "synthetic";
  }
  return "unknown";
}

std::vector<double> uniform_grid(double lo, double hi, int grid) {
  require_grid(grid);
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(hi > lo)) {
    throw ValidationError("probe: grid interval must satisfy lo < hi");
  }
  std::vector<double> t(static_cast<std::size_t>(grid));
  for (int i = 0; i < grid; ++i) {
    t[static_cast<std::size_t>(i)] = lo + (hi - lo) * static_cast<double>(i) / (grid - 1);
  }
  t.back() = hi;
  return t;
}

SegmentProbe detect_concavity_violations(std::vector<double> t, std::vector<double> values,
                                         std::vector<double> errors, double factor) {
  const std::size_t m = t.size();
  if (m < 3) throw ValidationError("probe: grid must have at least 3 points");
  if (values.size() != m || errors.size() != m) {
    throw ValidationError("probe: t, values and errors must have equal length");
  }
  double scale = 0.0;
  for (double v : values) {
    if (!std::isfinite(v)) throw ValidationError("probe: non-finite value on the grid");
    scale = std::max(scale, std::abs(v));
  }
  const double floor = 16.0 * std::numeric_limits<double>::epsilon() * scale;
  std::vector<double> e(m);
  for (std::size_t i = 0; i < m; ++i) e[i] = std::max(std::abs(errors[i]), floor);

  SegmentProbe p;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  p.second_differences.assign(m, nan);
  p.thresholds.assign(m, nan);
  p.min_second_difference = std::numeric_limits<double>::infinity();
  p.max_second_difference = -std::numeric_limits<double>::infinity();
  p.max_excess = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < m; ++i) {
    const double d2 = values[i - 1] - 2.0 * values[i] + values[i + 1];
    const double threshold = factor * (e[i - 1] + 2.0 * e[i] + e[i + 1]);
    p.second_differences[i] = d2;
    p.thresholds[i] = threshold;
    p.min_second_difference = std::min(p.min_second_difference, d2);
    p.max_second_difference = std::max(p.max_second_difference, d2);
    if (d2 - threshold > p.max_excess) {
      p.max_excess = d2 - threshold;
      if (d2 > threshold) p.violation_index = static_cast<int>(i);
    }
  }
  p.violation = p.violation_index.has_value();
  p.t = std::move(t);
  p.values = std::move(values);
  p.errors = std::move(errors);
  return p;
}

SegmentProbe probe_diagonal_segment(const Constellation& c, const Vector& lambda_a,
                                    const Vector& lambda_b, int grid, const IntegratorConfig& cfg) {
  require_lambda(lambda_a, c.dimension(), "probe_diagonal_segment");
  require_lambda(lambda_b, c.dimension(), "probe_diagonal_segment");
  auto t = uniform_grid(0.0, 1.0, grid);
  std::vector<Point> points;
  for (double s : t) {
    const Vector lambda = ((1.0 - s) * lambda_a + s * lambda_b).cwiseMax(0.0);
    points.push_back(entropy_power_at(ChannelModel(c, ScalingVector(lambda)), cfg));
  }
  auto p = finish(ProbeKind::diagonal, std::move(t), points);
  p.lambda_a = lambda_a;
  p.lambda_b = lambda_b;
  return p;
}

SegmentProbe probe_scalar_costa(const Constellation& c, const Vector& lambda0, CostaMode mode,
                                double t_min, double t_max, int grid, const IntegratorConfig& cfg) {
  require_lambda(lambda0, c.dimension(), "probe_scalar_costa");
  if (!(t_max > 0.0)) throw ValidationError("probe_scalar_costa: t_max must be positive");
  if (!(t_min >= 0.0)) throw ValidationError("probe_scalar_costa: t_min must be nonnegative");
  if (mode == CostaMode::noise && t_min < 1e-3) {
    throw ValidationError("probe_scalar_costa: noise mode needs t ≥ 1e-3 on the whole grid");
  }
  auto t = uniform_grid(t_min, t_max, grid);
  std::vector<Point> points;
  for (double s : t) {
    if (mode == CostaMode::signal) {
      points.push_back(entropy_power_at(ChannelModel(c, ScalingVector(s * lambda0)), cfg));
    } else {
      // N(aZ) = a² N(Z) with a = √t.
      const Point inner = entropy_power_at(ChannelModel(c, ScalingVector(lambda0 / s)), cfg);
      points.push_back({s * inner.value, s * inner.error, inner.tolerance_met});
    }
  }
  auto p = finish(mode == CostaMode::signal ? ProbeKind::scalar_signal : ProbeKind::scalar_noise,
                  std::move(t), points);
  p.lambda_a = lambda0;
  return p;
}

SegmentProbe probe_matrix_segment(const Constellation& c, const Matrix& t_a, const Matrix& t_b,
                                  int grid, const IntegratorConfig& cfg) {
  const auto a = MatrixScaling::from_matrix(t_a);
  const auto b = MatrixScaling::from_matrix(t_b);
  if (a.dimension() != c.dimension() || b.dimension() != c.dimension()) {
    throw ValidationError("probe_matrix_segment: T dimension does not match the constellation");
  }
  auto t = uniform_grid(0.0, 1.0, grid);
  std::vector<Point> points;
  for (double s : t) {
    Matrix m = (1.0 - s) * a.matrix() + s * b.matrix();
    m = (0.5 * (m + m.transpose())).eval();
    points.push_back(entropy_power_at(ChannelModel(c, MatrixScaling::from_matrix(m)), cfg));
  }
  auto p = finish(ProbeKind::matrix, std::move(t), points);
  p.t_a = a.matrix();
  p.t_b = b.matrix();
  return p;
}

MatrixSearchReport search_matrix_counterexamples(const Constellation& c, int pairs,
                                                 std::uint64_t seed, int grid,
                                                 const IntegratorConfig& cfg) {
  if (pairs < 1) throw ValidationError("matrix search: pairs must be >= 1");
  const int n = c.dimension();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> power(0.25, 4.0);
  auto draw = [&](int index) {
    const std::uint64_t s = rng();
    Matrix m = index % 2 == 0 ? random_psd(n, s) : random_psd_of_rank(n, 1, s);
    const double tr = m.trace();
    return Matrix(m * (power(rng) * n / (tr > 0.0 ? tr : 1.0)));
  };
  MatrixSearchReport report;
  report.best_excess = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < pairs; ++k) {
    const Matrix ta = draw(k);
    const Matrix tb = draw(k);
    auto probe = probe_matrix_segment(c, ta, tb, grid, cfg);
    report.best_excess = std::max(report.best_excess, probe.max_excess);
    if (probe.violation && !report.found) {
      report.found = true;
      report.first_violation = k;
    }
    report.probes.push_back(std::move(probe));
  }
  return report;
}

}  // namespace eplab
