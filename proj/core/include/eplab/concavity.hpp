#pragma once

#include "eplab/common.hpp"
#include "eplab/constellation.hpp"
#include "eplab/quadrature.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace eplab {

enum class ProbeKind { diagonal, scalar_signal, scalar_noise, matrix, synthetic };
std::string_view to_string(ProbeKind kind);

/// Second differences are flagged when d2_i > kViolationFactor · (e_{i−1} + 2e_i + e_{i+1}).
inline constexpr double kViolationFactor = 4.0;

/// N evaluated along a one-parameter path t ↦ N(t) on a uniform grid.
struct SegmentProbe {
  ProbeKind kind = ProbeKind::synthetic;
  // Endpoints of the path: diagonal λ vectors or T matrices. Scalar probes
  // store λ₀ in `lambda_a` and leave `lambda_b` empty.
  Vector lambda_a;
  Vector lambda_b;
  Matrix t_a;
  Matrix t_b;

  std::vector<double> t;
  std::vector<double> values;
  std::vector<double> errors;
  // Indexed like `t`; the two endpoints have no centered difference and
  // hold NaN.
  std::vector<double> second_differences;
  std::vector<double> thresholds;

  double min_second_difference = 0.0;
  double max_second_difference = 0.0;
  /// max_i (d2_i − threshold_i); positive iff a violation was flagged.
  double max_excess = 0.0;
  bool violation = false;
  std::optional<int> violation_index;  // largest excess
  bool tolerance_met = true;

  int grid_size() const { return static_cast<int>(t.size()); }
};

/// Fills the second differences, thresholds and violation verdict of a probe
/// from (t, values, errors). Errors are floored at 16ε · max|values| so that
/// exact arithmetic noise never reads as curvature.
SegmentProbe detect_concavity_violations(std::vector<double> t, std::vector<double> values,
                                         std::vector<double> errors,
                                         double factor = kViolationFactor);

/// t_i = lo + (hi − lo) i/(grid − 1), with the last node exactly hi.
std::vector<double> uniform_grid(double lo, double hi, int grid);

/// t ↦ N((1 − t)λ_a + tλ_b), t ∈ [0, 1].
SegmentProbe probe_diagonal_segment(const Constellation& c, const Vector& lambda_a,
                                    const Vector& lambda_b, int grid, const IntegratorConfig& cfg);

enum class CostaMode { signal, noise };

/// Signal mode: t ↦ N((tΛ₀)^{1/2} X + W). Noise mode: t ↦ N(Λ₀^{1/2} X + √t W),
/// evaluated as t · N((Λ₀/t)^{1/2} X + W); requires t_min ≥ 1e-3.
SegmentProbe probe_scalar_costa(const Constellation& c, const Vector& lambda0, CostaMode mode,
                                double t_min, double t_max, int grid, const IntegratorConfig& cfg);

/// t ↦ N(T(t)^{1/2} X + W) for T(t) = (1 − t)T_a + tT_b, with the symmetric
/// root recomputed at every grid point.
SegmentProbe probe_matrix_segment(const Constellation& c, const Matrix& t_a, const Matrix& t_b,
                                  int grid, const IntegratorConfig& cfg);

struct MatrixSearchReport {
  std::vector<SegmentProbe> probes;  // one per endpoint pair, in draw order
  bool found = false;
  std::optional<int> first_violation;
  double best_excess = 0.0;  // largest max_excess over all pairs
};

/// Seeded search over random non-commuting PSD endpoint pairs. Even-numbered
/// pairs use full-rank endpoints, odd-numbered pairs rank-one endpoints.
MatrixSearchReport search_matrix_counterexamples(const Constellation& c, int pairs,
                                                 std::uint64_t seed, int grid,
                                                 const IntegratorConfig& cfg);

}  // namespace eplab
