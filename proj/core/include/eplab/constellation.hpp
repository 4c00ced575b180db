#pragma once

#include "eplab/common.hpp"
#include "eplab/mixture.hpp"

#include <cstdint>
#include <variant>
#include <vector>

namespace eplab {

/// Finite-support law of the input X: K atoms in ℝⁿ with probabilities.
/// Duplicate atoms are kept as distinct entries.
class Constellation {
 public:
  /// `points` is n×K (one atom per column). Probabilities must be nonnegative
  /// and sum to 1; a sum off by at most 1e-9 is renormalized, anything larger
  /// is rejected.
  Constellation(Matrix points, Vector probs);

  static Constellation deterministic(const Vector& point);
  /// Equiprobable, zero-mean, unit-power pulse-amplitude constellation.
  static Constellation pam(int levels);
  static Constellation bpsk() { return pam(2); }
  /// Gauss–Hermite atoms and weights of a standard normal.
  static Constellation discretized_gaussian(int atoms);
  /// Law of (A, B) with independent components; dimension n_a + n_b.
  static Constellation product(const Constellation& a, const Constellation& b);

  int dimension() const { return static_cast<int>(points_.rows()); }
  int size() const { return static_cast<int>(points_.cols()); }
  const Matrix& points() const { return points_; }
  const Vector& probs() const { return probs_; }

  Vector mean() const;
  Matrix covariance() const;

 private:
  Matrix points_;
  Vector probs_;
};

/// Builds a Constellation from row lists; throws ValidationError on dimension
/// mismatch, negative or non-finite entries, or a probability sum off by > 1e-9.
Constellation validate_constellation(const std::vector<std::vector<double>>& points,
                                     const std::vector<double>& probs);

/// Seeded random constellation: standard-normal atoms, probabilities from
/// normalized Exp(1) draws.
Constellation random_constellation(int dimension, int atoms, std::uint64_t seed);

/// Diagonal per-component powers λ (the diagonal of Λ).
class ScalingVector {
 public:
  explicit ScalingVector(Vector lambda);

  int dimension() const { return static_cast<int>(lambda_.size()); }
  const Vector& values() const { return lambda_; }
  double operator[](int i) const { return lambda_(i); }
  Vector sqrt_values() const { return lambda_.cwiseSqrt(); }
  bool strictly_positive() const { return (lambda_.array() > 0.0).all(); }

 private:
  Vector lambda_;
};

/// Full PSD scaling T together with a factor A satisfying AAᵀ = T.
class MatrixScaling {
 public:
  /// Validates symmetry, positive semidefiniteness and the factorization.
  MatrixScaling(Matrix t, Matrix factor);

  /// Uses the symmetric PSD root as the factor.
  static MatrixScaling from_matrix(const Matrix& t);
  static MatrixScaling from_factor(const Matrix& factor);

  int dimension() const { return static_cast<int>(t_.rows()); }
  const Matrix& matrix() const { return t_; }
  const Matrix& factor() const { return factor_; }

 private:
  Matrix t_;
  Matrix factor_;
};

using Scaling = std::variant<ScalingVector, MatrixScaling>;

/// Y = A X + W with W ~ 𝒩(0, I) and A = Λ^{1/2} (entrywise root of λ) or the
/// MatrixScaling factor. Y is exactly the Gaussian mixture with means A x_k.
class ChannelModel {
 public:
  ChannelModel(Constellation constellation, ScalingVector scaling);
  ChannelModel(Constellation constellation, MatrixScaling scaling);

  int dimension() const { return constellation_.dimension(); }
  const Constellation& constellation() const { return constellation_; }
  const Scaling& scaling() const { return scaling_; }
  /// Null when the model uses a MatrixScaling.
  const ScalingVector* diagonal_scaling() const { return std::get_if<ScalingVector>(&scaling_); }
  /// Throws ValidationError unless the model uses a ScalingVector.
  const ScalingVector& require_diagonal(const char* what) const;

  Matrix mixing_matrix() const;
  const GaussianMixture& mixture() const { return mixture_; }

 private:
  static GaussianMixture build_mixture(const Constellation& c, const Matrix& mixing);

  Constellation constellation_;
  Scaling scaling_;
  GaussianMixture mixture_;
};

double mixture_log_density(const ChannelModel& model, const Vector& y);

/// ∇_y log f_Y(y) = E[AX | y] − y.
Vector score(const ChannelModel& model, const Vector& y);

/// ∇²_y log f_Y(y) = Cov[AX | y] − I.
Matrix log_density_hessian(const ChannelModel& model, const Vector& y);

/// I.i.d. draws of Y. Draw i consumes, from one std::mt19937_64 seeded with
/// `seed`, a uniform in [0,1) that picks the atom by inverse CDF and then n
/// std::normal_distribution values for W. Reproducible for a given build.
std::vector<Vector> sample_outputs(const ChannelModel& model, std::int64_t count,
                                   std::uint64_t seed);

}  // namespace eplab
