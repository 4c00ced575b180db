#include "eplab/constellation.hpp"

#include "eplab/linalg.hpp"
#include "eplab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace eplab {

namespace {

constexpr double kRenormalizeTolerance = 1e-9;

}  // namespace

Constellation::Constellation(Matrix points, Vector probs)
    : points_(std::move(points)), probs_(std::move(probs)) {
  if (points_.cols() < 1 || points_.rows() < 1) {
    throw ValidationError("constellation: need at least one atom of dimension >= 1");
  }
  if (probs_.size() != points_.cols()) {
    throw ValidationError("constellation: " + std::to_string(points_.cols()) + " points but " +
                          std::to_string(probs_.size()) + " probabilities");
  }
  if (!points_.allFinite()) throw ValidationError("constellation: non-finite point coordinate");
  for (long k = 0; k < probs_.size(); ++k) {
    if (!std::isfinite(probs_(k))) throw ValidationError("constellation: non-finite probability");
    if (probs_(k) < 0.0) {
      throw ValidationError("constellation: negative probability at atom " + std::to_string(k));
    }
  }
  const double sum = probs_.sum();
  if (std::abs(sum - 1.0) > kRenormalizeTolerance) {
    throw ValidationError("constellation: probabilities sum to " + std::to_string(sum));
  }
  probs_ /= sum;
}

Constellation Constellation::deterministic(const Vector& point) {
  Matrix pts(point.size(), 1);
  pts.col(0) = point;
  return Constellation(std::move(pts), Vector::Ones(1));
}

Constellation Constellation::pam(int levels) {
  if (levels < 1) throw ValidationError("pam: need at least one level");
  Matrix pts(1, levels);
  double power = 0.0;
  for (int k = 0; k < levels; ++k) {
    pts(0, k) = 2.0 * k - (levels - 1);
    power += pts(0, k) * pts(0, k);
  }
  power /= levels;
  if (power > 0.0) pts /= std::sqrt(power);
  return Constellation(std::move(pts), Vector::Constant(levels, 1.0 / levels));
}

Constellation Constellation::discretized_gaussian(int atoms) {
  const auto rule = gauss_hermite(atoms);
  Matrix pts(1, atoms);
  Vector probs(atoms);
  for (int k = 0; k < atoms; ++k) {
    pts(0, k) = rule.nodes[static_cast<std::size_t>(k)];
    probs(k) = rule.weights[static_cast<std::size_t>(k)];
  }
  return Constellation(std::move(pts), std::move(probs));
}

Constellation Constellation::product(const Constellation& a, const Constellation& b) {
  const int na = a.dimension();
  const int nb = b.dimension();
  Matrix pts(na + nb, a.size() * b.size());
  Vector probs(a.size() * b.size());
  int col = 0;
  for (int i = 0; i < a.size(); ++i) {
    for (int j = 0; j < b.size(); ++j, ++col) {
      pts.col(col).head(na) = a.points().col(i);
      pts.col(col).tail(nb) = b.points().col(j);
      probs(col) = a.probs()(i) * b.probs()(j);
    }
  }
  return Constellation(std::move(pts), std::move(probs));
}

Vector Constellation::mean() const { return points_ * probs_; }

Matrix Constellation::covariance() const {
  const Matrix centered = points_.colwise() - mean();
  return centered * probs_.asDiagonal() * centered.transpose();
}

Constellation validate_constellation(const std::vector<std::vector<double>>& points,
                                     const std::vector<double>& probs) {
  if (points.empty()) throw ValidationError("constellation: no points");
  if (points.size() != probs.size()) {
    throw ValidationError("constellation: " + std::to_string(points.size()) + " points but " +
                          std::to_string(probs.size()) + " probabilities");
  }
  const std::size_t n = points.front().size();
  if (n == 0) throw ValidationError("constellation: points must have dimension >= 1");
  Matrix pts(static_cast<long>(n), static_cast<long>(points.size()));
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (points[k].size() != n) {
      throw ValidationError("constellation: point " + std::to_string(k) + " has dimension " +
                            std::to_string(points[k].size()) + ", expected " + std::to_string(n));
    }
    for (std::size_t i = 0; i < n; ++i) {
      pts(static_cast<long>(i), static_cast<long>(k)) = points[k][i];
    }
  }
  Vector p = Eigen::Map<const Vector>(probs.data(), static_cast<long>(probs.size()));
  return Constellation(std::move(pts), std::move(p));
}

Constellation random_constellation(int dimension, int atoms, std::uint64_t seed) {
  if (dimension < 1 || atoms < 1) throw ValidationError("random_constellation: bad shape");
  std::mt19937_64 rng(seed);
  Matrix pts = gaussian_matrix(dimension, atoms, rng);
  std::exponential_distribution<double> expo(1.0);
  Vector probs(atoms);
  for (int k = 0; k < atoms; ++k) probs(k) = expo(rng) + 1e-3;
  probs /= probs.sum();
  return Constellation(std::move(pts), std::move(probs));
}

ScalingVector::ScalingVector(Vector lambda) : lambda_(std::move(lambda)) {
  if (lambda_.size() < 1) throw ValidationError("scaling: empty lambda");
  for (long i = 0; i < lambda_.size(); ++i) {
    if (!std::isfinite(lambda_(i)) || lambda_(i) < 0.0) {
      throw ValidationError("scaling: lambda entries must be finite and nonnegative (entry " +
                            std::to_string(i) + ")");
    }
  }
}

MatrixScaling::MatrixScaling(Matrix t, Matrix factor) : t_(std::move(t)), factor_(std::move(factor)) {
  if (t_.rows() < 1 || t_.rows() != t_.cols()) throw ValidationError("matrix scaling: T not square");
  if (factor_.rows() != t_.rows() || factor_.cols() != t_.cols()) {
    throw ValidationError("matrix scaling: factor shape mismatch");
  }
  if (!t_.allFinite() || !factor_.allFinite()) {
    throw ValidationError("matrix scaling: non-finite entries");
  }
  if (!is_symmetric(t_, 1e-12)) throw ValidationError("matrix scaling: T is not symmetric");
  const double norm = spectral_norm(t_);
  if (min_eigenvalue(t_) < -1e-10 * norm) {
    throw ValidationError("matrix scaling: T is not positive semidefinite");
  }
  const double recon = (factor_ * factor_.transpose() - t_).cwiseAbs().maxCoeff();
  if (recon > 1e-10 * std::max(norm, 1e-300) && recon > 0.0) {
    throw ValidationError("matrix scaling: factor does not reproduce T");
  }
}

MatrixScaling MatrixScaling::from_matrix(const Matrix& t) {
  Matrix root = symmetric_psd_root(t);
  // Rebuild T from the root so the factorization invariant holds exactly up
  // to rounding even when tiny negative eigenvalues were clamped.
  Matrix rebuilt = root * root.transpose();
  rebuilt = (0.5 * (rebuilt + rebuilt.transpose())).eval();
  return MatrixScaling(std::move(rebuilt), std::move(root));
}

MatrixScaling MatrixScaling::from_factor(const Matrix& factor) {
  Matrix t = factor * factor.transpose();
  t = (0.5 * (t + t.transpose())).eval();
  return MatrixScaling(std::move(t), factor);
}

ChannelModel::ChannelModel(Constellation constellation, ScalingVector scaling)
    : constellation_(std::move(constellation)),
      scaling_(std::move(scaling)),
      mixture_(build_mixture(constellation_, mixing_matrix())) {}

ChannelModel::ChannelModel(Constellation constellation, MatrixScaling scaling)
    : constellation_(std::move(constellation)),
      scaling_(std::move(scaling)),
      mixture_(build_mixture(constellation_, mixing_matrix())) {}

Matrix ChannelModel::mixing_matrix() const {
  const int n = constellation_.dimension();
  Matrix a;
  if (const auto* diag = std::get_if<ScalingVector>(&scaling_)) {
    if (diag->dimension() != n) throw ValidationError("channel: lambda length does not match n");
    a = diag->sqrt_values().asDiagonal();
  } else {
    const auto& full = std::get<MatrixScaling>(scaling_);
    if (full.dimension() != n) throw ValidationError("channel: T dimension does not match n");
    a = full.factor();
  }
  return a;
}

const ScalingVector& ChannelModel::require_diagonal(const char* what) const {
  const auto* diag = diagonal_scaling();
  if (diag == nullptr) {
    throw ValidationError(std::string(what) + ": requires a diagonal (lambda) scaling");
  }
  return *diag;
}

GaussianMixture ChannelModel::build_mixture(const Constellation& c, const Matrix& mixing) {
  return GaussianMixture(mixing * c.points(), c.probs(), Vector::Ones(c.dimension()));
}

double mixture_log_density(const ChannelModel& model, const Vector& y) {
  return model.mixture().log_density(y);
}

Vector score(const ChannelModel& model, const Vector& y) { return model.mixture().score(y); }

Matrix log_density_hessian(const ChannelModel& model, const Vector& y) {
  return model.mixture().log_density_hessian(y);
}

std::vector<Vector> sample_outputs(const ChannelModel& model, std::int64_t count,
                                   std::uint64_t seed) {
  if (count < 1) throw ValidationError("sample_outputs: count must be >= 1");
  const auto& mix = model.mixture();
  const int n = mix.dimension();
  std::vector<double> cdf(static_cast<std::size_t>(mix.components()));
  double acc = 0.0;
  for (int k = 0; k < mix.components(); ++k) {
    acc += mix.probs()(k);
    cdf[static_cast<std::size_t>(k)] = acc;
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Vector> out;
  out.reserve(static_cast<std::size_t>(count));
  for (std::int64_t s = 0; s < count; ++s) {
    const double u = uniform(rng) * acc;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) --it;
    const long k = it - cdf.begin();
    Vector y = mix.means().col(k);
    for (int i = 0; i < n; ++i) y(i) += normal(rng);
    out.push_back(std::move(y));
  }
  return out;
}

}  // namespace eplab
