#include "eplab/mixture.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace eplab {

GaussianMixture::GaussianMixture(Matrix means, const Vector& probs, Vector noise_variance)
    : means_(std::move(means)), probs_(probs), noise_variance_(std::move(noise_variance)) {
  const long n = means_.rows();
  const long k = means_.cols();
  if (n < 1 || k < 1) throw ValidationError("GaussianMixture: empty means");
  if (probs_.size() != k) throw ValidationError("GaussianMixture: probs size mismatch");
  if (noise_variance_.size() != n) {
    throw ValidationError("GaussianMixture: noise variance size mismatch");
  }
  if (!means_.allFinite()) throw ValidationError("GaussianMixture: non-finite mean");
  for (long i = 0; i < n; ++i) {
    const double v = noise_variance_(i);
    if (!(std::isfinite(v) && v > 0.0)) {
      throw ValidationError("GaussianMixture: noise variances must be finite and positive");
    }
  }
  inv_variance_ = noise_variance_.cwiseInverse();
  log_normalizer_ = 0.0;
  for (long i = 0; i < n; ++i) {
    log_normalizer_ -= 0.5 * std::log(2.0 * std::numbers::pi * noise_variance_(i));
  }
  for (long c = 0; c < k; ++c) {
    if (!(std::isfinite(probs_(c)) && probs_(c) >= 0.0)) {
      throw ValidationError("GaussianMixture: invalid weight at component " + std::to_string(c));
    }
    if (probs_(c) > 0.0) {
      active_.push_back(static_cast<int>(c));
      log_weights_.push_back(std::log(probs_(c)));
    }
  }
  if (active_.empty()) throw ValidationError("GaussianMixture: all weights are zero");
}

double GaussianMixture::log_density_and_responsibilities(const double* y, double* resp) const {
  const int n = dimension();
  const int k = components();
  const double* inv_var = inv_variance_.data();
  for (int c = 0; c < k; ++c) resp[c] = 0.0;

  // First pass stores exponents in resp; second pass normalizes.
  double max_exponent = -std::numeric_limits<double>::infinity();
  const std::size_t active = active_.size();
  for (std::size_t a = 0; a < active; ++a) {
    const int c = active_[a];
    const double* m = means_.data() + static_cast<std::ptrdiff_t>(c) * n;
    double q = 0.0;
    for (int i = 0; i < n; ++i) {
      const double d = y[i] - m[i];
      q += d * d * inv_var[i];
    }
    const double e = log_weights_[a] - 0.5 * q;
    resp[c] = e;
    if (e > max_exponent) max_exponent = e;
  }
  double total = 0.0;
  for (std::size_t a = 0; a < active; ++a) {
    const int c = active_[a];
    const double w = std::exp(resp[c] - max_exponent);
    resp[c] = w;
    total += w;
  }
  const double inv_total = 1.0 / total;
  for (std::size_t a = 0; a < active; ++a) resp[active_[a]] *= inv_total;
  return max_exponent + std::log(total) + log_normalizer_;
}

void GaussianMixture::check_point(const Vector& y) const {
  if (y.size() != dimension()) throw ValidationError("GaussianMixture: point has wrong dimension");
  if (!y.allFinite()) throw ValidationError("GaussianMixture: point is not finite");
}

double GaussianMixture::log_density(const Vector& y) const {
  check_point(y);
  std::vector<double> resp(static_cast<std::size_t>(components()));
  return log_density_and_responsibilities(y.data(), resp.data());
}

Vector GaussianMixture::responsibilities(const Vector& y) const {
  check_point(y);
  Vector resp(components());
  log_density_and_responsibilities(y.data(), resp.data());
  return resp;
}

Vector GaussianMixture::score(const Vector& y) const {
  const Vector r = responsibilities(y);
  const Vector mean = means_ * r;
  return (mean - y).cwiseProduct(inv_variance_);
}

Matrix GaussianMixture::log_density_hessian(const Vector& y) const {
  const Vector r = responsibilities(y);
  const Vector mean = means_ * r;
  const Matrix centered = means_.colwise() - mean;
  const Matrix cov = centered * r.asDiagonal() * centered.transpose();
  Matrix h = inv_variance_.asDiagonal() * cov * inv_variance_.asDiagonal();
  h.diagonal() -= inv_variance_;
  return 0.5 * (h + h.transpose());
}

}  // namespace eplab
