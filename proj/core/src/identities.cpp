#include "eplab/identities.hpp"

#include "eplab/entropy.hpp"
#include "eplab/finite_difference.hpp"
#include "eplab/linalg.hpp"
#include "eplab/mmse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace eplab {

namespace {

// Floating-point floor for comparisons between two integrations whose own
// error estimates can round to zero (e.g. Gaussian integrands).
constexpr double kRoundingFloor = 1e-12;

const ScalingVector& positive_lambda(const ChannelModel& model, const char* what) {
  const auto& lambda = model.require_diagonal(what);
  if (!lambda.strictly_positive()) {
    throw ValidationError(std::string(what) + ": every lambda entry must be > 0");
  }
  return lambda;
}

}  // namespace

ReciprocalView::ReciprocalView(Constellation constellation, Vector gamma)
    : constellation_(std::move(constellation)),
      gamma_(std::move(gamma)),
      z_law_(constellation_.points(), constellation_.probs(), gamma_) {
  if (gamma_.size() != constellation_.dimension()) {
    throw ValidationError("reciprocal view: gamma length does not match n");
  }
}

ReciprocalView ReciprocalView::from_model(const ChannelModel& model) {
  const auto& lambda = positive_lambda(model, "reciprocal view");
  return ReciprocalView(model.constellation(), lambda.values().cwiseInverse());
}

ReciprocalView::Expectations ReciprocalView::integrate(const IntegratorConfig& cfg) const {
  const int n = constellation_.dimension();
  const int k = constellation_.size();
  const int t = packed_size(n);
  const int width = 1 + n + t;
  const double* points = constellation_.points().data();
  const Vector inv_gamma = gamma_.cwiseInverse();
  std::vector<double> resp(static_cast<std::size_t>(k));
  std::vector<double> mean(static_cast<std::size_t>(n));
  std::vector<double> centered(static_cast<std::size_t>(n));
  std::vector<double> cov(static_cast<std::size_t>(t));

  // Layout: [−log f_Z, score_i², (∂²log f_Z)_ij² packed].
  auto integrand = [&](const double* z, double* out) {
    out[0] = -z_law_.log_density_and_responsibilities(z, resp.data());
    std::fill(mean.begin(), mean.end(), 0.0);
    std::fill(cov.begin(), cov.end(), 0.0);
    for (int c = 0; c < k; ++c) {
      const double r = resp[static_cast<std::size_t>(c)];
      const double* x = points + static_cast<std::ptrdiff_t>(c) * n;
      for (int i = 0; i < n; ++i) mean[static_cast<std::size_t>(i)] += r * x[i];
    }
    for (int c = 0; c < k; ++c) {
      const double r = resp[static_cast<std::size_t>(c)];
      if (r == 0.0) continue;
      const double* x = points + static_cast<std::ptrdiff_t>(c) * n;
      for (int i = 0; i < n; ++i) {
        centered[static_cast<std::size_t>(i)] = x[i] - mean[static_cast<std::size_t>(i)];
      }
      int idx = 0;
      for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j, ++idx) {
          cov[static_cast<std::size_t>(idx)] +=
              r * centered[static_cast<std::size_t>(i)] * centered[static_cast<std::size_t>(j)];
        }
      }
    }
    for (int i = 0; i < n; ++i) {
      const double s = (mean[static_cast<std::size_t>(i)] - z[i]) * inv_gamma(i);
      out[1 + i] = s * s;
    }
    int idx = 0;
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j, ++idx) {
        double h = cov[static_cast<std::size_t>(idx)] * inv_gamma(i) * inv_gamma(j);
        if (i == j) h -= inv_gamma(i);
        out[1 + n + idx] = h * h;
      }
    }
  };
  const Expectation e = expect(z_law_, cfg, width, integrand);

  Expectations r;
  r.entropy = e.values[0];
  r.entropy_error = e.errors[0];
  r.fisher.resize(n);
  r.fisher_error.resize(n);
  for (int i = 0; i < n; ++i) {
    r.fisher(i) = 0.5 * e.values[static_cast<std::size_t>(1 + i)];
    r.fisher_error(i) = 0.5 * e.errors[static_cast<std::size_t>(1 + i)];
  }
  r.gamma_hessian = -0.5 * unpack_symmetric(e.values.data() + 1 + n, n);
  r.gamma_hessian_error = 0.5 * unpack_symmetric(e.errors.data() + 1 + n, n);
  r.tolerance_met = e.tolerance_met;
  return r;
}

ReciprocalIdentityResult reciprocal_identity_check(const ChannelModel& model,
                                                   const IntegratorConfig& cfg) {
  const auto& lambda = positive_lambda(model, "reciprocal_identity_check");
  const auto view = ReciprocalView::from_model(model);
  const auto y_side = integrate_channel(model, cfg);
  const auto z_side = view.integrate(cfg);

  ReciprocalIdentityResult r;
  r.entropy_y = y_side.entropy;
  r.entropy_z = z_side.entropy;
  r.half_log_det = 0.5 * lambda.values().array().log().sum();
  const double scale = std::max(1.0, std::abs(r.entropy_y));
  r.residual = std::abs(r.entropy_y - (r.entropy_z + r.half_log_det)) / scale;
  r.bound = 3.0 * (y_side.entropy_error + z_side.entropy_error) / scale + kRoundingFloor;
  r.pass = r.residual <= r.bound;
  return r;
}

DeBruijnResult de_bruijn_check(const ChannelModel& model, const IntegratorConfig& cfg) {
  positive_lambda(model, "de_bruijn_check");
  const auto view = ReciprocalView::from_model(model);
  const int n = model.dimension();
  const auto center = view.integrate(cfg);
  const auto quiet = cfg.without_error_estimate();

  DeBruijnResult r;
  r.finite_difference.resize(n);
  r.fisher_side = center.fisher;
  r.residual.resize(n);
  r.bound.resize(n);
  for (int i = 0; i < n; ++i) {
    auto entropy_at = [&](const Vector& gamma) {
      return ReciprocalView(model.constellation(), gamma).integrate(quiet).entropy;
    };
    r.finite_difference(i) = partial_derivative(entropy_at, view.gamma(), i);
    r.residual(i) = std::abs(r.finite_difference(i) - r.fisher_side(i));
    r.bound(i) = std::max(1e-4, 3.0 * center.fisher_error(i));
  }
  r.pass = (r.residual.array() <= r.bound.array()).all();
  return r;
}

Vector score_via_posterior_mean(const ChannelModel& model, const Vector& z) {
  const auto& lambda = positive_lambda(model, "score_via_posterior_mean");
  const Vector y = lambda.sqrt_values().cwiseProduct(z);
  const auto moments = conditional_moments(model, y);
  return (moments.cond_mean - z).cwiseProduct(lambda.values());
}

ScoreIdentityResult score_identity_check(const ChannelModel& model, const IntegratorConfig& cfg,
                                         int points) {
  const auto& lambda = positive_lambda(model, "score_identity_check");
  if (points < 1) throw ValidationError("score_identity_check: need at least one point");
  const auto view = ReciprocalView::from_model(model);
  const Vector inv_root = lambda.sqrt_values().cwiseInverse();
  ScoreIdentityResult r;
  r.points = points;
  for (const auto& y : sample_outputs(model, points, cfg.seed)) {
    const Vector z = inv_root.cwiseProduct(y);
    const Vector direct = view.score(z);
    const Vector via_mean = score_via_posterior_mean(model, z);
    const double scale = std::max(1.0, direct.cwiseAbs().maxCoeff());
    r.max_residual = std::max(r.max_residual, (direct - via_mean).cwiseAbs().maxCoeff() / scale);
  }
  r.pass = r.max_residual <= 1e-10;
  return r;
}

GammaHessianResult hessian_gamma_check(const ChannelModel& model, const IntegratorConfig& cfg) {
  const auto& lambda = positive_lambda(model, "hessian_gamma_check");
  const int n = model.dimension();
  const auto view = ReciprocalView::from_model(model);
  const auto z_side = view.integrate(cfg);
  const auto y_side = integrate_channel(model, cfg);
  const Vector& l = lambda.values();

  GammaHessianResult r;
  r.gamma_gradient = z_side.fisher;
  r.gamma_hessian = z_side.gamma_hessian;
  r.direct = -0.5 * y_side.phi_hadamard;
  r.via_gamma.resize(n, n);
  Matrix error(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double scale = 1.0 / (l(i) * l(i) * l(j) * l(j));
      double v = scale * z_side.gamma_hessian(i, j);
      double e = scale * z_side.gamma_hessian_error(i, j) + 0.5 * y_side.phi_hadamard_error(i, j);
      if (i == j) {
        v += 2.0 * z_side.fisher(i) / (l(i) * l(i) * l(i)) - 0.5 / (l(i) * l(i));
        e += 2.0 * z_side.fisher_error(i) / (l(i) * l(i) * l(i));
      }
      r.via_gamma(i, j) = v;
      error(i, j) = e;
    }
  }
  const double scale = std::max(1.0, r.direct.cwiseAbs().maxCoeff());
  r.residual = (r.via_gamma - r.direct).cwiseAbs().maxCoeff() / scale;
  r.bound = std::max(1e-3, 3.0 * error.maxCoeff() / scale);
  r.pass = r.residual <= r.bound;
  return r;
}

}  // namespace eplab
