#include "eplab/mmse.hpp"

#include "eplab/linalg.hpp"

#include <vector>

namespace eplab {

namespace {

// Per-node scratch for the integrands; sized once per integration.
struct PosteriorWorkspace {
  explicit PosteriorWorkspace(const Constellation& c)
      : n(c.dimension()),
        k(c.size()),
        points(c.points().data()),
        resp(static_cast<std::size_t>(k)),
        mean(static_cast<std::size_t>(n)),
        centered(static_cast<std::size_t>(n)),
        phi(static_cast<std::size_t>(packed_size(n))) {}

  // Fills resp, mean and packed Φ from the responsibilities already in resp.
  void accumulate_moments() {
    std::fill(mean.begin(), mean.end(), 0.0);
    std::fill(phi.begin(), phi.end(), 0.0);
    for (int c = 0; c < k; ++c) {
      const double r = resp[static_cast<std::size_t>(c)];
      if (r == 0.0) continue;
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
        const double ri = r * centered[static_cast<std::size_t>(i)];
        for (int j = i; j < n; ++j, ++idx) {
          phi[static_cast<std::size_t>(idx)] += ri * centered[static_cast<std::size_t>(j)];
        }
      }
    }
  }

  int n;
  int k;
  const double* points;
  std::vector<double> resp;
  std::vector<double> mean;
  std::vector<double> centered;
  std::vector<double> phi;
};

}  // namespace

Vector posterior_responsibilities(const ChannelModel& model, const Vector& y) {
  return model.mixture().responsibilities(y);
}

ConditionalMoments conditional_moments(const ChannelModel& model, const Vector& y) {
  ConditionalMoments m;
  m.responsibilities = posterior_responsibilities(model, y);
  const Matrix& x = model.constellation().points();
  m.cond_mean = x * m.responsibilities;
  m.cond_second_moment = x * m.responsibilities.asDiagonal() * x.transpose();
  const Matrix centered = x.colwise() - m.cond_mean;
  m.phi = centered * m.responsibilities.asDiagonal() * centered.transpose();
  m.phi = (0.5 * (m.phi + m.phi.transpose())).eval();
  return m;
}

ChannelExpectations integrate_channel(const ChannelModel& model, const IntegratorConfig& cfg) {
  const int n = model.dimension();
  const int t = packed_size(n);
  const int width = 1 + 2 * t;
  const auto& mix = model.mixture();
  PosteriorWorkspace ws(model.constellation());

  // Layout: [−log f, packed Φ, packed Φ∘Φ].
  auto integrand = [&](const double* y, double* out) {
    out[0] = -mix.log_density_and_responsibilities(y, ws.resp.data());
    ws.accumulate_moments();
    for (int p = 0; p < t; ++p) {
      const double v = ws.phi[static_cast<std::size_t>(p)];
      out[1 + p] = v;
      out[1 + t + p] = v * v;
    }
  };
  const Expectation e = expect(mix, cfg, width, integrand);

  ChannelExpectations r;
  r.dimension = n;
  r.entropy = e.values[0];
  r.entropy_error = e.errors[0];
  r.mmse = unpack_symmetric(e.values.data() + 1, n);
  r.mmse_error = unpack_symmetric(e.errors.data() + 1, n);
  r.phi_hadamard = unpack_symmetric(e.values.data() + 1 + t, n);
  r.phi_hadamard_error = unpack_symmetric(e.errors.data() + 1 + t, n);
  r.error_estimated = e.error_estimated;
  r.tolerance_met = e.tolerance_met;
  r.evaluations = e.evaluations;
  return r;
}

MmseSummary mmse_matrix(const ChannelModel& model, const IntegratorConfig& cfg) {
  const auto ex = integrate_channel(model, cfg);
  MmseSummary s;
  s.e_matrix = ex.mmse;
  s.diag_e = ex.mmse.diagonal();
  s.integration_error = ex.mmse_error;
  s.tolerance_met = ex.tolerance_met;
  return s;
}

}  // namespace eplab
