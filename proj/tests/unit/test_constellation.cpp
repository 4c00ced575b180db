#include "eplab/constellation.hpp"
#include "eplab/entropy.hpp"
#include "eplab/linalg.hpp"
#include "eplab/quadrature.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace eplab;

namespace {

ChannelModel scalar_model(const Constellation& c, double lambda) {
  return ChannelModel(c, ScalingVector(Vector::Constant(1, lambda)));
}

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<long>(v.size()));
  long i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

}  // namespace

TEST_CASE("validate_constellation accepts well-formed inputs") {
  const auto bpsk = validate_constellation({{1.0}, {-1.0}}, {0.5, 0.5});
  CHECK(bpsk.dimension() == 1);
  CHECK(bpsk.size() == 2);

  const auto point = validate_constellation({{0.0, 0.0}}, {1.0});
  CHECK(point.dimension() == 2);
  CHECK(point.size() == 1);

  // Duplicates stay as separate atoms.
  const auto dup = validate_constellation({{1.0}, {1.0}}, {0.25, 0.75});
  CHECK(dup.size() == 2);
}

TEST_CASE("validate_constellation rejects malformed inputs") {
  CHECK_THROWS_AS(validate_constellation({{1.0}, {-1.0}}, {0.6, 0.6}), ValidationError);
  CHECK_THROWS_AS(validate_constellation({{1.0}, {-1.0, 2.0}}, {0.5, 0.5}), ValidationError);
  CHECK_THROWS_AS(validate_constellation({{1.0}, {-1.0}}, {1.5, -0.5}), ValidationError);
  CHECK_THROWS_AS(validate_constellation({{NAN}}, {1.0}), ValidationError);
  CHECK_THROWS_AS(validate_constellation({{1.0}}, {INFINITY}), ValidationError);
  CHECK_THROWS_AS(validate_constellation({}, {}), ValidationError);
  CHECK_THROWS_AS(validate_constellation({{1.0}}, {0.5, 0.5}), ValidationError);
}

TEST_CASE("probabilities off by at most 1e-9 are renormalized") {
  const auto c = validate_constellation({{1.0}, {-1.0}}, {0.5 + 4e-10, 0.5});
  CHECK(c.probs().sum() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(validate_constellation({{1.0}, {-1.0}}, {0.5 + 1e-8, 0.5}), ValidationError);
}

TEST_CASE("standard constellations") {
  const auto pam4 = Constellation::pam(4);
  CHECK(std::abs(pam4.mean()(0)) < 1e-15);
  CHECK(pam4.covariance()(0, 0) == doctest::Approx(1.0).epsilon(1e-14));

  const auto b = Constellation::bpsk();
  CHECK(b.points().minCoeff() == -1.0);
  CHECK(b.points().maxCoeff() == 1.0);

  const auto g = Constellation::discretized_gaussian(64);
  CHECK(g.size() == 64);
  CHECK(std::abs(g.mean()(0)) < 1e-13);
  CHECK(g.covariance()(0, 0) == doctest::Approx(1.0).epsilon(1e-12));

  const auto prod = Constellation::product(b, pam4);
  CHECK(prod.dimension() == 2);
  CHECK(prod.size() == 8);
  CHECK(prod.probs().sum() == doctest::Approx(1.0));
  const Matrix cov = prod.covariance();
  CHECK(std::abs(cov(0, 1)) < 1e-15);
  CHECK(cov(1, 1) == doctest::Approx(1.0));
}

TEST_CASE("scalings validate their invariants") {
  CHECK_THROWS_AS(ScalingVector(vec({1.0, -0.1})), ValidationError);
  CHECK_THROWS_AS(ScalingVector(vec({NAN})), ValidationError);
  CHECK_NOTHROW(ScalingVector(vec({0.0, 2.0})));

  Matrix asym(2, 2);
  asym << 1.0, 0.5, 0.4, 1.0;
  CHECK_THROWS_AS(MatrixScaling::from_matrix(asym), ValidationError);

  Matrix indefinite(2, 2);
  indefinite << 1.0, 2.0, 2.0, 1.0;
  CHECK_THROWS_AS(MatrixScaling::from_matrix(indefinite), ValidationError);

  Matrix t(2, 2);
  t << 2.0, 0.5, 0.5, 1.0;
  CHECK_THROWS_AS(MatrixScaling(t, Matrix::Identity(2, 2)), ValidationError);
  const auto s = MatrixScaling::from_matrix(t);
  CHECK((s.factor() * s.factor().transpose() - t).norm() < 1e-13);

  const Matrix l = t.llt().matrixL();
  CHECK_NOTHROW(MatrixScaling(t, l));
  CHECK((MatrixScaling::from_factor(l).matrix() - t).norm() < 1e-13);
}

TEST_CASE("channel model mixture means are A x_k") {
  const auto c = validate_constellation({{1.0, 2.0}, {-0.5, 0.25}}, {0.3, 0.7});
  const ChannelModel diag(c, ScalingVector(vec({4.0, 9.0})));
  CHECK(diag.mixture().means()(0, 0) == doctest::Approx(2.0));
  CHECK(diag.mixture().means()(1, 0) == doctest::Approx(6.0));
  CHECK(diag.mixture().means()(1, 1) == doctest::Approx(0.75));

  Matrix a(2, 2);
  a << 1.0, 0.0, 0.5, 2.0;
  const ChannelModel full(c, MatrixScaling::from_factor(a));
  CHECK((full.mixture().means() - a * c.points()).norm() < 1e-15);
  CHECK(full.diagonal_scaling() == nullptr);
  CHECK_THROWS_AS(full.require_diagonal("test"), ValidationError);

  CHECK_THROWS_AS(ChannelModel(c, ScalingVector(vec({1.0}))), ValidationError);
}

TEST_CASE("log density matches closed forms and the naive sum") {
  const double half_log_2pi = 0.5 * std::log(2.0 * std::numbers::pi);
  const auto point = Constellation::deterministic(vec({0.0}));
  CHECK(mixture_log_density(scalar_model(point, 3.0), vec({0.0})) ==
        doctest::Approx(-half_log_2pi).epsilon(1e-15));

  const auto b = scalar_model(Constellation::bpsk(), 1.0);
  CHECK(mixture_log_density(b, vec({0.0})) == doctest::Approx(-0.5 - half_log_2pi).epsilon(1e-15));
  CHECK(mixture_log_density(b, vec({3.0})) == doctest::Approx(-3.6096100286268876).epsilon(1e-15));

  // Far from every atom the naive sum underflows; the log-domain value must not.
  const double far = mixture_log_density(b, vec({60.0}));
  CHECK(std::isfinite(far));
  CHECK(far == doctest::Approx(-0.5 * 59.0 * 59.0 - half_log_2pi + std::log(0.5)).epsilon(1e-12));
}

TEST_CASE("density integrates to one") {
  const auto c = random_constellation(1, 5, 11);
  const auto m = scalar_model(c, 2.5);
  const double mass = oracle::integrate(
      [&](double y) { return std::exp(mixture_log_density(m, vec({y}))); }, -30.0, 30.0, 1e-13);
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));

  const auto c2 = random_constellation(2, 4, 12);
  const ChannelModel m2(c2, ScalingVector(vec({0.8, 1.7})));
  // Box covering ±8σ around every mean.
  const Matrix& means = m2.mixture().means();
  const double lo0 = means.row(0).minCoeff() - 8.0, hi0 = means.row(0).maxCoeff() + 8.0;
  const double lo1 = means.row(1).minCoeff() - 8.0, hi1 = means.row(1).maxCoeff() + 8.0;
  const double total = oracle::integrate(
      [&](double u) {
        return oracle::integrate(
            [&](double v) { return std::exp(mixture_log_density(m2, vec({u, v}))); }, lo1, hi1,
            1e-12);
      },
      lo0, hi0, 1e-11);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("score and log-density Hessian match finite differences") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal(0.0, 1.5);
  const auto c = random_constellation(2, 5, 21);
  const ChannelModel m(c, ScalingVector(vec({1.3, 0.6})));
  for (int trial = 0; trial < 20; ++trial) {
    const Vector y = vec({normal(rng), normal(rng)});
    const Vector s = score(m, y);
    const Matrix h = log_density_hessian(m, y);
    for (int i = 0; i < 2; ++i) {
      Vector e = Vector::Zero(2);
      e(i) = 1e-6;
      const double fd = (mixture_log_density(m, y + e) - mixture_log_density(m, y - e)) / 2e-6;
      CHECK(std::abs(fd - s(i)) <= 1e-6 * std::max(1.0, std::abs(s(i))));
      e(i) = 1e-5;
      const Vector fd_col = (score(m, y + e) - score(m, y - e)) / 2e-5;
      CHECK((fd_col - h.col(i)).cwiseAbs().maxCoeff() <= 1e-5 * std::max(1.0, h.cwiseAbs().maxCoeff()));
    }
    // ∇² log f + I is a conditional covariance.
    CHECK(min_eigenvalue(h + Matrix::Identity(2, 2)) >= -1e-12);
    CHECK((h - h.transpose()).norm() == 0.0);
  }
}

TEST_CASE("score and Hessian closed forms") {
  const auto point = scalar_model(Constellation::deterministic(vec({0.0})), 2.0);
  CHECK(score(point, vec({1.7}))(0) == doctest::Approx(-1.7));
  CHECK(log_density_hessian(point, vec({1.7}))(0, 0) == doctest::Approx(-1.0));

  const auto b = scalar_model(Constellation::bpsk(), 1.0);
  CHECK(std::abs(score(b, vec({0.0}))(0)) < 1e-15);
  CHECK(score(b, vec({1.0}))(0) == doctest::Approx(-0.23840584404423511).epsilon(1e-14));
  CHECK(std::abs(log_density_hessian(b, vec({0.0}))(0, 0)) < 1e-15);

  const auto prod = Constellation::product(Constellation::bpsk(), Constellation::bpsk());
  const ChannelModel m(prod, ScalingVector(vec({1.0, 1.0})));
  const Matrix h = log_density_hessian(m, vec({1.0, 0.0}));
  CHECK(h(0, 0) == doctest::Approx(0.41997434161402607 - 1.0).epsilon(1e-14));
  CHECK(h(1, 1) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(std::abs(h(0, 1)) < 1e-15);
}

TEST_CASE("sample_outputs is seeded and has the right law") {
  const auto point = ChannelModel(Constellation::deterministic(vec({0.0})), ScalingVector(vec({1.0})));
  const auto draws = sample_outputs(point, 100000, 7);
  double mean = 0.0;
  for (const auto& y : draws) mean += y(0);
  mean /= static_cast<double>(draws.size());
  CHECK(std::abs(mean) <= 4.0 * std::sqrt(1.0 / 1e5));

  const auto again = sample_outputs(point, 100000, 7);
  bool identical = true;
  for (std::size_t i = 0; i < draws.size(); ++i) identical = identical && draws[i](0) == again[i](0);
  CHECK(identical);

  const auto b = scalar_model(Constellation::bpsk(), 4.0);
  const auto bd = sample_outputs(b, 100000, 3);
  double bm = 0.0;
  double bv = 0.0;
  for (const auto& y : bd) {
    bm += y(0);
    bv += y(0) * y(0);
  }
  bm /= 1e5;
  bv = bv / 1e5 - bm * bm;
  CHECK(std::abs(bm) <= 0.02);
  CHECK(bv == doctest::Approx(5.0).epsilon(0.03));

  CHECK_THROWS_AS(sample_outputs(b, 0, 1), ValidationError);
}

TEST_CASE("entropy is invariant under rotating the scaling factor") {
  const auto c = random_constellation(2, 4, 8);
  Matrix a(2, 2);
  a << 0.9, 0.2, -0.3, 1.1;
  std::mt19937_64 rng(99);
  const Matrix q = random_orthogonal(2, rng);
  const auto cfg = IntegratorConfig::quadrature(64);
  const double h1 = differential_entropy(ChannelModel(c, MatrixScaling::from_factor(a)), cfg).entropy;
  const double h2 = differential_entropy(ChannelModel(c, MatrixScaling::from_factor(q * a)), cfg).entropy;
  CHECK(std::abs(h1 - h2) <= 1e-8);

  // A diagonal MatrixScaling reproduces the ScalingVector channel.
  Matrix t = Vector(vec({0.4, 2.0})).asDiagonal();
  const double hv = differential_entropy(ChannelModel(c, ScalingVector(vec({0.4, 2.0}))), cfg).entropy;
  const double hm = differential_entropy(ChannelModel(c, MatrixScaling::from_matrix(t)), cfg).entropy;
  CHECK(std::abs(hv - hm) <= 1e-12);
}
