#include "eplab/entropy.hpp"
#include "eplab/finite_difference.hpp"
#include "eplab/linalg.hpp"
#include "eplab/mmse.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace eplab;

namespace {

ChannelModel bpsk(double lambda) {
  return ChannelModel(Constellation::bpsk(), ScalingVector(Vector::Constant(1, lambda)));
}

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<long>(v.size()));
  long i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

ChannelModel random_model(std::uint64_t seed, int n, int atoms) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.1, 3.0);
  Vector lambda(n);
  for (int i = 0; i < n; ++i) lambda(i) = u(rng);
  return ChannelModel(random_constellation(n, atoms, seed), ScalingVector(lambda));
}

}  // namespace

TEST_CASE("entropy report invariants") {
  const auto r = EntropyReport::from_entropy(2, 3.1, 1e-9);
  CHECK(r.entropy_power == std::exp(2.0 * 3.1 / 2) / kTwoPiE);
  CHECK(r.mutual_information == 3.1 - std::log(kTwoPiE));
  CHECK(r.entropy_power_error == doctest::Approx(r.entropy_power * 1e-9));
}

TEST_CASE("deterministic input is the pure-noise channel") {
  for (int n = 1; n <= 3; ++n) {
    Vector x0 = Vector::LinSpaced(n, -1.0, 2.0);
    const ChannelModel m(Constellation::deterministic(x0), ScalingVector(Vector::Constant(n, 5.0)));
    const auto cfg = IntegratorConfig::quadrature();
    const auto e = differential_entropy(m, cfg);
    CHECK(e.entropy == doctest::Approx(0.5 * n * std::log(kTwoPiE)).epsilon(1e-13));
    CHECK(std::abs(e.entropy_power - 1.0) <= 1e-9);
    CHECK(std::abs(e.mutual_information) <= 1e-9);
    const auto h = entropy_power_hessian(m, cfg);
    CHECK(h.gradient_h.cwiseAbs().maxCoeff() <= 1e-9);
    CHECK(h.hessian_h.cwiseAbs().maxCoeff() <= 1e-9);
    CHECK(h.hessian_N.cwiseAbs().maxCoeff() <= 1e-9);
    CHECK(chain_rule_residual(h) == 0.0);
  }
}

TEST_CASE("BPSK entropy, gradient and Hessian values") {
  const auto cfg = IntegratorConfig::quadrature();
  const auto e = differential_entropy(bpsk(1.0), cfg);
  CHECK(e.entropy == doctest::Approx(1.7557693535515044).epsilon(1e-9));
  CHECK(e.mutual_information > 0.0);
  CHECK(e.mutual_information < std::log(2.0));

  CHECK(entropy_gradient(bpsk(0.0), cfg)(0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(entropy_hessian(bpsk(0.0), cfg)(0, 0) == doctest::Approx(-0.5).epsilon(1e-14));

  const Vector g = entropy_gradient(bpsk(1.0), cfg);
  CHECK(g(0) == doctest::Approx(0.5 * 0.44959950920667283).epsilon(1e-7));
  CHECK(std::abs(g(0) - fd_entropy_gradient(Constellation::bpsk(), ScalingVector(vec({1.0})), cfg)(0)) <= 1e-4);

  const auto r = entropy_power_hessian(bpsk(1.0), cfg);
  CHECK(r.hessian_N(0, 0) <= 0.0);
  // N(E² − E[Φ²]) for n = 1, with the integration error propagated through.
  const double e_err = 2.0 * r.gradient_error(0);
  const double phi2_err = 2.0 * r.hessian_h_error(0, 0);
  const double bound = 3.0 * r.entropy.entropy_power * (2.0 * e_err + phi2_err) + 1e-12;
  CHECK(std::abs(r.hessian_N(0, 0) - (-0.22441551418640659)) <= bound);
  const auto fine = entropy_power_hessian(bpsk(1.0), IntegratorConfig::quadrature(128));
  CHECK(fine.hessian_N(0, 0) == doctest::Approx(-0.22441551418640659).epsilon(1e-9));
}

TEST_CASE("gradient and Hessian require a diagonal scaling") {
  const ChannelModel m(Constellation::bpsk(), MatrixScaling::from_matrix(Matrix::Identity(1, 1)));
  const auto cfg = IntegratorConfig::quadrature();
  CHECK_NOTHROW(differential_entropy(m, cfg));
  CHECK_THROWS_AS(entropy_gradient(m, cfg), ValidationError);
  CHECK_THROWS_AS(entropy_hessian(m, cfg), ValidationError);
  CHECK_THROWS_AS(entropy_power_hessian(m, cfg), ValidationError);
}

TEST_CASE("Hessians are negative semidefinite with entries ≤ 0") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const int n = 1 + static_cast<int>(seed % 3);
    const auto m = random_model(seed, n, 2 + static_cast<int>(seed % 7));
    const auto r = entropy_power_hessian(m, IntegratorConfig::quadrature(n == 3 ? 32 : 48));
    CAPTURE(seed);
    CHECK(r.max_eigenvalue_h <= 1e-8 * std::max(1.0, spectral_norm(r.hessian_h)));
    CHECK(r.max_eigenvalue_N <= 1e-8 * std::max(1.0, spectral_norm(r.hessian_N)));
    CHECK(r.hessian_h.maxCoeff() <= 0.0);
    CHECK((r.hessian_h - r.hessian_h.transpose()).norm() <= 1e-10 * r.hessian_h.norm());
    CHECK((r.hessian_N - r.hessian_N.transpose()).norm() <= 1e-10 * r.hessian_N.norm());
    CHECK(chain_rule_residual(r) <= 1e-12);
  }
}

TEST_CASE("three-point planar constellation certificate") {
  const auto c = validate_constellation({{0.9, 0.1}, {-0.4, 1.1}, {-0.6, -0.8}}, {0.5, 0.3, 0.2});
  const auto r = entropy_power_hessian(ChannelModel(c, ScalingVector(vec({0.7, 1.3}))),
                                       IntegratorConfig::quadrature());
  CHECK(r.max_eigenvalue_N <= 1e-8 * spectral_norm(r.hessian_N));
  CHECK(r.max_eigenvalue_N < 0.0);
}

TEST_CASE("rank-one split of the entropy-power Hessian") {
  const auto m = random_model(3, 3, 5);
  const auto ex = integrate_channel(m, IntegratorConfig::quadrature(32));
  const auto r = assemble_hessian_report(ex);
  const Vector d = ex.mmse.diagonal();
  const Matrix rank_one = d * d.transpose() / 3.0;
  CHECK(min_eigenvalue(rank_one) >= -1e-10 * spectral_norm(rank_one));
  CHECK(min_eigenvalue(ex.phi_hadamard) >= -3.0 * ex.phi_hadamard_error.maxCoeff() - 1e-12);
  const Matrix rebuilt = (r.entropy.entropy_power / 3.0) * (rank_one - ex.phi_hadamard);
  CHECK((rebuilt - r.hessian_N).cwiseAbs().maxCoeff() <= 1e-14 * std::max(1.0, r.hessian_N.norm()));
}

TEST_CASE("chain-rule assembly") {
  const auto cfg = IntegratorConfig::quadrature(24);
  CHECK(chain_rule_assembly_check(bpsk(1.0), cfg) <= 1e-12);
  CHECK(chain_rule_assembly_check(random_model(9, 3, 6), cfg) <= 1e-12);
  const ChannelModel point(Constellation::deterministic(vec({1.0, 2.0})), ScalingVector(vec({1.0, 1.0})));
  CHECK(chain_rule_assembly_check(point, cfg) == 0.0);
}

TEST_CASE("finite differences confirm the gradient and Hessian") {
  for (std::uint64_t seed = 40; seed < 46; ++seed) {
    const int n = 1 + static_cast<int>(seed % 2);
    const auto m = random_model(seed, n, 4);
    const auto cfg = IntegratorConfig::quadrature();
    const auto r = entropy_power_hessian(m, cfg);
    const auto fd = check_finite_differences(m, r, cfg);
    CAPTURE(seed);
    CHECK(fd.pass);
    CHECK(fd.gradient_residual <= fd.gradient_bound);
    CHECK(fd.hessian_residual <= fd.hessian_bound);
    // Far tighter than the documented bounds at this order.
    CHECK(fd.gradient_residual <= 1e-7);
    CHECK(fd.hessian_residual <= 1e-6);
  }
}

TEST_CASE("finite differences work at the λ = 0 boundary") {
  const auto prod = Constellation::product(Constellation::bpsk(), Constellation::pam(4));
  const ChannelModel m(prod, ScalingVector(vec({0.0, 1.0})));
  const auto cfg = IntegratorConfig::quadrature();
  const auto r = entropy_power_hessian(m, cfg);
  CHECK(r.gradient_h(0) == doctest::Approx(0.5).epsilon(1e-12));
  const auto fd = check_finite_differences(m, r, cfg);
  CHECK(fd.pass);
}

TEST_CASE("entropy increases along every λ direction") {
  const auto c = random_constellation(2, 5, 61);
  double previous = -1.0;
  for (double s : {0.0, 0.25, 0.5, 1.0, 2.0}) {
    const double h = differential_entropy(ChannelModel(c, ScalingVector(vec({s, 0.5}))),
                                          IntegratorConfig::quadrature())
                         .entropy;
    CHECK(h > previous);
    previous = h;
  }
}
