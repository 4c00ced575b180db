#include "eplab/entropy.hpp"
#include "eplab/mmse.hpp"

#include <benchmark/benchmark.h>

using namespace eplab;

namespace {

// Arguments: dimension, atoms, quadrature order.
void BM_IntegrateChannelQuadrature(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto c = random_constellation(n, static_cast<int>(state.range(1)), 7);
  const ChannelModel model(c, ScalingVector(Vector::Constant(n, 1.5)));
  const auto cfg = IntegratorConfig::quadrature(static_cast<int>(state.range(2))).without_error_estimate();
  for (auto _ : state) benchmark::DoNotOptimize(integrate_channel(model, cfg).entropy);
  state.SetItemsProcessed(state.iterations() * integrate_channel(model, cfg).evaluations);
}
BENCHMARK(BM_IntegrateChannelQuadrature)
    ->Args({1, 4, 48})
    ->Args({1, 16, 48})
    ->Args({2, 4, 48})
    ->Args({2, 8, 96})
    ->Args({3, 8, 48})
    ->Unit(benchmark::kMillisecond);

void BM_IntegrateChannelErrorEstimate(benchmark::State& state) {
  const auto c = random_constellation(2, 8, 7);
  const ChannelModel model(c, ScalingVector(Vector::Constant(2, 1.5)));
  const auto cfg = IntegratorConfig::quadrature();
  for (auto _ : state) benchmark::DoNotOptimize(integrate_channel(model, cfg).entropy_error);
}
BENCHMARK(BM_IntegrateChannelErrorEstimate)->Unit(benchmark::kMillisecond);

void BM_IntegrateChannelMonteCarlo(benchmark::State& state) {
  const auto c = random_constellation(4, 8, 7);
  const ChannelModel model(c, ScalingVector(Vector::Constant(4, 1.5)));
  const auto cfg = IntegratorConfig::monte_carlo(state.range(0), 42);
  for (auto _ : state) benchmark::DoNotOptimize(integrate_channel(model, cfg).entropy);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_IntegrateChannelMonteCarlo)->Arg(1 << 16)->Arg(1 << 18)->Unit(benchmark::kMillisecond);

void BM_ConditionalMoments(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto c = random_constellation(n, static_cast<int>(state.range(1)), 11);
  const ChannelModel model(c, ScalingVector(Vector::Constant(n, 1.0)));
  const Vector y = Vector::LinSpaced(n, -0.5, 0.8);
  for (auto _ : state) benchmark::DoNotOptimize(conditional_moments(model, y).phi(0, 0));
}
BENCHMARK(BM_ConditionalMoments)->Args({1, 4})->Args({3, 16})->Args({8, 64});

}  // namespace
