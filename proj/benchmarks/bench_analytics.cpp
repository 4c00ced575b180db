#include "eplab/allocation.hpp"
#include "eplab/concavity.hpp"
#include "eplab/entropy.hpp"
#include "eplab/matrix_inequalities.hpp"

#include <benchmark/benchmark.h>

using namespace eplab;

namespace {

void BM_EntropyPowerHessian(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto c = random_constellation(n, 6, 3);
  const ChannelModel model(c, ScalingVector(Vector::LinSpaced(n, 0.5, 2.0)));
  const auto cfg = IntegratorConfig::quadrature();
  for (auto _ : state) benchmark::DoNotOptimize(entropy_power_hessian(model, cfg).max_eigenvalue_N);
}
BENCHMARK(BM_EntropyPowerHessian)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_LemmaSuite(benchmark::State& state) {
  LemmaSuiteOptions opts;
  opts.trials = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_lemma_suite(opts).size());
}
BENCHMARK(BM_LemmaSuite)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_ProjectOntoBudget(benchmark::State& state) {
  const Vector v = Vector::LinSpaced(state.range(0), -1.0, 3.0);
  for (auto _ : state) benchmark::DoNotOptimize(project_onto_budget(v, 1.0)(0));
}
BENCHMARK(BM_ProjectOntoBudget)->Arg(2)->Arg(16)->Arg(256);

void BM_OptimizePowerAllocation(benchmark::State& state) {
  const auto c = Constellation::product(Constellation::bpsk(), Constellation::pam(4));
  AllocationOptions opts;
  opts.power = 2.0;
  opts.newton = state.range(0) != 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(optimize_power_allocation(c, opts, IntegratorConfig::quadrature()).mutual_information);
  }
}
BENCHMARK(BM_OptimizePowerAllocation)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_DiagonalProbe(benchmark::State& state) {
  const auto c = random_constellation(2, 4, 5);
  Vector a(2), b(2);
  a << 0.2, 2.0;
  b << 2.0, 0.3;
  const auto cfg = IntegratorConfig::quadrature();
  for (auto _ : state) benchmark::DoNotOptimize(probe_diagonal_segment(c, a, b, 33, cfg).max_excess);
}
BENCHMARK(BM_DiagonalProbe)->Unit(benchmark::kMillisecond);

}  // namespace
