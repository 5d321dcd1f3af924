// Serial reference vs OpenMP kernel on the hot paths. Run with
// OMP_NUM_THREADS set to the team size of interest.

#include <benchmark/benchmark.h>

#include <cmath>

#include "pcopula/kernels.hpp"
#include "pcopula/measures.hpp"
#include "pcopula/partial.hpp"
#include "pcopula/sampler.hpp"

using namespace pcop;

namespace {

const VineModel& model() {
  static const VineModel m = scenario_table()[0].model;
  return m;
}

template <bool Parallel>
void BM_ScanDeviation(benchmark::State& state) {
  const PairCopulaSpec s(Family::gumbel, 2.5);
  const BivariateFn c = [&](double u, double v) { return cdf(s, u, v); };
  const auto g = linspace(0.0, 1.0, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto r = Parallel ? parallel::scan_deviation(c, g, g) : serial::scan_deviation(c, g, g);
    benchmark::DoNotOptimize(r);
  }
}

template <bool Parallel>
void BM_TensorQuadrature(benchmark::State& state) {
  const PairCopulaSpec s(Family::gaussian, 0.6);
  const BivariateFn f = [&](double u, double v) { return cdf(s, u, v); };
  for (auto _ : state) {
    double r = Parallel ? parallel::tensor_quadrature(f) : serial::tensor_quadrature(f);
    benchmark::DoNotOptimize(r);
  }
}

template <bool Parallel>
void BM_SampleCvine(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    auto r = Parallel ? parallel::sample_cvine(model(), n, 42) : serial::sample_cvine(model(), n, 42);
    benchmark::DoNotOptimize(r);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_PseudoObservations(benchmark::State& state) {
  const auto s = sample_cvine(model(), static_cast<std::size_t>(state.range(0)), 42);
  for (auto _ : state) {
    auto r = Parallel ? parallel::pseudo_observations(s, model().c_xz, model().c_yz)
                      : serial::pseudo_observations(s, model().c_xz, model().c_yz);
    benchmark::DoNotOptimize(r);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_KddFullLattice(benchmark::State& state) {
  const auto s = sample_cvine(model(), static_cast<std::size_t>(state.range(0)), 42);
  for (auto _ : state) {
    double r = Parallel ? parallel::kdd_emp_full(s.x, s.y) : serial::kdd_emp_full(s.x, s.y);
    benchmark::DoNotOptimize(r);
  }
}

}  // namespace

BENCHMARK(BM_ScanDeviation<false>)->Arg(201)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ScanDeviation<true>)->Arg(201)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_TensorQuadrature<false>)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_TensorQuadrature<true>)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SampleCvine<false>)->Arg(5000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SampleCvine<true>)->Arg(5000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_PseudoObservations<false>)->Arg(5000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_PseudoObservations<true>)->Arg(5000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_KddFullLattice<false>)->Arg(1000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_KddFullLattice<true>)->Arg(1000)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
