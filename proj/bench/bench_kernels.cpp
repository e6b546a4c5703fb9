#include <benchmark/benchmark.h>
#include <omp.h>

#include <random>

#include "mcl/experiments.hpp"
#include "mcl/families.hpp"
#include "mcl/landscape.hpp"
#include "mcl/metric.hpp"

using namespace mcl;

namespace {

Instance positive_instance(int n) {
  std::mt19937_64 rng(n);
  std::uniform_real_distribution<double> u01(0.1, 1.0);
  Matrix C(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) C(i, j) = C(j, i) = u01(rng);
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = u01(rng) - 0.5;
  return make_instance(C, v);
}

void BM_ExactMetricParallel(benchmark::State& state) {
  Instance inst = positive_instance(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(exact_metric(inst, 0.5).distance);
  state.counters["threads"] = omp_get_max_threads();
}

void BM_ExactMetricSerial(benchmark::State& state) {
  Instance inst = positive_instance(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(exact_metric_serial(inst, 0.5).distance);
}

void transition_with_threads(benchmark::State& state, int threads) {
  const int saved = omp_get_max_threads();
  omp_set_num_threads(threads);
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    TransitionResult r = run_transition(n, {0.5, 0.9, 1.3}, 50, 1, OptimizerConfig{});
    benchmark::DoNotOptimize(r.success_rates.data());
  }
  omp_set_num_threads(saved);
  state.counters["threads"] = threads;
}

void BM_TransitionParallel(benchmark::State& state) { transition_with_threads(state, omp_get_num_procs()); }
void BM_TransitionSerial(benchmark::State& state) { transition_with_threads(state, 1); }

void BM_CriticalPointsParallel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(find_critical_points_reduced({8, 0.05}, 2000, {1, 0}).points.size());
}

void BM_CriticalPointsSerial(benchmark::State& state) {
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  for (auto _ : state) benchmark::DoNotOptimize(find_critical_points_reduced({8, 0.05}, 2000, {1, 0}).points.size());
  omp_set_num_threads(saved);
}

}  // namespace

BENCHMARK(BM_ExactMetricParallel)->Arg(8)->Arg(10)->Arg(12)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExactMetricSerial)->Arg(8)->Arg(10)->Arg(12)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TransitionParallel)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TransitionSerial)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CriticalPointsParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CriticalPointsSerial)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
