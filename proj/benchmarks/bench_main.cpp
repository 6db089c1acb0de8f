#include <benchmark/benchmark.h>

#include "factorbreak/factors.hpp"
#include "factorbreak/kernels.hpp"
#include "factorbreak/montecarlo.hpp"
#include "factorbreak/psytest.hpp"
#include "factorbreak/rng.hpp"

using namespace factorbreak;

namespace {

Eigen::VectorXd normal_vector(int n, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = rng.normal();
  return v;
}

// Full O(T^2) double sum, for comparison with the banded version.
double lnt_dense(const Eigen::VectorXd& s, long N, double h) {
  const auto T = s.size();
  double total = 0.0;
  for (Eigen::Index t = 0; t < T; ++t)
    for (Eigen::Index u = 0; u < T; ++u)
      total += bartlett(static_cast<double>(t - u) / (T * h)) * s(t) * s(u);
  const double tn = static_cast<double>(T) * static_cast<double>(N);
  return total / (tn * tn * h);
}

}  // namespace

static void BM_StatisticBanded(benchmark::State& state) {
  const int T = static_cast<int>(state.range(0));
  const Eigen::VectorXd s = normal_vector(T, 1);
  const KernelSpec k = KernelSpec::make(rule_of_thumb_h(T, 100), hac_lag(T));
  for (auto _ : state) benchmark::DoNotOptimize(statistic_lnt(s, 100, k));
}
BENCHMARK(BM_StatisticBanded)->Arg(200)->Arg(1000)->Arg(5000);

static void BM_StatisticDense(benchmark::State& state) {
  const int T = static_cast<int>(state.range(0));
  const Eigen::VectorXd s = normal_vector(T, 1);
  const double h = rule_of_thumb_h(T, 100);
  for (auto _ : state) benchmark::DoNotOptimize(lnt_dense(s, 100, h));
}
BENCHMARK(BM_StatisticDense)->Arg(200)->Arg(1000)->Arg(5000);

static void BM_FactorFit(benchmark::State& state) {
  const int T = static_cast<int>(state.range(0));
  const int N = static_cast<int>(state.range(1));
  const auto path = static_cast<GramPath>(state.range(2));
  const Eigen::MatrixXd x = generate_panel(make_dgp(DgpFamily::S1, T, N), 3).values();
  for (auto _ : state) benchmark::DoNotOptimize(estimate_factors(x, 2, path).residual_colsum);
}
BENCHMARK(BM_FactorFit)
    ->Args({200, 100, static_cast<int>(GramPath::kTime)})
    ->Args({200, 100, static_cast<int>(GramPath::kCross)})
    ->Args({100, 200, static_cast<int>(GramPath::kTime)})
    ->Args({100, 200, static_cast<int>(GramPath::kCross)});

static void BM_NullSimulation(benchmark::State& state) {
  TestConfig cfg;
  cfg.B = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(simulate_null_statistics(200, 100, cfg));
  state.SetItemsProcessed(state.iterations() * cfg.B);
}
BENCHMARK(BM_NullSimulation)->Arg(50)->Unit(benchmark::kMillisecond);

static void BM_RunTest(benchmark::State& state) {
  const PanelData p = generate_panel(make_dgp(DgpFamily::S3, 200, 100), 5);
  TestConfig cfg;
  cfg.B = 199;
  for (auto _ : state) benchmark::DoNotOptimize(run_test(p, cfg).reject);
}
BENCHMARK(BM_RunTest)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
