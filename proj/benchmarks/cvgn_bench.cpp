#include <benchmark/benchmark.h>

#include "cvgn/analysis.hpp"
#include "cvgn/dynamics.hpp"
#include "cvgn/gaussian.hpp"

using namespace cvgn;

namespace {

FullParams operating_point(double eta, double n_m) {
  FullParams p = FullParams::Defaults();
  p.eta = eta;
  p.n_m = n_m;
  return p;
}

void BM_MeanField(benchmark::State& state) {
  const FullParams p = operating_point(0.25, 240.0);
  for (auto _ : state) benchmark::DoNotOptimize(mean_field(p));
}
BENCHMARK(BM_MeanField);

void BM_SolveSteady(benchmark::State& state) {
  const FullParams p = operating_point(0.25, 240.0);
  const DriftDiffusion dd = build_full_linearized(p, mean_field(p));
  for (auto _ : state) benchmark::DoNotOptimize(solve_steady(dd));
}
BENCHMARK(BM_SolveSteady);

void BM_Discord(benchmark::State& state) {
  const CovarianceMatrix c = CovarianceMatrix::TwoModeSqueezedVacuum(0.7);
  for (auto _ : state) benchmark::DoNotOptimize(gaussian_discord(c));
}
BENCHMARK(BM_Discord);

void BM_FourModeNegativity(benchmark::State& state) {
  const CovarianceMatrix c = *steady_state(operating_point(0.25, 100.0)).covariance;
  for (auto _ : state) {
    benchmark::DoNotOptimize(log_negativity_bipartition(c, {{1, 3}, {0, 2}}));
  }
}
BENCHMARK(BM_FourModeNegativity);

void BM_Evolve(benchmark::State& state) {
  const FullParams p = operating_point(0.25, 240.0);
  const DriftDiffusion dd = build_full_linearized(p, mean_field(p));
  const CovarianceMatrix c0 = activation_initial_state(p);
  const double t = static_cast<double>(state.range(0)) / p.kappa;
  for (auto _ : state) {
    benchmark::DoNotOptimize(evolve_covariance(dd, c0, t, default_time_step(dd), 1 << 30));
  }
}
BENCHMARK(BM_Evolve)->Arg(1)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_Threshold(benchmark::State& state) {
  const FullParams p = operating_point(0.25, 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(find_threshold(p, 0.0, 600.0));
}
BENCHMARK(BM_Threshold)->Unit(benchmark::kMillisecond);

void BM_Sweep(benchmark::State& state) {
  const ModelParams m = operating_point(0.25, 0.0);
  std::vector<double> grid;
  for (int k = 0; k < 64; ++k) grid.push_back(4.0 * k);
  const int jobs = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(sweep(m, "n_m", grid, {"ln_o1o2_m1m2"}, {LogBase::kBits, jobs}));
  }
}
BENCHMARK(BM_Sweep)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
