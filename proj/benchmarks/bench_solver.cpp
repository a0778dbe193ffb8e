#include <benchmark/benchmark.h>

#include "monopole/profile.hpp"
#include "monopole/shooting.hpp"
#include "monopole/transforms.hpp"

using namespace monopole;

static void BM_QInverse(benchmark::State& state) {
  double v = -1.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(transforms::q_inverse(transforms::VValue{v}));
    v = v < -40.0 ? -1.5 : v - 0.37;
  }
}
BENCHMARK(BM_QInverse);

static void BM_QFromSmallDepth(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(transforms::q_from_depth(3e-9));
}
BENCHMARK(BM_QFromSmallDepth);

static void BM_Classify(benchmark::State& state) {
  shooting::ShootingParams p;
  for (auto _ : state) benchmark::DoNotOptimize(shooting::classify(-2.0, 3.5, p));
}
BENCHMARK(BM_Classify)->Unit(benchmark::kMicrosecond);

static void BM_Solve(benchmark::State& state) {
  shooting::ShootingParams p;
  p.m = -static_cast<double>(state.range(0)) / 2.0;
  for (auto _ : state) benchmark::DoNotOptimize(shooting::solve(p));
}
BENCHMARK(BM_Solve)->Arg(3)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

static void BM_Reconstruct(benchmark::State& state) {
  shooting::ShootingParams p;
  const shooting::ShootingResult res = shooting::solve(p);
  const auto model = profile::ModelParams::make(1.0, 1.0);
  profile::ReconstructOptions opt;
  opt.grid = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(profile::reconstruct(res, model, opt));
}
BENCHMARK(BM_Reconstruct)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
