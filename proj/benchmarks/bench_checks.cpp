#include "ridge_equiv/decomposition.hpp"
#include "ridge_equiv/equivalence.hpp"
#include "ridge_equiv/generators.hpp"

#include <benchmark/benchmark.h>

using namespace ridge_equiv;

namespace {

const ToleranceConfig tol;

ModelInstance instance_for(int n, GenKind kind) {
  return gen_instance({n, n / 2, kind, 42, 1.0});
}

void BM_RidgeMap(benchmark::State& state) {
  const ModelInstance m =
      instance_for(static_cast<int>(state.range(0)), GenKind::RandomSPD);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ridge_map(m.X, m.Omega, m.K1, PhiKind::Omega));
  }
}
BENCHMARK(BM_RidgeMap)->Arg(8)->Arg(16)->Arg(32)->Arg(64);

void BM_OmegaBlocks(benchmark::State& state) {
  const ModelInstance m =
      instance_for(static_cast<int>(state.range(0)), GenKind::RandomSPD);
  const Matrix Z = null_basis(m.X, tol).Z;
  for (auto _ : state) {
    benchmark::DoNotOptimize(omega_blocks(m.X, Z, m.Omega, tol));
  }
}
BENCHMARK(BM_OmegaBlocks)->Arg(8)->Arg(16)->Arg(32)->Arg(64);

void BM_EstimatorEqualityOracle(benchmark::State& state) {
  const ModelInstance m =
      instance_for(static_cast<int>(state.range(0)), GenKind::GreEquality);
  for (auto _ : state) {
    benchmark::DoNotOptimize(oracle_estimator_equality(m, tol));
  }
}
BENCHMARK(BM_EstimatorEqualityOracle)->Arg(8)->Arg(16)->Arg(32);

void BM_CheckGreEquality(benchmark::State& state) {
  const ModelInstance m =
      instance_for(static_cast<int>(state.range(0)), GenKind::GreEquality);
  for (auto _ : state) {
    benchmark::DoNotOptimize(check_gre_equality(m, tol));
  }
}
BENCHMARK(BM_CheckGreEquality)->Arg(8)->Arg(16)->Arg(32);

void BM_CheckRssEquality(benchmark::State& state) {
  const ModelInstance m =
      instance_for(static_cast<int>(state.range(0)), GenKind::RssEquality);
  for (auto _ : state) {
    benchmark::DoNotOptimize(check_rss_equality(m, tol));
  }
}
BENCHMARK(BM_CheckRssEquality)->Arg(8)->Arg(16)->Arg(32);

void BM_GenInstance(benchmark::State& state) {
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        gen_instance({12, 5, GenKind::RssEquality, seed++, 1.0}));
  }
}
BENCHMARK(BM_GenInstance);

}  // namespace

BENCHMARK_MAIN();
