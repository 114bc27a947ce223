// Parallel CEEMD against its serial reference, and the sorted-window ApEn
// against the O(N^2) oracle.

#include <benchmark/benchmark.h>

#include "ceemdes/ceemd.hpp"
#include "ceemdes/entropy.hpp"
#include "oracles.hpp"

using namespace ceemdes;

static CeemdConfig bench_cfg(std::size_t pairs) {
  CeemdConfig c;
  c.ensemble_pairs = pairs;
  c.rng_seed = 1;
  return c;
}

static void BM_ceemd_parallel(benchmark::State& st) {
  const auto x = oracle::white(static_cast<std::size_t>(st.range(0)), 3);
  const auto cfg = bench_cfg(static_cast<std::size_t>(st.range(1)));
  for (auto _ : st) benchmark::DoNotOptimize(ceemd(x, cfg));
}

static void BM_ceemd_serial(benchmark::State& st) {
  const auto x = oracle::white(static_cast<std::size_t>(st.range(0)), 3);
  const auto cfg = bench_cfg(static_cast<std::size_t>(st.range(1)));
  for (auto _ : st) benchmark::DoNotOptimize(ceemd_serial(x, cfg));
}

BENCHMARK(BM_ceemd_parallel)->Args({2048, 10})->Args({9000, 10})->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ceemd_serial)->Args({2048, 10})->Args({9000, 10})->Unit(benchmark::kMillisecond)->UseRealTime();

static void BM_apen_fast(benchmark::State& st) {
  const auto x = oracle::white(static_cast<std::size_t>(st.range(0)), 5);
  const double r = 0.2 * oracle::pop_std(x);
  for (auto _ : st) benchmark::DoNotOptimize(approximate_entropy_abs(x, 2, r));
}

static void BM_apen_brute(benchmark::State& st) {
  const auto x = oracle::white(static_cast<std::size_t>(st.range(0)), 5);
  const double r = 0.2 * oracle::pop_std(x);
  for (auto _ : st) benchmark::DoNotOptimize(oracle::apen_brute(x, 2, r));
}

BENCHMARK(BM_apen_fast)->Arg(500)->Arg(2000)->Arg(9000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_apen_brute)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
