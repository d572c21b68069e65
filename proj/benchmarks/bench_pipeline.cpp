#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "tradedfa/crossover.hpp"
#include "tradedfa/dfa.hpp"
#include "tradedfa/ingest.hpp"
#include "tradedfa/mfdfa.hpp"
#include "tradedfa/synth.hpp"

using namespace tradedfa;

static void BM_GenFgn(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(gen_fgn(0.7, n, ++seed));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_GenFgn)->RangeMultiplier(4)->Range(1 << 12, 1 << 18)->Unit(benchmark::kMillisecond);

static void BM_FluctuationF2(benchmark::State& state) {
  const auto x = gen_fgn(0.7, static_cast<std::size_t>(state.range(0)), 1);
  const auto p = profile(x);
  const auto g = log_grid(p.size());
  for (auto _ : state) benchmark::DoNotOptimize(fluctuation_f2(p, g));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FluctuationF2)->RangeMultiplier(4)->Range(1 << 12, 1 << 18)->Unit(benchmark::kMillisecond);

static void BM_LocalFluctuation(benchmark::State& state) {
  const auto x = gen_fgn(0.7, static_cast<std::size_t>(state.range(0)), 2);
  const auto p = profile(x);
  for (auto _ : state) benchmark::DoNotOptimize(local_fluctuation(p.values, 3));
}
BENCHMARK(BM_LocalFluctuation)->RangeMultiplier(8)->Range(32, 1 << 15);

static void BM_FluctuationQ(benchmark::State& state) {
  const auto x = gen_binomial_cascade(0.3, static_cast<int>(state.range(0)), 1);
  const auto p = profile(x);
  const auto g = log_grid(p.size());
  const auto q = QGrid::uniform();
  for (auto _ : state) benchmark::DoNotOptimize(fluctuation_q(p, g, q));
}
BENCHMARK(BM_FluctuationQ)->DenseRange(12, 18, 2)->Unit(benchmark::kMillisecond);

static void BM_DetectCrossover(benchmark::State& state) {
  const auto g = log_grid(static_cast<std::size_t>(state.range(0)));
  const auto c = gen_piecewise_curve(0.65, 0.97, g[g.size() / 2], g, 0.02, 1);
  for (auto _ : state) benchmark::DoNotOptimize(detect_crossover(c));
}
BENCHMARK(BM_DetectCrossover)->Arg(1 << 16)->Arg(1 << 20);

static void BM_ParseTicks(benchmark::State& state) {
  const auto text = serialize_ticks(gen_synthetic_ticks(flat_profile(5.0), 20, 1));
  for (auto _ : state) benchmark::DoNotOptimize(parse_ticks(text));
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(text.size()));
}
BENCHMARK(BM_ParseTicks)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
