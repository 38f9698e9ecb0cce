// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include "qcomp/anytime.hpp"
#include "qcomp/bench.hpp"
#include "qcomp/comparator_ds.hpp"
#include "qcomp/games.hpp"
#include "qcomp/inclusion.hpp"
#include "qcomp/prefix_average.hpp"

using namespace qcomp;

static void BM_DsComparator(benchmark::State& state) {
  const auto mu = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(build_ds_comparator(mu, 2, Relation::le));
  state.counters["states"] = static_cast<double>(build_ds_comparator(mu, 2, Relation::le).state_count());
}
BENCHMARK(BM_DsComparator)->RangeMultiplier(2)->Range(2, 64);

// Random pairs: density 3, weights in [0, 3].
static void BM_Inclusion(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::uint64_t seed = 0;
  std::size_t product = 0, runs = 0;
  for (auto _ : state) {
    auto p = random_weighted_automaton({n, Rational(3), 4, seed++});
    auto q = random_weighted_automaton({n, Rational(3), 4, seed++});
    auto v = check_inclusion(p, q, 2, Strictness::nonstrict);
    product += v.product_states;
    ++runs;
  }
  state.counters["product_states"] = static_cast<double>(product) / static_cast<double>(runs);
}
BENCHMARK(BM_Inclusion)->DenseRange(2, 10, 2)->Unit(benchmark::kMillisecond);

static void BM_AnytimeRound(benchmark::State& state) {
  const auto prec = static_cast<unsigned>(state.range(0));
  std::uint64_t seed = 100;
  for (auto _ : state) {
    state.PauseTiming();
    auto make = [&](std::uint64_t s) {
      auto w = random_weighted_automaton({6, Rational(3), 4, s});
      return WeightedAutomaton(w.alphabet(), w.state_count(), w.initial(), w.transitions(), Mode::finite);
    };
    auto p = make(seed++);
    state.ResumeTiming();
    // P against itself is included, so the decider explores everything
    benchmark::DoNotOptimize(low_approx_inc(p, p, 1, prec));
  }
}
BENCHMARK(BM_AnytimeRound)->DenseRange(1, 6)->Unit(benchmark::kMillisecond);

static void BM_OptimalValueZp(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  auto g = zp_game_family(n, Rational(2), 4);
  std::size_t rounds = 0;
  for (auto _ : state) rounds = optimal_value_exact(g, 2).rounds;
  state.counters["vi_rounds"] = static_cast<double>(rounds);
  state.counters["stabilized"] = static_cast<double>(vi_stabilization_round(g, 2, 8 * n * n + 8 * n));
}
BENCHMARK(BM_OptimalValueZp)->DenseRange(1, 4)->Unit(benchmark::kMillisecond);

static void BM_Satisfice(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(7);
  QuantGame g(n, 0);
  for (State s = 0; s < n; ++s) {
    g.set_owner(s, rng.uniform(0, 2) ? Player::minimizer : Player::maximizer);
    for (int e = 0; e < 2; ++e) g.add_edge(s, static_cast<State>(rng.uniform(0, n)), Rational(rng.uniform(-4, 9)));
  }
  const ThresholdValue v{{1}, {}};
  for (auto _ : state) benchmark::DoNotOptimize(satisfice(g, 2, v, Relation::le));
}
BENCHMARK(BM_Satisfice)->RangeMultiplier(2)->Range(8, 256)->Unit(benchmark::kMillisecond);

static void BM_PlaGeq(benchmark::State& state) {
  const auto len = static_cast<std::size_t>(state.range(0));
  Rng rng(11);
  LassoWeights a, b;
  for (std::size_t i = 0; i < len; ++i) a.loop.push_back(rng.uniform(0, 6));
  for (std::size_t i = 0; i + 1 < len; ++i) b.loop.push_back(rng.uniform(0, 6));
  for (auto _ : state) benchmark::DoNotOptimize(pla_geq(a, b));
}
BENCHMARK(BM_PlaGeq)->RangeMultiplier(4)->Range(4, 1024);
BENCHMARK_MAIN();
