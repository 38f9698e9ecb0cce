// SPDX-License-Identifier: Apache-2.0
#include "qcomp/bench.hpp"

#include <stdexcept>

namespace qcomp {

std::uint64_t Rng::splitmix64(std::uint64_t x) {
  std::uint64_t z = x + 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Rng::Rng(std::uint64_t seed) : s_(splitmix64(seed)) {
  if (s_ == 0) s_ = 0x9E3779B97F4A7C15ULL;  // xorshift needs a nonzero state
}

std::uint64_t Rng::next() {
  s_ ^= s_ >> 12;
  s_ ^= s_ << 25;
  s_ ^= s_ >> 27;
  return s_ * 0x2545F4914F6CDD1DULL;
}

WeightedAutomaton random_weighted_automaton(const GenParams& p) {
  constexpr std::size_t sigma = 2;
  if (p.states == 0) throw std::invalid_argument("need at least one state");
  if (p.mu < 1) throw std::invalid_argument("mu must be at least 1");
  Rational total_q = p.density * static_cast<unsigned long>(p.states);
  Integer total = floor_of(total_q);
  if (total < static_cast<unsigned long>(p.states * sigma)) {
    throw std::invalid_argument("floor(N * density) must be at least N * |alphabet|");
  }
  if (!total.fits_ulong_p() || total.get_ui() > (1UL << 28)) throw std::invalid_argument("too many transitions");
  const std::size_t count = total.get_ui();
  const auto n = static_cast<std::uint64_t>(p.states);
  const auto mu = static_cast<std::uint64_t>(p.mu);

  Rng rng(p.seed);
  std::vector<WeightedTransition> ts;
  ts.reserve(count);
  for (std::size_t s = 0; s < p.states; ++s) {
    for (std::size_t a = 0; a < sigma; ++a) {
      State dst = static_cast<State>(rng.uniform(0, n));
      ts.push_back({static_cast<State>(s), static_cast<Symbol>(a), dst, rng.uniform(0, mu)});
    }
  }
  for (std::size_t i = ts.size(); i < count; ++i) {
    State src = static_cast<State>(rng.uniform(0, n));
    Symbol sym = static_cast<Symbol>(rng.uniform(0, sigma));
    State dst = static_cast<State>(rng.uniform(0, n));
    ts.push_back({src, sym, dst, rng.uniform(0, mu)});
  }
  return WeightedAutomaton({"a", "b"}, p.states, 0, std::move(ts), Mode::omega);
}

namespace {

// Appends a cycle of len states starting at `first`; the cost-1 edge leaves cycle position `one`.
void add_loop(QuantGame& g, State first, std::size_t len, std::size_t one) {
  for (std::size_t i = 0; i < len; ++i) {
    State next = first + static_cast<State>((i + 1) % len);
    g.add_edge(first + static_cast<State>(i), next, Rational(i == one ? 1 : 0));
  }
}

}  // namespace

QuantGame zp_game_family(std::size_t n, const Rational& d, std::size_t c) {
  if (n == 0 || c == 0) throw std::invalid_argument("n and c must be positive");
  if (d <= 1) throw std::invalid_argument("discount factor must exceed 1");
  const std::size_t long_len = 4 * n, short_len = 2 * n;
  const State long_entry = 1, long_first = 2;
  const State short_entry = long_first + static_cast<State>(long_len), short_first = short_entry + 1;
  QuantGame g(6 * n + 3, 0);

  // Position 0 is the edge from start, position 1 the entry edge, position 2 + i the loop edge i.
  // Cost 1 at positions congruent to n modulo the loop length, never before position 2.
  auto one_at = [n](std::size_t len) { return (n + 2 * len - 2) % len; };

  Rational w = 0;
  Rational inv = 1 / d;
  for (std::size_t j = 0;; ++j) {
    std::size_t e = (4 * j + 3) * n;
    if (j > 0 && e > c * n * n) break;
    Rational term = 1;
    for (std::size_t i = 0; i < e; ++i) term *= inv;
    w += term;
  }

  g.add_edge(0, long_entry, w);
  g.add_edge(0, short_entry, Rational(0));
  g.add_edge(long_entry, long_first, Rational(0));
  add_loop(g, long_first, long_len, one_at(long_len));
  g.add_edge(short_entry, short_first, Rational(0));
  add_loop(g, short_first, short_len, one_at(short_len));
  g.check();
  return g;
}

}  // namespace qcomp
