// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "qcomp/automata.hpp"
#include "qcomp/exact.hpp"
#include "qcomp/games.hpp"

namespace qcomp {

// xorshift64* whose state is the splitmix64 image of the seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  std::uint64_t next();
  // lo + next() % n, n > 0
  std::int64_t uniform(std::int64_t lo, std::uint64_t n) { return lo + static_cast<std::int64_t>(next() % n); }

  static std::uint64_t splitmix64(std::uint64_t x);

 private:
  std::uint64_t s_;
};

struct GenParams {
  std::size_t states = 2;
  Rational density{2};  // transitions per state
  std::int64_t mu = 1;  // weights in [0, mu - 1]
  std::uint64_t seed = 0;
};

// Alphabet {a,b}, initial state 0. Transitions 0 .. 2N-1 give each (state, letter) one random edge;
// the remaining floor(N * density) - 2N are random in all fields. Draw order per transition:
// source (random part only), letter (random part only), target, weight.
// Throws std::invalid_argument when floor(N * density) < 2N, N = 0 or mu < 1.
WeightedAutomaton random_weighted_automaton(const GenParams& p);

// Maximizer-only game with 6n + 3 states: start, then two branches entered through one state each.
// Edge 0 of start (cost w) leads to a loop of 4n edges, edge 1 (cost 0) to a loop of 2n edges.
// The single cost-1 edge of each loop is placed so that its visits happen at play positions
// n + 4n*t and n + 2n*t (t >= 1 when n = 1). w = sum of d^-(4j+3)n over j >= 0 with (4j+3)n <= c*n^2,
// at least the j = 0 term. The short loop is optimal; VI prefers the long one up to horizon about c*n^2.
QuantGame zp_game_family(std::size_t n, const Rational& d, std::size_t c);

}  // namespace qcomp
