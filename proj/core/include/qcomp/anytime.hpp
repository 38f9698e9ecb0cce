// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qcomp/automata.hpp"
#include "qcomp/comparator_ds.hpp"
#include "qcomp/exact.hpp"

namespace qcomp {

// Discount factor d = 1 + 2^-k, approximation factor eps = 2^-p, resolution r = 2^-(p+k).
// k and p are positive integers throughout.
Rational anytime_discount(unsigned k);

Dyadic round_low(const Dyadic& x, unsigned p, unsigned k);
Dyadic round_up(const Dyadic& x, unsigned p, unsigned k);

Dyadic gap_low(const Weights& w, unsigned k, unsigned p);
Dyadic gap_up(const Weights& w, unsigned k, unsigned p);
// gap / d^(|w|-1); 0 on the empty sequence
Rational ds_low(const Weights& w, unsigned k, unsigned p);
Rational ds_up(const Weights& w, unsigned k, unsigned p);

enum class GapRounding { low, up };

// Range [lo, hi] of gap indices i (gap = i * r) tracked by the comparator; both ends absorb.
struct GapBounds {
  std::int64_t lo;
  std::int64_t hi;
};
GapBounds comp_bounds(GapRounding kind, std::int64_t mu, unsigned k, unsigned p);
// One comparator step from index i on weight u, clamped to the bounds.
std::int64_t comp_step(GapRounding kind, const GapBounds& b, std::int64_t i, std::int64_t u, unsigned k,
                       unsigned p);

inline constexpr std::size_t kDefaultStateCap = std::size_t{1} << 22;

// Finite-word DFA over weight_alphabet(mu); state id = gap index - lo, initial id = -lo.
// R is le or ge. Throws std::length_error when the state count exceeds the cap.
Acceptor build_comp_low(std::int64_t mu, unsigned k, unsigned p, Relation r,
                        std::size_t state_cap = kDefaultStateCap);
Acceptor build_comp_up(std::int64_t mu, unsigned k, unsigned p, Relation r,
                       std::size_t state_cap = kDefaultStateCap);

// Max DS over runs reading the finite word; absent when no run exists.
std::optional<Rational> finite_sup(const WeightedAutomaton& w, const std::vector<Symbol>& word, const Rational& d);

enum class ApproxOutcome { not_included, close_included, included, not_far_included };
const char* to_string(ApproxOutcome o);

struct ApproxResult {
  ApproxOutcome outcome = ApproxOutcome::close_included;
  std::vector<Symbol> witness;  // separating word when a run escapes domination
  Rational wt_p;
  Rational wt_q;
  std::size_t explored = 0;
};

// Either not_included (witness verified exactly) or close_included: P <= Q + d*eps.
ApproxResult low_approx_inc(const WeightedAutomaton& p, const WeightedAutomaton& q, unsigned k, unsigned prec);
// Either included or not_far_included: P <= Q - d*eps fails (witness verified exactly).
ApproxResult upper_approx_inc(const WeightedAutomaton& p, const WeightedAutomaton& q, unsigned k, unsigned prec);

struct AnytimeBudget {
  unsigned max_rounds = 12;
  std::optional<unsigned> min_eps_exponent;  // stop after the round with eps = 2^-this
};

struct RoundRecord {
  unsigned round = 0;
  unsigned p = 0;
  ApproxOutcome low = ApproxOutcome::close_included;
  std::optional<ApproxOutcome> up;
  std::size_t explored = 0;
};

struct AnytimeVerdict {
  enum class Kind { not_included, included, close_included };
  Kind kind = Kind::close_included;
  std::vector<Symbol> witness;
  Rational wt_p;
  Rational wt_q;
  unsigned eps_exponent = 0;  // eps = 2^-eps_exponent of the last completed round
  std::vector<RoundRecord> trace;
};
const char* to_string(AnytimeVerdict::Kind k);

AnytimeVerdict anytime_inclusion(const WeightedAutomaton& p, const WeightedAutomaton& q, unsigned k,
                                 const AnytimeBudget& budget);

}  // namespace qcomp
