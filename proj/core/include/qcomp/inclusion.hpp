// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qcomp/automata.hpp"
#include "qcomp/exact.hpp"

namespace qcomp {

// nonstrict: P(w) <= Q(w) for every w.  strict: P(w) < Q(w) for every w.
enum class Strictness { nonstrict, strict };

// Transition ids of `w` leaving each state, grouped by letter.
std::vector<std::vector<std::vector<std::uint32_t>>> transitions_by_letter(const WeightedAutomaton& w);

// Lazily explored maximal automaton of Q. A state is a Q state s (the candidate run)
// plus the set of (alternative state, comparator state) pairs still able to beat it.
// It reads Q transition ids; a transition not leaving s has no successor.
class MaximalAutomaton {
 public:
  MaximalAutomaton(const WeightedAutomaton& q, std::int64_t d);

  State initial() const { return 0; }
  State q_state(State m) const { return states_[m].first; }
  // nullopt once some alternative run is certainly heavier than the candidate
  std::optional<State> step(State m, std::uint32_t transition);
  std::size_t size() const { return states_.size(); }
  const WeightedAutomaton& automaton() const { return q_; }

 private:
  using Pairs = std::vector<std::pair<State, State>>;
  State intern(State s, Pairs x);

  const WeightedAutomaton& q_;
  std::int64_t mu_;
  Acceptor cmp_;
  std::vector<char> drop_;
  std::vector<std::vector<std::vector<std::uint32_t>>> by_letter_;
  std::vector<std::pair<State, Pairs>> states_;
  std::map<std::pair<State, Pairs>, State> ids_;
  std::unordered_map<std::uint64_t, std::uint32_t> memo_;
};

// Explicit maximal automaton over the annotated alphabet of Q (safety; one rejecting sink).
Acceptor maximal_automaton(const WeightedAutomaton& q, std::int64_t d);

// Explicit counterexample automaton over pairs "i,j" of P and Q transition ids with equal letters.
// Safety for strict queries, weak for nonstrict ones.
Acceptor counterexample_automaton(const WeightedAutomaton& p, const WeightedAutomaton& q, std::int64_t d,
                                  Strictness s);

// Sup of DS over all runs on the lasso word, from every state (reading from loop position 0 of
// an empty-head word) or from the initial state.
std::vector<Rational> lasso_sup_values(const WeightedAutomaton& w, const std::vector<Symbol>& loop,
                                       const Rational& d);
Rational sup_weight(const WeightedAutomaton& w, const LassoWord& word, const Rational& d);

struct WitnessCheck {
  Rational wt_p;
  Rational wt_q;
  bool violates = false;
};
WitnessCheck verify_witness(const WeightedAutomaton& p, const WeightedAutomaton& q, const Rational& d,
                            const LassoWord& word, Strictness s);

struct InclusionVerdict {
  bool included = true;
  LassoWord word;           // normal form, over the shared alphabet
  LassoWord run;            // P transition ids of the violating run
  LassoWeights run_weights;
  Rational wt_p;            // sup over P runs
  Rational wt_q;            // sup over Q runs
  std::size_t product_states = 0;
  std::size_t maximal_states = 0;
};

InclusionVerdict check_inclusion(const WeightedAutomaton& p, const WeightedAutomaton& q, std::int64_t d,
                                 Strictness s);

}  // namespace qcomp
