// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qcomp/exact.hpp"

namespace qcomp {

using State = std::uint32_t;
using Symbol = std::uint32_t;

enum class Mode { omega, finite };

// safety: non-accepting states are absorbing rejecting sinks.
// cosafety: accepting states are absorbing accepting sinks.
// weak: blocks of uniform acceptance, transitions never climb the block order.
// buchi: plain accepting-state set.
// finite: finite-word acceptance by final state.
enum class Acceptance { safety, cosafety, weak, buchi, finite };

const char* to_string(Acceptance a);
Acceptance parse_acceptance(std::string_view s);

struct LassoWord {
  std::vector<Symbol> head;
  std::vector<Symbol> loop;

  friend bool operator==(const LassoWord&, const LassoWord&) = default;
};

// Primitive loop, head shortened by rotating the loop backwards while the
// head keeps at least one symbol.
LassoWord normal_form(const LassoWord& w);

// "h0,h1;l0,l1" over symbol names; a missing ';' yields an empty loop.
LassoWord parse_word(std::string_view text, const std::vector<std::string>& alphabet);
std::string format_word(const LassoWord& w, const std::vector<std::string>& alphabet);

struct WeightedTransition {
  State src;
  Symbol sym;
  State dst;
  std::int64_t weight;
};

// Complete nondeterministic weighted automaton; all states accepting, word
// weight is the supremum over runs.
class WeightedAutomaton {
 public:
  WeightedAutomaton(std::vector<std::string> alphabet, std::size_t states, State initial,
                    std::vector<WeightedTransition> transitions, Mode mode = Mode::omega);

  const std::vector<std::string>& alphabet() const { return alphabet_; }
  std::size_t state_count() const { return out_.size(); }
  State initial() const { return initial_; }
  Mode mode() const { return mode_; }
  const std::vector<WeightedTransition>& transitions() const { return trans_; }
  // transition ids leaving s, in input order
  const std::vector<std::uint32_t>& outgoing(State s) const { return out_[s]; }
  std::int64_t mu() const;  // max |weight|, at least 1
  std::int64_t min_weight() const;
  std::int64_t max_weight() const;

 private:
  std::vector<std::string> alphabet_;
  State initial_;
  Mode mode_;
  std::vector<WeightedTransition> trans_;
  std::vector<std::vector<std::uint32_t>> out_;
};

struct Edge {
  Symbol sym;
  State dst;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

class Acceptor {
 public:
  Acceptor(std::vector<std::string> alphabet, std::size_t states, State initial, Acceptance acc);

  State add_state(bool accepting);
  void add_edge(State src, Symbol sym, State dst);
  void set_accepting(State s, bool accepting) { accepting_.at(s) = accepting; }
  void set_initial(State s) { initial_ = s; }
  // block_of[s] for every state; order holds (lower, upper) pairs
  void set_blocks(std::vector<int> block_of, std::vector<std::pair<int, int>> order);

  const std::vector<std::string>& alphabet() const { return alphabet_; }
  Symbol symbol(std::string_view name) const;
  std::size_t state_count() const { return out_.size(); }
  State initial() const { return initial_; }
  Acceptance acceptance() const { return acc_; }
  Mode mode() const { return acc_ == Acceptance::finite ? Mode::finite : Mode::omega; }
  bool accepting(State s) const { return accepting_[s] != 0; }
  std::span<const Edge> edges(State s) const { return out_[s]; }
  std::span<const Edge> successors(State s, Symbol a) const;
  std::optional<State> next(State s, Symbol a) const;  // first successor
  std::size_t edge_count() const;
  bool deterministic() const;
  bool complete() const;

  const std::vector<int>& block_of() const { return block_; }
  const std::vector<std::pair<int, int>>& block_order() const { return order_; }
  int block_count() const;

  // Empty when the structural invariants of the acceptance kind hold.
  std::string structural_error() const;
  void check() const;

 private:
  std::vector<std::string> alphabet_;
  State initial_;
  Acceptance acc_;
  std::vector<std::vector<Edge>> out_;
  std::vector<char> accepting_;
  std::vector<int> block_;
  std::vector<std::pair<int, int>> order_;
};

bool lasso_membership(const Acceptor& a, const LassoWord& w);
bool accepts_finite(const Acceptor& a, const std::vector<Symbol>& w);

// Accepting lasso of a safety, co-safety or weak acceptor, if any.
std::optional<LassoWord> nonemptiness(const Acceptor& a);

Acceptor intersect_safety_cosafety(const Acceptor& s, const Acceptor& c);
Acceptor intersect_safety(const Acceptor& a, const Acceptor& b);
Acceptor minimize_deterministic(const Acceptor& a);
// Adds one rejecting sink for every missing (state, symbol) pair.
Acceptor complete_with_sink(const Acceptor& a);

struct AnnotatedAutomaton {
  Acceptor automaton;                // symbol id == transition label
  std::vector<Symbol> letter;        // per label
  std::vector<std::int64_t> weight;  // per label
};

AnnotatedAutomaton annotate(const WeightedAutomaton& w);

}  // namespace qcomp
