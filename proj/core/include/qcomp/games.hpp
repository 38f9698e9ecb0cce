// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qcomp/automata.hpp"
#include "qcomp/comparator_ds.hpp"
#include "qcomp/exact.hpp"
#include "qcomp/graph.hpp"

namespace qcomp {

// Player 0 maximizes the discounted cost, player 1 minimizes it.
enum class Player : std::uint8_t { maximizer = 0, minimizer = 1 };

struct GameEdge {
  State src;
  State dst;
  Rational cost;
};

class QuantGame {
 public:
  QuantGame(std::size_t states, State initial);

  void set_owner(State s, Player p) { owner_.at(s) = p; }
  void add_edge(State src, State dst, Rational cost);
  void add_label(State s, std::string label) { labels_.at(s).push_back(std::move(label)); }
  // Throws std::invalid_argument when some state has no outgoing edge.
  void check() const;

  std::size_t state_count() const { return owner_.size(); }
  State initial() const { return initial_; }
  Player owner(State s) const { return owner_[s]; }
  const std::vector<GameEdge>& edges() const { return edges_; }
  // edge ids leaving s, in insertion order
  const std::vector<std::uint32_t>& outgoing(State s) const { return out_[s]; }
  const std::vector<std::string>& labels(State s) const { return labels_[s]; }
  Rational mu() const;  // max |cost|
  bool integer_costs() const;

 private:
  State initial_;
  std::vector<Player> owner_;
  std::vector<GameEdge> edges_;
  std::vector<std::vector<std::uint32_t>> out_;
  std::vector<std::vector<std::string>> labels_;
};

// `.game` text format.
QuantGame parse_game(std::string_view text);
std::string serialize_game(const QuantGame& g);

// Optimal cost of the k-round game from every state: wt_0 = 0 and
// wt_{k+1}(v) = max / min over edges (cost + wt_k(dst) / d). Ties go to the lowest edge id.
std::vector<Rational> value_iteration(const QuantGame& g, const Rational& d, std::size_t rounds);
// Edge chosen at every state by the first move of an optimal `rounds`-round play.
std::vector<std::uint32_t> vi_choice(const QuantGame& g, const Rational& d, std::size_t rounds);

struct IterationBounds {
  std::size_t k_star = 0;  // VI rounds after which the interval isolates the optimum
  Integer bound_w;         // denominator bound of the optimum (for costs scaled to integers)
  Integer bound_diff;      // denominator bound of the least nonzero value difference
  Integer scale;           // lcm of cost denominators
};
IterationBounds iteration_and_denominator_bounds(const QuantGame& g, const Rational& d);

struct OptimalValue {
  Rational value;
  std::size_t rounds = 0;
};
// Exact optimum from the initial state: VI for k* rounds, then the unique rational with denominator at most
// bound_w in the final interval. Extra rounds run while two candidates remain (possible for one-state games).
OptimalValue optimal_value_exact(const QuantGame& g, const Rational& d);
// Same recovery for every state from one VI run.
std::vector<Rational> optimal_values_exact(const QuantGame& g, const Rational& d);

// Exact DS from the initial state when both players follow the positional choice (one edge id per state).
Rational profile_value(const QuantGame& g, const Rational& d, const std::vector<std::uint32_t>& choice);
// First round k <= max_rounds from which the VI choice profile has the optimal value at every later round
// up to max_rounds. max_rounds + 1 when it never settles.
std::size_t vi_stabilization_round(const QuantGame& g, const Rational& d, std::size_t max_rounds);

// Explicit game graph with an objective for the minimizer.
struct Arena {
  std::vector<Player> owner;
  Adjacency succ;
  State initial = 0;
  std::vector<char> good;
  std::vector<std::string> names;
  std::vector<State> game_state;  // projection to the underlying game
};

enum class Objective {
  safety,        // always good
  reachability,  // eventually good
  weak,          // eventually always good; every SCC must be uniformly good or bad
};

struct GameSolution {
  Arena arena;
  bool minimizer_wins = false;  // from arena.initial
  std::vector<char> minimizer_region;
  // Per state of the winner (from the initial state) inside its region: chosen successor; -1 elsewhere.
  std::vector<std::int64_t> strategy;

  Player winner() const { return minimizer_wins ? Player::minimizer : Player::maximizer; }
  // "name -> name" lines in state order
  std::vector<std::string> strategy_lines() const;
};

GameSolution solve_attractor(Arena arena, Objective obj);

// Product of the game with the threshold comparator for DS(play) R value(v), R in {le, lt}.
// le yields a safety arena, lt a reachability arena. Needs integer costs and integer d >= 2.
Arena satisfice_arena(const QuantGame& g, std::int64_t d, const ThresholdValue& v, Relation r);
GameSolution satisfice(const QuantGame& g, std::int64_t d, const ThresholdValue& v, Relation r);

// Joins the labels of a state with '+', or "_" for an unlabeled state.
std::string label_letter(const QuantGame& g, State s);
// Second product with a deterministic safety acceptor over label letters, read on every visited state.
// Weak arena: good iff the comparator condition and the objective both hold.
Arena with_safety_objective(const Arena& product, const QuantGame& g, const Acceptor& objective);
GameSolution satisfice_with_objective(const QuantGame& g, std::int64_t d, const ThresholdValue& v, Relation r,
                                      const Acceptor& objective);

}  // namespace qcomp
