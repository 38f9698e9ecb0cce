// SPDX-License-Identifier: Apache-2.0
#include "qcomp/games.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <map>
#include <sstream>
#include <stdexcept>

#include "qcomp/wa_format.hpp"

namespace qcomp {

QuantGame::QuantGame(std::size_t states, State initial)
    : initial_(initial), owner_(states, Player::maximizer), out_(states), labels_(states) {
  if (states == 0) throw std::invalid_argument("game needs at least one state");
  if (initial >= states) throw std::invalid_argument("initial state out of range");
}

void QuantGame::add_edge(State src, State dst, Rational cost) {
  if (src >= state_count() || dst >= state_count()) throw std::invalid_argument("edge endpoint out of range");
  out_[src].push_back(static_cast<std::uint32_t>(edges_.size()));
  edges_.push_back({src, dst, std::move(cost)});
}

void QuantGame::check() const {
  for (State s = 0; s < state_count(); ++s) {
    if (out_[s].empty()) throw std::invalid_argument("state " + std::to_string(s) + " has no outgoing edge");
  }
}

Rational QuantGame::mu() const {
  Rational m = 0;
  for (const auto& e : edges_) m = std::max(m, Rational(abs(e.cost)));
  return m;
}

bool QuantGame::integer_costs() const {
  return std::all_of(edges_.begin(), edges_.end(), [](const GameEdge& e) { return e.cost.get_den() == 1; });
}

// ---------------------------------------------------------------------------
// .game format

namespace {

std::size_t parse_index(const Token& t, std::size_t limit, int line, const char* what) {
  std::size_t v = 0;
  auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
  if (ec != std::errc() || p != t.text.data() + t.text.size()) {
    throw ParseError(line, t.column, std::string("expected ") + what);
  }
  if (v >= limit) throw ParseError(line, t.column, std::string(what) + " out of range");
  return v;
}

std::string cost_text(const Rational& c) {
  return c.get_den() == 1 ? c.get_num().get_str() : to_string(c);
}

}  // namespace

QuantGame parse_game(std::string_view text) {
  bool header = false;
  std::optional<std::size_t> states;
  std::optional<State> init;
  std::vector<std::pair<State, Player>> owners;
  std::vector<std::pair<State, std::string>> labels;
  std::vector<GameEdge> edges;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto toks = tokenize_line(line);
    if (!toks.empty()) {
      const auto& key = toks[0].text;
      auto need = [&](std::size_t n) {
        if (toks.size() != n) throw ParseError(line_no, toks[0].column, "wrong number of fields for '" +
                                                                            std::string(key) + "'");
      };
      auto n_states = [&]() -> std::size_t {
        if (!states) throw ParseError(line_no, toks[0].column, "'states' must come first");
        return *states;
      };
      if (!header) {
        if (toks.size() != 2 || key != "game" || toks[1].text != "v1") {
          throw ParseError(line_no, toks[0].column, "expected header 'game v1'");
        }
        header = true;
      } else if (key == "states") {
        need(2);
        if (states) throw ParseError(line_no, toks[0].column, "duplicate 'states'");
        states = parse_index(toks[1], SIZE_MAX, line_no, "state count");
        if (*states == 0) throw ParseError(line_no, toks[1].column, "state count must be positive");
      } else if (key == "init") {
        need(2);
        init = static_cast<State>(parse_index(toks[1], n_states(), line_no, "state"));
      } else if (key == "owner") {
        need(3);
        auto s = static_cast<State>(parse_index(toks[1], n_states(), line_no, "state"));
        auto o = parse_index(toks[2], 2, line_no, "owner");
        owners.emplace_back(s, o == 0 ? Player::maximizer : Player::minimizer);
      } else if (key == "label") {
        if (toks.size() < 3) throw ParseError(line_no, toks[0].column, "label needs a state and a name");
        auto s = static_cast<State>(parse_index(toks[1], n_states(), line_no, "state"));
        for (std::size_t i = 2; i < toks.size(); ++i) labels.emplace_back(s, std::string(toks[i].text));
      } else if (key == "edge") {
        need(4);
        auto src = static_cast<State>(parse_index(toks[1], n_states(), line_no, "state"));
        auto dst = static_cast<State>(parse_index(toks[2], n_states(), line_no, "state"));
        Rational c;
        try {
          c = parse_rational(toks[3].text);
        } catch (const std::invalid_argument&) {
          throw ParseError(line_no, toks[3].column, "bad cost '" + std::string(toks[3].text) + "'");
        }
        edges.push_back({src, dst, c});
      } else {
        throw ParseError(line_no, toks[0].column, "unknown directive '" + std::string(key) + "'");
      }
    }
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  if (!header) throw ParseError(line_no, 1, "missing header 'game v1'");
  if (!states) throw ParseError(line_no, 1, "missing 'states'");
  if (!init) throw ParseError(line_no, 1, "missing 'init'");
  QuantGame g(*states, *init);
  for (auto [s, o] : owners) g.set_owner(s, o);
  for (auto& [s, l] : labels) g.add_label(s, l);
  for (auto& e : edges) g.add_edge(e.src, e.dst, e.cost);
  try {
    g.check();
  } catch (const std::invalid_argument& e) {
    throw ParseError(line_no, 1, e.what());
  }
  return g;
}

std::string serialize_game(const QuantGame& g) {
  std::ostringstream out;
  out << "game v1\nstates " << g.state_count() << "\ninit " << g.initial() << "\n";
  for (State s = 0; s < g.state_count(); ++s) out << "owner " << s << ' ' << static_cast<int>(g.owner(s)) << "\n";
  for (State s = 0; s < g.state_count(); ++s) {
    if (g.labels(s).empty()) continue;
    out << "label " << s;
    for (const auto& l : g.labels(s)) out << ' ' << l;
    out << "\n";
  }
  for (const auto& e : g.edges()) out << "edge " << e.src << ' ' << e.dst << ' ' << cost_text(e.cost) << "\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// Value iteration on integers: S_k(v) = L * p^(k-1) * wt_k(v), L the lcm of cost denominators.

namespace {

struct ScaledVI {
  const QuantGame& g;
  Integer p, q, scale;
  std::vector<Integer> cost;  // cost * scale
  std::vector<Integer> s;     // current S_k
  std::vector<std::uint32_t> choice;
  Integer p_pow = 1;  // p^(k-1) once k >= 1
  std::size_t k = 0;

  ScaledVI(const QuantGame& game, const Rational& d) : g(game), p(d.get_num()), q(d.get_den()), scale(1) {
    if (d <= 1) throw std::invalid_argument("discount factor must exceed 1");
    g.check();
    for (const auto& e : g.edges()) mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), e.cost.get_den().get_mpz_t());
    for (const auto& e : g.edges()) cost.push_back(Integer(e.cost * scale));
    s.assign(g.state_count(), 0);
    choice.assign(g.state_count(), 0);
  }

  void step() {
    if (k >= 1) p_pow *= p;
    std::vector<Integer> next(s.size());
    Integer cand;
    for (State v = 0; v < s.size(); ++v) {
      bool first = true;
      const bool maxi = g.owner(v) == Player::maximizer;
      for (auto e : g.outgoing(v)) {
        cand = cost[e] * p_pow + q * s[g.edges()[e].dst];
        if (first || (maxi ? cand > next[v] : cand < next[v])) {
          next[v] = cand;
          choice[v] = e;
          first = false;
        }
      }
    }
    s.swap(next);
    ++k;
  }

  Rational value(State v) const { return Rational(s[v]) / (Rational(scale) * Rational(p_pow)); }
};

}  // namespace

std::vector<Rational> value_iteration(const QuantGame& g, const Rational& d, std::size_t rounds) {
  ScaledVI vi(g, d);
  for (std::size_t i = 0; i < rounds; ++i) vi.step();
  std::vector<Rational> out(g.state_count());
  if (rounds == 0) return out;
  for (State v = 0; v < g.state_count(); ++v) out[v] = vi.value(v);
  return out;
}

std::vector<std::uint32_t> vi_choice(const QuantGame& g, const Rational& d, std::size_t rounds) {
  if (rounds == 0) throw std::invalid_argument("rounds must be positive");
  ScaledVI vi(g, d);
  for (std::size_t i = 0; i < rounds; ++i) vi.step();
  return vi.choice;
}

IterationBounds iteration_and_denominator_bounds(const QuantGame& g, const Rational& d) {
  ScaledVI vi(g, d);  // validates and computes the scale
  const Integer& p = vi.p;
  const Integer& q = vi.q;
  const auto n = static_cast<unsigned long>(g.state_count());
  IterationBounds b;
  b.scale = vi.scale;
  b.bound_w = (pow(p, n) - pow(q, n)) * pow(p, n);
  b.bound_diff = (pow(p, n * n) - pow(q, n * n)) * pow(p, n * n);
  const Integer mu = Integer(g.mu() * vi.scale);
  // least k with 2 mu / ((d - 1) d^(k-1)) < 1 / bound_diff, i.e. 2 mu bd q^k < (p - q) p^(k-1)
  const Integer lhs_base = 2 * mu * b.bound_diff;
  Integer qk = q, pk1 = 1;
  std::size_t k = 1;
  while (!(lhs_base * qk < (p - q) * pk1)) {
    qk *= q;
    pk1 *= p;
    ++k;
  }
  b.k_star = k;
  return b;
}

namespace {

std::optional<Rational> recover(const ScaledVI& vi, const IterationBounds& b, const Rational& mu, State v) {
  const Rational wt = Rational(vi.s[v]) / Rational(vi.p_pow);  // value of the cost-scaled game
  const Rational half = mu * b.scale * Rational(pow(vi.q, static_cast<unsigned long>(vi.k))) /
                        (Rational(vi.p - vi.q) * Rational(vi.p_pow));
  auto rec = best_rational_in_interval(wt - half, wt + half, b.bound_w);
  if (!rec.value) throw std::logic_error("value-iteration interval holds no candidate optimum");
  if (rec.ambiguous) return std::nullopt;
  return *rec.value / Rational(b.scale);
}

// VI up to k* rounds, then further rounds while some requested state is still ambiguous. That only
// happens when bound_diff < bound_w^2 (single-state games); width below 1 / bound_w^2 always isolates.
std::vector<Rational> recover_all(const QuantGame& g, const Rational& d, const std::vector<State>& states,
                                  std::size_t& rounds) {
  const IterationBounds b = iteration_and_denominator_bounds(g, d);
  ScaledVI vi(g, d);
  for (std::size_t i = 0; i < b.k_star; ++i) vi.step();
  const Rational mu = g.mu();
  const Rational limit = Rational(1) / (Rational(b.bound_w) * Rational(b.bound_w));
  for (;;) {
    std::vector<Rational> out;
    for (auto v : states) {
      auto r = recover(vi, b, mu, v);
      if (!r) break;
      out.push_back(*r);
    }
    if (out.size() == states.size()) {
      rounds = vi.k;
      return out;
    }
    const Rational width = 2 * mu * b.scale * Rational(pow(vi.q, static_cast<unsigned long>(vi.k))) /
                           (Rational(vi.p - vi.q) * Rational(vi.p_pow));
    if (width < limit) throw std::logic_error("value-iteration interval does not isolate the optimum");
    vi.step();
  }
}

}  // namespace

OptimalValue optimal_value_exact(const QuantGame& g, const Rational& d) {
  OptimalValue out;
  out.value = recover_all(g, d, {g.initial()}, out.rounds)[0];
  return out;
}

std::vector<Rational> optimal_values_exact(const QuantGame& g, const Rational& d) {
  std::vector<State> all(g.state_count());
  for (State v = 0; v < g.state_count(); ++v) all[v] = v;
  std::size_t rounds = 0;
  return recover_all(g, d, all, rounds);
}

Rational profile_value(const QuantGame& g, const Rational& d, const std::vector<std::uint32_t>& choice) {
  std::vector<long> seen(g.state_count(), -1);
  std::vector<Rational> costs;
  State v = g.initial();
  while (seen[v] < 0) {
    seen[v] = static_cast<long>(costs.size());
    const auto& e = g.edges().at(choice.at(v));
    if (e.src != v) throw std::invalid_argument("choice is not an edge of its state");
    costs.push_back(e.cost);
    v = e.dst;
  }
  const auto h = static_cast<std::size_t>(seen[v]);
  Rational head = 0, loop = 0, f = 1;
  for (std::size_t i = 0; i < costs.size(); ++i) {
    if (i == h) f = 1;
    (i < h ? head : loop) += costs[i] * f;
    f /= d;
  }
  // loop DS over one period is `loop`, period length costs.size() - h
  const Rational period = pow(d, costs.size() - h);
  return head + loop * period / (period - 1) / pow(d, h);
}

std::size_t vi_stabilization_round(const QuantGame& g, const Rational& d, std::size_t max_rounds) {
  const Rational opt = optimal_value_exact(g, d).value;
  ScaledVI vi(g, d);
  std::size_t last_bad = 0;
  for (std::size_t k = 1; k <= max_rounds; ++k) {
    vi.step();
    if (profile_value(g, d, vi.choice) != opt) last_bad = k;
  }
  return last_bad + 1;
}

// ---------------------------------------------------------------------------
// Solving

namespace {

Player other(Player p) { return p == Player::maximizer ? Player::minimizer : Player::maximizer; }

Adjacency predecessors(const Arena& a) {
  Adjacency pred(a.succ.size());
  for (State v = 0; v < a.succ.size(); ++v) {
    for (auto w : a.succ[v]) pred[w].push_back(v);
  }
  return pred;
}

// Attractor of `player` from the seed states (already flagged in `in`), growing only inside in_domain.
// `missing` holds, per state, the successors not yet attracted; choice[v] records the successor index
// used by player states that joined.
void attract(const Arena& a, const Adjacency& pred, Player player, const std::vector<State>& seeds,
             const std::vector<char>& in_domain, std::vector<char>& in, std::vector<std::size_t>& missing,
             std::vector<std::int64_t>& choice) {
  std::deque<State> work(seeds.begin(), seeds.end());
  while (!work.empty()) {
    State w = work.front();
    work.pop_front();
    for (auto v : pred[w]) {  // one entry per edge v -> w
      if (!in_domain[v] || in[v]) continue;
      if (a.owner[v] == player) {
        auto it = std::find(a.succ[v].begin(), a.succ[v].end(), w);
        choice[v] = it - a.succ[v].begin();
      } else if (--missing[v] != 0) {
        continue;
      }
      in[v] = 1;
      work.push_back(v);
    }
  }
}

}  // namespace

std::vector<std::string> GameSolution::strategy_lines() const {
  std::vector<std::string> out;
  for (State v = 0; v < strategy.size(); ++v) {
    if (strategy[v] < 0) continue;
    out.push_back(arena.names[v] + " -> " + arena.names[arena.succ[v][static_cast<std::size_t>(strategy[v])]]);
  }
  return out;
}

GameSolution solve_attractor(Arena arena, Objective obj) {
  const std::size_t n = arena.succ.size();
  for (State v = 0; v < n; ++v) {
    if (arena.succ[v].empty()) throw std::invalid_argument("arena state without successor");
  }
  const Adjacency pred = predecessors(arena);
  const std::vector<char> all(n, 1);
  std::vector<std::size_t> missing(n);
  for (State v = 0; v < n; ++v) missing[v] = arena.succ[v].size();
  std::vector<char> win(n, 0);                   // minimizer wins
  std::vector<std::int64_t> choice(n, -1);       // per state, for its owner
  auto keep_inside = [&](State v, bool want) {  // any successor whose win flag is `want`
    for (std::size_t i = 0; i < arena.succ[v].size(); ++i) {
      if (static_cast<bool>(win[arena.succ[v][i]]) == want) return static_cast<std::int64_t>(i);
    }
    return std::int64_t{-1};
  };

  if (obj == Objective::safety || obj == Objective::reachability) {
    const bool safety = obj == Objective::safety;
    std::vector<char> in(n);
    std::vector<State> seeds;
    for (State v = 0; v < n; ++v) {
      in[v] = safety ? !arena.good[v] : arena.good[v];
      if (in[v]) seeds.push_back(v);
    }
    const Player attractor_owner = safety ? Player::maximizer : Player::minimizer;
    attract(arena, pred, attractor_owner, seeds, all, in, missing, choice);
    for (State v = 0; v < n; ++v) win[v] = safety ? !in[v] : in[v];
    for (State v = 0; v < n; ++v) {
      const bool mine = arena.owner[v] == Player::minimizer;
      if (safety && win[v] && mine) choice[v] = keep_inside(v, true);
      if (!safety && !win[v] && !mine) choice[v] = keep_inside(v, false);
      if (safety && !arena.good[v] && !mine) choice[v] = -1;  // already lost for the minimizer
      if (!safety && arena.good[v] && mine) choice[v] = -1;   // already won
    }
  } else {
    const SccResult scc = tarjan_scc(arena.succ);
    std::vector<std::vector<State>> members(scc.count);
    for (State v = 0; v < n; ++v) members[scc.comp[v]].push_back(v);
    std::vector<char> dom(n, 0), in(n, 0);
    for (int c = 0; c < scc.count; ++c) {  // successors' components come first
      const auto& m = members[c];
      const bool good = arena.good[m[0]];
      for (auto v : m) {
        if (static_cast<bool>(arena.good[v]) != good) throw std::invalid_argument("weak arena has a mixed SCC");
      }
      // The player losing the component's acceptance tries to leave it towards states it already wins.
      const Player leaver = good ? Player::maximizer : Player::minimizer;
      std::vector<State> seeds;
      for (auto v : m) {
        for (auto w : arena.succ[v]) {
          if (scc.comp[w] != c && static_cast<bool>(win[w]) == (leaver == Player::minimizer) && !in[w]) {
            in[w] = 1;
            seeds.push_back(w);
          }
        }
      }
      for (auto v : m) dom[v] = 1;
      attract(arena, pred, leaver, seeds, dom, in, missing, choice);
      for (auto v : m) win[v] = (leaver == Player::minimizer) ? in[v] : !in[v];
      for (auto v : m) {
        dom[v] = 0;
        in[v] = 0;
      }
      for (auto w : seeds) in[w] = 0;
      for (auto v : m) {
        const Player stayer = other(leaver);
        const bool stayer_wins = (stayer == Player::minimizer) == static_cast<bool>(win[v]);
        if (arena.owner[v] == stayer && stayer_wins) choice[v] = keep_inside(v, stayer == Player::minimizer);
      }
    }
  }

  GameSolution sol;
  sol.minimizer_wins = win[arena.initial];
  sol.minimizer_region = win;
  sol.strategy.assign(n, -1);
  const Player winner = sol.winner();
  for (State v = 0; v < n; ++v) {
    const bool in_region = (winner == Player::minimizer) == static_cast<bool>(win[v]);
    if (arena.owner[v] == winner && in_region) sol.strategy[v] = choice[v];
  }
  sol.arena = std::move(arena);
  return sol;
}

// ---------------------------------------------------------------------------
// Satisficing

Arena satisfice_arena(const QuantGame& g, std::int64_t d, const ThresholdValue& v, Relation r) {
  if (r != Relation::le && r != Relation::lt) throw std::invalid_argument("satisficing supports le and lt");
  if (d < 2) throw std::invalid_argument("satisficing needs an integer discount factor >= 2");
  if (!g.integer_costs()) throw std::invalid_argument("satisficing needs integer costs");
  g.check();
  std::int64_t mu = std::max<std::int64_t>(1, g.mu().get_num().get_si());
  for (auto x : v.head) mu = std::max(mu, std::abs(x));
  for (auto x : v.loop) mu = std::max(mu, std::abs(x));
  const Rational val = v.value(d);
  while (abs(val) >= make_rational(mu * d, d - 1)) ++mu;
  const Acceptor cmp = build_threshold_comparator(mu, d, r, v);

  Arena a;
  std::map<std::pair<State, State>, State> ids;
  std::vector<std::pair<State, State>> pairs;
  auto intern = [&](State gs, State cs) {
    auto [it, fresh] = ids.emplace(std::make_pair(gs, cs), static_cast<State>(pairs.size()));
    if (fresh) {
      pairs.emplace_back(gs, cs);
      a.owner.push_back(g.owner(gs));
      a.good.push_back(cmp.accepting(cs));
      a.names.push_back(std::to_string(gs) + "@" + std::to_string(cs));
      a.game_state.push_back(gs);
      a.succ.emplace_back();
    }
    return it->second;
  };
  a.initial = intern(g.initial(), cmp.initial());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    auto [gs, cs] = pairs[i];
    for (auto e : g.outgoing(gs)) {
      const auto& edge = g.edges()[e];
      auto c2 = cmp.next(cs, weight_symbol(mu, edge.cost.get_num().get_si()));
      if (!c2) throw std::logic_error("threshold comparator is incomplete");
      State t = intern(edge.dst, *c2);
      a.succ[i].push_back(t);
    }
  }
  return a;
}

GameSolution satisfice(const QuantGame& g, std::int64_t d, const ThresholdValue& v, Relation r) {
  return solve_attractor(satisfice_arena(g, d, v, r), r == Relation::le ? Objective::safety : Objective::reachability);
}

std::string label_letter(const QuantGame& g, State s) {
  const auto& ls = g.labels(s);
  if (ls.empty()) return "_";
  std::string out;
  for (std::size_t i = 0; i < ls.size(); ++i) {
    if (i) out += '+';
    out += ls[i];
  }
  return out;
}

Arena with_safety_objective(const Arena& product, const QuantGame& g, const Acceptor& objective) {
  if (objective.acceptance() != Acceptance::safety) throw std::invalid_argument("objective must be a safety acceptor");
  if (!objective.deterministic()) throw std::invalid_argument("objective must be deterministic");
  const Acceptor o = complete_with_sink(objective);
  if (auto err = o.structural_error(); !err.empty()) throw std::invalid_argument("objective: " + err);
  std::vector<Symbol> letter(g.state_count());
  for (State s = 0; s < g.state_count(); ++s) {
    const std::string l = label_letter(g, s);
    const auto& alpha = o.alphabet();
    auto it = std::find(alpha.begin(), alpha.end(), l);
    if (it == alpha.end()) throw std::invalid_argument("label '" + l + "' is not in the objective alphabet");
    letter[s] = static_cast<Symbol>(it - alpha.begin());
  }
  Arena a;
  std::map<std::pair<State, State>, State> ids;
  std::vector<std::pair<State, State>> pairs;
  auto intern = [&](State ps, State os) {
    auto [it, fresh] = ids.emplace(std::make_pair(ps, os), static_cast<State>(pairs.size()));
    if (fresh) {
      pairs.emplace_back(ps, os);
      a.owner.push_back(product.owner[ps]);
      a.good.push_back(product.good[ps] && o.accepting(os));
      a.names.push_back(product.names[ps] + "@" + std::to_string(os));
      a.game_state.push_back(product.game_state[ps]);
      a.succ.emplace_back();
    }
    return it->second;
  };
  a.initial = intern(product.initial, *o.next(o.initial(), letter[product.game_state[product.initial]]));
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    auto [ps, os] = pairs[i];
    for (auto t : product.succ[ps]) {
      State u = intern(t, *o.next(os, letter[product.game_state[t]]));
      a.succ[i].push_back(u);
    }
  }
  return a;
}

GameSolution satisfice_with_objective(const QuantGame& g, std::int64_t d, const ThresholdValue& v, Relation r,
                                      const Acceptor& objective) {
  return solve_attractor(with_safety_objective(satisfice_arena(g, d, v, r), g, objective), Objective::weak);
}

}  // namespace qcomp
