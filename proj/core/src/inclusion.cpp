// SPDX-License-Identifier: Apache-2.0
#include "qcomp/inclusion.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

#include "qcomp/comparator_ds.hpp"

namespace qcomp {

std::vector<std::vector<std::vector<std::uint32_t>>> transitions_by_letter(const WeightedAutomaton& w) {
  std::vector<std::vector<std::vector<std::uint32_t>>> out(
      w.state_count(), std::vector<std::vector<std::uint32_t>>(w.alphabet().size()));
  const auto& ts = w.transitions();
  for (State s = 0; s < w.state_count(); ++s) {
    for (auto id : w.outgoing(s)) out[s][ts[id].sym].push_back(id);
  }
  return out;
}

namespace {

constexpr std::uint32_t kReject = UINT32_MAX;

void check_integer_d(std::int64_t d) {
  if (d < 2) throw std::invalid_argument("inclusion needs an integer discount factor >= 2");
}

// A state that can never change its verdict again.
std::vector<char> absorbing_rejecting(const Acceptor& a) {
  std::vector<char> out(a.state_count(), 0);
  for (State s = 0; s < a.state_count(); ++s) {
    if (a.accepting(s)) continue;
    bool self = true;
    for (auto e : a.edges(s)) self = self && e.dst == s;
    out[s] = self;
  }
  return out;
}

}  // namespace

MaximalAutomaton::MaximalAutomaton(const WeightedAutomaton& q, std::int64_t d)
    : q_(q),
      mu_(std::max<std::int64_t>(1, q.max_weight() - q.min_weight())),
      cmp_(build_ds_comparator(mu_, (check_integer_d(d), d), Relation::ge)),
      by_letter_(transitions_by_letter(q)) {
  // accepting absorbing comparator states: the candidate stays ahead of that alternative forever
  drop_.assign(cmp_.state_count(), 0);
  for (State c = 0; c < cmp_.state_count(); ++c) {
    bool self = cmp_.accepting(c);
    for (auto e : cmp_.edges(c)) self = self && e.dst == c;
    drop_[c] = self;
  }
  intern(q.initial(), {{q.initial(), cmp_.initial()}});
}

State MaximalAutomaton::intern(State s, Pairs x) {
  auto key = std::make_pair(s, std::move(x));
  auto it = ids_.find(key);
  if (it != ids_.end()) return it->second;
  auto id = static_cast<State>(states_.size());
  states_.push_back(key);
  ids_.emplace(std::move(key), id);
  return id;
}

std::optional<State> MaximalAutomaton::step(State m, std::uint32_t transition) {
  const std::uint64_t key = (static_cast<std::uint64_t>(m) << 32) | transition;
  if (auto it = memo_.find(key); it != memo_.end()) {
    if (it->second == kReject) return std::nullopt;
    return it->second;
  }
  const auto& tr = q_.transitions().at(transition);
  std::uint32_t result = kReject;
  if (tr.src == states_[m].first) {
    Pairs next;
    bool beaten = false;
    const Pairs cur = states_[m].second;  // copy: intern may reallocate states_
    for (auto [t, c] : cur) {
      for (auto alt : by_letter_[t][tr.sym]) {
        const auto& other = q_.transitions()[alt];
        const State c2 = *cmp_.next(c, weight_symbol(mu_, tr.weight - other.weight));
        if (!cmp_.accepting(c2)) {
          beaten = true;
          break;
        }
        if (!drop_[c2]) next.emplace_back(other.dst, c2);
      }
      if (beaten) break;
    }
    if (!beaten) {
      std::sort(next.begin(), next.end());
      next.erase(std::unique(next.begin(), next.end()), next.end());
      result = intern(tr.dst, std::move(next));
    }
  }
  memo_.emplace(key, result);
  if (result == kReject) return std::nullopt;
  return result;
}

Acceptor maximal_automaton(const WeightedAutomaton& q, std::int64_t d) {
  MaximalAutomaton m(q, d);
  struct Pending {
    State src;
    std::uint32_t label;
    std::optional<State> dst;
  };
  std::vector<Pending> edges;
  bool needs_sink = false;
  for (State i = 0; i < m.size(); ++i) {
    for (auto id : q.outgoing(m.q_state(i))) {
      auto r = m.step(i, id);
      needs_sink = needs_sink || !r;
      edges.push_back({i, id, r});
    }
  }
  const AnnotatedAutomaton ann = annotate(q);
  Acceptor out(ann.automaton.alphabet(), m.size(), m.initial(), Acceptance::safety);
  for (State i = 0; i < m.size(); ++i) out.set_accepting(i, true);
  std::optional<State> sink;
  if (needs_sink) {
    sink = out.add_state(false);
    for (Symbol s = 0; s < out.alphabet().size(); ++s) out.add_edge(*sink, s, *sink);
  }
  for (auto& e : edges) out.add_edge(e.src, e.label, e.dst ? *e.dst : *sink);
  return out;
}

Acceptor counterexample_automaton(const WeightedAutomaton& p, const WeightedAutomaton& q, std::int64_t d,
                                  Strictness strictness) {
  check_integer_d(d);
  if (p.alphabet() != q.alphabet()) throw std::invalid_argument("alphabet mismatch");
  const auto& tp = p.transitions();
  const auto& tq = q.transitions();
  // pair alphabet over transitions reading the same letter
  std::vector<std::string> names;
  std::map<std::pair<std::uint32_t, std::uint32_t>, Symbol> sym_of;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pair_of;
  for (std::uint32_t i = 0; i < tp.size(); ++i) {
    for (std::uint32_t j = 0; j < tq.size(); ++j) {
      if (tp[i].sym != tq[j].sym) continue;
      sym_of[{i, j}] = static_cast<Symbol>(names.size());
      pair_of.emplace_back(i, j);
      names.push_back(std::to_string(i) + "," + std::to_string(j));
    }
  }

  // safety part: annotated P synchronized with the maximal automaton of Q
  MaximalAutomaton m(q, d);
  Acceptor safe(names, 0, 0, Acceptance::safety);
  std::map<std::pair<State, State>, State> ids;
  std::vector<std::pair<State, State>> states;
  std::optional<State> sink;
  auto intern = [&](State x, State y) {
    auto [it, fresh] = ids.emplace(std::make_pair(x, y), static_cast<State>(states.size()));
    if (fresh) {
      states.emplace_back(x, y);
      safe.add_state(true);
    }
    return it->second;
  };
  intern(p.initial(), m.initial());
  std::vector<std::array<std::uint32_t, 3>> edges;
  for (std::size_t i = 0; i < states.size(); ++i) {
    auto [x, y] = states[i];
    for (auto a : p.outgoing(x)) {
      for (auto b : q.outgoing(m.q_state(y))) {
        if (tp[a].sym != tq[b].sym) continue;
        auto r = m.step(y, b);
        State dst = kReject;
        if (r) dst = intern(tp[a].dst, *r);
        edges.push_back({static_cast<std::uint32_t>(i), sym_of.at({a, b}), dst});
      }
    }
  }
  for (auto& e : edges) {
    if (e[2] == kReject) {
      if (!sink) {
        sink = safe.add_state(false);
        for (Symbol s = 0; s < names.size(); ++s) safe.add_edge(*sink, s, *sink);
      }
      e[2] = *sink;
    }
    safe.add_edge(e[0], e[1], e[2]);
  }

  // comparator on the weight difference P - Q, lifted to the pair alphabet
  const std::int64_t mu = std::max<std::int64_t>(
      {1, std::abs(p.max_weight() - q.min_weight()), std::abs(p.min_weight() - q.max_weight())});
  const Relation r = strictness == Strictness::nonstrict ? Relation::gt : Relation::ge;
  const Acceptor cmp = build_ds_comparator(mu, d, r);
  Acceptor lifted(names, cmp.state_count(), cmp.initial(), cmp.acceptance());
  for (State c = 0; c < cmp.state_count(); ++c) {
    lifted.set_accepting(c, cmp.accepting(c));
    for (Symbol s = 0; s < names.size(); ++s) {
      auto [a, b] = pair_of[s];
      lifted.add_edge(c, s, *cmp.next(c, weight_symbol(mu, tp[a].weight - tq[b].weight)));
    }
  }
  return strictness == Strictness::nonstrict ? intersect_safety_cosafety(safe, lifted)
                                             : intersect_safety(safe, lifted);
}

namespace {

// Optimal (max) discounted values on the graph of (state, word position) nodes, by policy iteration.
std::vector<Rational> position_values(const WeightedAutomaton& w, const std::vector<Symbol>& seq,
                                      std::size_t head_len, const Rational& d) {
  if (d <= 1) throw std::invalid_argument("discount factor must be > 1");
  const std::size_t len = seq.size();
  if (head_len >= len) throw std::invalid_argument("lasso loop must be nonempty");
  const auto by = transitions_by_letter(w);
  const auto& ts = w.transitions();
  const std::size_t n = w.state_count() * len;
  auto node = [&](State s, std::size_t i) { return s * len + i; };
  std::vector<std::vector<std::uint32_t>> choices(n);
  for (State s = 0; s < w.state_count(); ++s) {
    for (std::size_t i = 0; i < len; ++i) {
      if (seq[i] >= w.alphabet().size()) throw std::invalid_argument("word symbol outside the alphabet");
      choices[node(s, i)] = by[s][seq[i]];
    }
  }
  auto succ = [&](std::size_t u, std::uint32_t t) {
    std::size_t i = u % len;
    std::size_t ni = i + 1 < len ? i + 1 : head_len;
    return node(ts[t].dst, ni);
  };

  std::vector<std::uint32_t> policy(n);
  for (std::size_t u = 0; u < n; ++u) policy[u] = choices[u].front();
  std::vector<Rational> val(n);
  const Rational inv = 1 / d;
  for (;;) {
    // evaluate: every node's policy path is a lasso
    std::vector<char> mark(n, 0);  // 0 new, 1 on current path, 2 done
    for (std::size_t start = 0; start < n; ++start) {
      if (mark[start]) continue;
      std::vector<std::size_t> path;
      std::size_t u = start;
      while (mark[u] == 0) {
        mark[u] = 1;
        path.push_back(u);
        u = succ(u, policy[u]);
      }
      std::size_t stop = path.size();
      if (mark[u] == 1) {
        auto k = static_cast<std::size_t>(std::find(path.begin(), path.end(), u) - path.begin());
        LassoWeights cyc;
        for (std::size_t j = k; j < path.size(); ++j) cyc.loop.push_back(ts[policy[path[j]]].weight);
        val[path[k]] = ds_lasso(cyc, d);
        mark[path[k]] = 2;
        for (std::size_t j = path.size(); j-- > k + 1;) {
          val[path[j]] = ts[policy[path[j]]].weight + val[succ(path[j], policy[path[j]])] * inv;
          mark[path[j]] = 2;
        }
        stop = k;
      }
      for (std::size_t j = stop; j-- > 0;) {
        val[path[j]] = ts[policy[path[j]]].weight + val[succ(path[j], policy[path[j]])] * inv;
        mark[path[j]] = 2;
      }
    }
    bool improved = false;
    for (std::size_t u = 0; u < n; ++u) {
      Rational best = val[u];
      for (auto t : choices[u]) {
        Rational cand = ts[t].weight + val[succ(u, t)] * inv;
        if (cand > best) {
          best = cand;
          policy[u] = t;
          improved = true;
        }
      }
    }
    if (!improved) return val;
  }
}

}  // namespace

std::vector<Rational> lasso_sup_values(const WeightedAutomaton& w, const std::vector<Symbol>& loop,
                                       const Rational& d) {
  auto val = position_values(w, loop, 0, d);
  std::vector<Rational> out(w.state_count());
  for (State s = 0; s < w.state_count(); ++s) out[s] = val[s * loop.size()];
  return out;
}

Rational sup_weight(const WeightedAutomaton& w, const LassoWord& word, const Rational& d) {
  std::vector<Symbol> seq = word.head;
  seq.insert(seq.end(), word.loop.begin(), word.loop.end());
  auto val = position_values(w, seq, word.head.size(), d);
  return val[w.initial() * seq.size()];
}

WitnessCheck verify_witness(const WeightedAutomaton& p, const WeightedAutomaton& q, const Rational& d,
                            const LassoWord& word, Strictness s) {
  WitnessCheck out;
  out.wt_p = sup_weight(p, word, d);
  out.wt_q = sup_weight(q, word, d);
  out.violates = s == Strictness::nonstrict ? out.wt_p > out.wt_q : out.wt_p >= out.wt_q;
  return out;
}

InclusionVerdict check_inclusion(const WeightedAutomaton& p, const WeightedAutomaton& q, std::int64_t d,
                                 Strictness strictness) {
  check_integer_d(d);
  if (p.alphabet() != q.alphabet()) throw std::invalid_argument("alphabet mismatch");
  const auto& tp = p.transitions();
  const auto& tq = q.transitions();
  const auto q_by = transitions_by_letter(q);
  MaximalAutomaton m(q, d);
  const std::int64_t mu = std::max<std::int64_t>(
      {1, std::abs(p.max_weight() - q.min_weight()), std::abs(p.min_weight() - q.max_weight())});
  const bool nonstrict = strictness == Strictness::nonstrict;
  const Acceptor cmp = build_ds_comparator(mu, d, nonstrict ? Relation::gt : Relation::ge);
  const auto dead = absorbing_rejecting(cmp);

  using Key = std::array<State, 3>;  // P state, maximal state, comparator state
  std::map<Key, std::uint32_t> ids;
  std::vector<Key> keys;
  std::vector<char> color;  // 0 white, 1 gray, 2 black
  std::vector<std::uint32_t> stack_pos;
  auto intern = [&](const Key& k) {
    auto [it, fresh] = ids.emplace(k, static_cast<std::uint32_t>(keys.size()));
    if (fresh) {
      keys.push_back(k);
      color.push_back(0);
      stack_pos.push_back(0);
    }
    return it->second;
  };
  struct Succ {
    std::uint32_t label;
    std::uint32_t node;
  };
  struct Frame {
    std::uint32_t node;
    std::vector<Succ> succ;
    std::size_t next = 0;
    std::uint32_t chosen = 0;
  };
  auto expand = [&](std::uint32_t u) {
    Frame f{u, {}, 0, 0};
    const Key k = keys[u];
    for (auto a : p.outgoing(k[0])) {
      for (auto b : q_by[m.q_state(k[1])][tp[a].sym]) {
        auto m2 = m.step(k[1], b);
        if (!m2) continue;
        const State c2 = *cmp.next(k[2], weight_symbol(mu, tp[a].weight - tq[b].weight));
        if (dead[c2]) continue;
        f.succ.push_back({a, intern({tp[a].dst, *m2, c2})});
      }
    }
    return f;
  };

  InclusionVerdict verdict;
  std::vector<Frame> stack;
  const std::uint32_t root = intern({p.initial(), m.initial(), cmp.initial()});
  color[root] = 1;
  stack.push_back(expand(root));
  std::optional<std::pair<std::size_t, std::uint32_t>> back_edge;  // (stack index of target, closing label)
  while (!stack.empty() && !back_edge) {
    Frame& f = stack.back();
    if (f.next == f.succ.size()) {
      color[f.node] = 2;
      stack.pop_back();
      continue;
    }
    const Succ s = f.succ[f.next++];
    f.chosen = s.label;
    if (color[s.node] == 1) {
      if (!nonstrict || cmp.accepting(keys[s.node][2])) back_edge = std::make_pair(stack_pos[s.node], s.label);
    } else if (color[s.node] == 0) {
      color[s.node] = 1;
      stack_pos[s.node] = static_cast<std::uint32_t>(stack.size());
      stack.push_back(expand(s.node));
    }
  }
  verdict.product_states = keys.size();
  verdict.maximal_states = m.size();
  if (!back_edge) return verdict;

  verdict.included = false;
  LassoWord word;
  for (std::size_t i = 0; i < stack.size(); ++i) {
    const auto label = stack[i].chosen;
    auto& run_part = i < back_edge->first ? verdict.run.head : verdict.run.loop;
    auto& word_part = i < back_edge->first ? word.head : word.loop;
    auto& weight_part = i < back_edge->first ? verdict.run_weights.head : verdict.run_weights.loop;
    run_part.push_back(label);
    word_part.push_back(tp[label].sym);
    weight_part.push_back(tp[label].weight);
  }
  auto check = verify_witness(p, q, d, word, strictness);
  if (!check.violates) throw std::logic_error("inclusion witness failed exact verification");
  verdict.word = normal_form(word);
  verdict.wt_p = check.wt_p;
  verdict.wt_q = check.wt_q;
  return verdict;
}

}  // namespace qcomp
