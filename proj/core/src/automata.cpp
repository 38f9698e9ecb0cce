// SPDX-License-Identifier: Apache-2.0
#include "qcomp/automata.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>
#include <unordered_map>

#include "qcomp/graph.hpp"

namespace qcomp {

const char* to_string(Acceptance a) {
  switch (a) {
    case Acceptance::safety: return "safety";
    case Acceptance::cosafety: return "cosafety";
    case Acceptance::weak: return "weak";
    case Acceptance::buchi: return "buchi";
    case Acceptance::finite: return "finite";
  }
  return "?";
}

Acceptance parse_acceptance(std::string_view s) {
  if (s == "safety") return Acceptance::safety;
  if (s == "cosafety") return Acceptance::cosafety;
  if (s == "weak") return Acceptance::weak;
  if (s == "buchi") return Acceptance::buchi;
  if (s == "finite") return Acceptance::finite;
  throw std::invalid_argument("unknown acceptance '" + std::string(s) + "'");
}

LassoWord normal_form(const LassoWord& w) {
  if (w.loop.empty()) throw std::invalid_argument("lasso loop must be nonempty");
  LassoWord out = w;
  const std::size_t L = out.loop.size();
  for (std::size_t p = 1; p < L; ++p) {
    if (L % p != 0) continue;
    bool periodic = true;
    for (std::size_t i = p; i < L && periodic; ++i) periodic = out.loop[i] == out.loop[i - p];
    if (periodic) {
      out.loop.resize(p);
      break;
    }
  }
  while (out.head.size() > 1 && out.head.back() == out.loop.back()) {
    out.head.pop_back();
    std::rotate(out.loop.rbegin(), out.loop.rbegin() + 1, out.loop.rend());
  }
  if (out.head.empty()) {
    out.head.push_back(out.loop.front());
    std::rotate(out.loop.begin(), out.loop.begin() + 1, out.loop.end());
  }
  return out;
}

namespace {

std::vector<Symbol> parse_symbols(std::string_view text, const std::vector<std::string>& alphabet) {
  std::vector<Symbol> out;
  auto trim = [](std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  if (text.empty()) return out;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = text.find(',', start);
    std::string_view tok = trim(text.substr(start, comma == std::string_view::npos ? text.npos : comma - start));
    auto it = std::find(alphabet.begin(), alphabet.end(), tok);
    if (it == alphabet.end()) throw std::invalid_argument("unknown symbol '" + std::string(tok) + "'");
    out.push_back(static_cast<Symbol>(it - alphabet.begin()));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string join_symbols(const std::vector<Symbol>& w, const std::vector<std::string>& alphabet) {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += ',';
    out += alphabet.at(w[i]);
  }
  return out;
}

void check_alphabet(const std::vector<std::string>& alphabet) {
  if (alphabet.empty()) throw std::invalid_argument("empty alphabet");
  std::vector<std::string> sorted = alphabet;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("duplicate alphabet symbol");
  }
}

}  // namespace

LassoWord parse_word(std::string_view text, const std::vector<std::string>& alphabet) {
  LassoWord w;
  auto semi = text.find(';');
  if (semi == std::string_view::npos) {
    w.head = parse_symbols(text, alphabet);
    return w;
  }
  if (text.find(';', semi + 1) != std::string_view::npos) throw std::invalid_argument("more than one ';' in word");
  w.head = parse_symbols(text.substr(0, semi), alphabet);
  w.loop = parse_symbols(text.substr(semi + 1), alphabet);
  if (w.loop.empty()) throw std::invalid_argument("empty loop after ';'");
  return w;
}

std::string format_word(const LassoWord& w, const std::vector<std::string>& alphabet) {
  std::string out = join_symbols(w.head, alphabet);
  if (!w.loop.empty()) out += ";" + join_symbols(w.loop, alphabet);
  return out;
}

WeightedAutomaton::WeightedAutomaton(std::vector<std::string> alphabet, std::size_t states, State initial,
                                     std::vector<WeightedTransition> transitions, Mode mode)
    : alphabet_(std::move(alphabet)), initial_(initial), mode_(mode), trans_(std::move(transitions)) {
  check_alphabet(alphabet_);
  if (states == 0) throw std::invalid_argument("automaton needs at least one state");
  if (initial_ >= states) throw std::invalid_argument("initial state out of range");
  out_.resize(states);
  std::vector<char> seen(states * alphabet_.size(), 0);
  for (std::uint32_t i = 0; i < trans_.size(); ++i) {
    const auto& t = trans_[i];
    if (t.src >= states || t.dst >= states) throw std::invalid_argument("transition state out of range");
    if (t.sym >= alphabet_.size()) throw std::invalid_argument("transition symbol out of range");
    out_[t.src].push_back(i);
    seen[t.src * alphabet_.size() + t.sym] = 1;
  }
  for (std::size_t s = 0; s < states; ++s) {
    for (std::size_t a = 0; a < alphabet_.size(); ++a) {
      if (!seen[s * alphabet_.size() + a]) {
        throw std::invalid_argument("weighted automaton is incomplete at state " + std::to_string(s) +
                                    " on '" + alphabet_[a] + "'");
      }
    }
  }
}

std::int64_t WeightedAutomaton::mu() const {
  std::int64_t m = 1;
  for (const auto& t : trans_) m = std::max<std::int64_t>(m, t.weight < 0 ? -t.weight : t.weight);
  return m;
}

std::int64_t WeightedAutomaton::min_weight() const {
  std::int64_t m = trans_.front().weight;
  for (const auto& t : trans_) m = std::min(m, t.weight);
  return m;
}

std::int64_t WeightedAutomaton::max_weight() const {
  std::int64_t m = trans_.front().weight;
  for (const auto& t : trans_) m = std::max(m, t.weight);
  return m;
}

Acceptor::Acceptor(std::vector<std::string> alphabet, std::size_t states, State initial, Acceptance acc)
    : alphabet_(std::move(alphabet)), initial_(initial), acc_(acc), out_(states), accepting_(states, 0) {
  check_alphabet(alphabet_);
}

State Acceptor::add_state(bool accepting) {
  out_.emplace_back();
  accepting_.push_back(accepting);
  if (!block_.empty()) block_.push_back(0);
  return static_cast<State>(out_.size() - 1);
}

void Acceptor::add_edge(State src, Symbol sym, State dst) {
  if (src >= out_.size() || dst >= out_.size()) throw std::invalid_argument("edge state out of range");
  if (sym >= alphabet_.size()) throw std::invalid_argument("edge symbol out of range");
  auto& v = out_[src];
  Edge e{sym, dst};
  auto it = std::lower_bound(v.begin(), v.end(), e);
  if (it == v.end() || !(*it == e)) v.insert(it, e);
}

void Acceptor::set_blocks(std::vector<int> block_of, std::vector<std::pair<int, int>> order) {
  if (block_of.size() != out_.size()) throw std::invalid_argument("block assignment size mismatch");
  block_ = std::move(block_of);
  order_ = std::move(order);
}

Symbol Acceptor::symbol(std::string_view name) const {
  auto it = std::find(alphabet_.begin(), alphabet_.end(), name);
  if (it == alphabet_.end()) throw std::invalid_argument("unknown symbol '" + std::string(name) + "'");
  return static_cast<Symbol>(it - alphabet_.begin());
}

std::span<const Edge> Acceptor::successors(State s, Symbol a) const {
  const auto& v = out_[s];
  auto lo = std::lower_bound(v.begin(), v.end(), Edge{a, 0});
  auto hi = lo;
  while (hi != v.end() && hi->sym == a) ++hi;
  return {v.data() + (lo - v.begin()), static_cast<std::size_t>(hi - lo)};
}

std::optional<State> Acceptor::next(State s, Symbol a) const {
  auto succ = successors(s, a);
  if (succ.empty()) return std::nullopt;
  return succ.front().dst;
}

std::size_t Acceptor::edge_count() const {
  std::size_t n = 0;
  for (const auto& v : out_) n += v.size();
  return n;
}

bool Acceptor::deterministic() const {
  for (const auto& v : out_) {
    for (std::size_t i = 1; i < v.size(); ++i) {
      if (v[i].sym == v[i - 1].sym) return false;
    }
  }
  return true;
}

bool Acceptor::complete() const {
  for (const auto& v : out_) {
    std::size_t distinct = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i == 0 || v[i].sym != v[i - 1].sym) ++distinct;
    }
    if (distinct != alphabet_.size()) return false;
  }
  return true;
}

int Acceptor::block_count() const {
  int m = -1;
  for (int b : block_) m = std::max(m, b);
  for (auto [lo, hi] : order_) m = std::max({m, lo, hi});
  return m + 1;
}

std::string Acceptor::structural_error() const {
  const std::size_t n = out_.size();
  if (n == 0) return "acceptor has no states";
  if (initial_ >= n) return "initial state out of range";
  switch (acc_) {
    case Acceptance::safety:
      for (State s = 0; s < n; ++s) {
        if (accepting(s)) continue;
        for (auto e : out_[s]) {
          if (e.dst != s) return "rejecting state " + std::to_string(s) + " is not absorbing";
        }
      }
      break;
    case Acceptance::cosafety:
      for (State s = 0; s < n; ++s) {
        if (!accepting(s)) continue;
        if (out_[s].size() != alphabet_.size()) return "accepting sink " + std::to_string(s) + " is not complete";
        for (auto e : out_[s]) {
          if (e.dst != s) return "accepting state " + std::to_string(s) + " is not absorbing";
        }
      }
      break;
    case Acceptance::weak: {
      if (block_.size() != n) return "weak acceptor without a full partition";
      const int B = block_count();
      for (int b : block_) {
        if (b < 0) return "negative block id";
      }
      // below[u][l]: block l lies strictly below block u
      std::vector<std::vector<char>> below(B, std::vector<char>(B, 0));
      for (auto [lo, hi] : order_) {
        if (lo < 0 || hi < 0) return "negative block id in order";
        below[hi][lo] = 1;
      }
      for (int k = 0; k < B; ++k) {
        for (int i = 0; i < B; ++i) {
          if (!below[i][k]) continue;
          for (int j = 0; j < B; ++j) {
            if (below[k][j]) below[i][j] = 1;
          }
        }
      }
      for (int b = 0; b < B; ++b) {
        if (below[b][b]) return "block order is cyclic";
      }
      std::vector<int> acc_of(B, -1);
      for (State s = 0; s < n; ++s) {
        int& f = acc_of[block_[s]];
        if (f == -1) f = accepting(s);
        if (f != static_cast<int>(accepting(s))) return "block " + std::to_string(block_[s]) + " mixes acceptance";
      }
      for (State s = 0; s < n; ++s) {
        for (auto e : out_[s]) {
          int bs = block_[s], bt = block_[e.dst];
          if (bs != bt && !below[bs][bt]) {
            return "transition " + std::to_string(s) + "->" + std::to_string(e.dst) + " climbs the block order";
          }
        }
      }
      break;
    }
    case Acceptance::buchi:
    case Acceptance::finite:
      break;
  }
  return {};
}

void Acceptor::check() const {
  auto err = structural_error();
  if (!err.empty()) throw std::invalid_argument(err);
}

namespace {

void check_word(const Acceptor& a, const LassoWord& w) {
  if (w.loop.empty()) throw std::invalid_argument("lasso loop must be nonempty");
  for (auto x : w.head) {
    if (x >= a.alphabet().size()) throw std::invalid_argument("word symbol outside the alphabet");
  }
  for (auto x : w.loop) {
    if (x >= a.alphabet().size()) throw std::invalid_argument("word symbol outside the alphabet");
  }
}

bool deterministic_membership(const Acceptor& a, const LassoWord& w) {
  State s = a.initial();
  for (auto x : w.head) {
    auto nx = a.next(s, x);
    if (!nx) return false;
    s = *nx;
  }
  const std::size_t L = w.loop.size();
  std::vector<int> seen(a.state_count() * L, -1);
  std::vector<State> trail;
  for (std::size_t step = 0;; ++step) {
    std::size_t j = step % L;
    std::size_t key = s * L + j;
    if (seen[key] != -1) {
      for (std::size_t i = seen[key]; i < trail.size(); ++i) {
        if (a.accepting(trail[i])) return true;
      }
      return false;
    }
    seen[key] = static_cast<int>(step);
    trail.push_back(s);
    auto nx = a.next(s, w.loop[j]);
    if (!nx) return false;
    s = *nx;
  }
}

bool product_membership(const Acceptor& a, const LassoWord& w) {
  const std::size_t H = w.head.size(), P = H + w.loop.size();
  auto sym = [&](std::size_t pos) { return pos < H ? w.head[pos] : w.loop[pos - H]; };
  std::unordered_map<std::uint64_t, std::uint32_t> id;
  std::vector<std::uint64_t> nodes;
  Adjacency adj;
  auto intern = [&](std::uint64_t key) {
    auto [it, fresh] = id.emplace(key, static_cast<std::uint32_t>(nodes.size()));
    if (fresh) {
      nodes.push_back(key);
      adj.emplace_back();
    }
    return it->second;
  };
  intern(static_cast<std::uint64_t>(a.initial()) * P);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    State s = static_cast<State>(nodes[i] / P);
    std::size_t pos = nodes[i] % P;
    std::size_t np = pos + 1 < P ? pos + 1 : H;
    for (auto e : a.successors(s, sym(pos))) {
      std::uint32_t v = intern(static_cast<std::uint64_t>(e.dst) * P + np);
      adj[i].push_back(v);
    }
  }
  auto scc = tarjan_scc(adj);
  auto cyclic = cyclic_components(adj, scc);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (cyclic[scc.comp[i]] && a.accepting(static_cast<State>(nodes[i] / P))) return true;
  }
  return false;
}

}  // namespace

bool lasso_membership(const Acceptor& a, const LassoWord& w) {
  check_word(a, w);
  if (a.acceptance() == Acceptance::finite) throw std::invalid_argument("finite-word acceptor given a lasso");
  return a.deterministic() ? deterministic_membership(a, w) : product_membership(a, w);
}

bool accepts_finite(const Acceptor& a, const std::vector<Symbol>& w) {
  if (a.acceptance() != Acceptance::finite) throw std::invalid_argument("acceptor is not a finite-word acceptor");
  std::vector<char> cur(a.state_count(), 0), nxt(a.state_count(), 0);
  cur[a.initial()] = 1;
  for (auto x : w) {
    if (x >= a.alphabet().size()) throw std::invalid_argument("word symbol outside the alphabet");
    std::fill(nxt.begin(), nxt.end(), 0);
    for (State s = 0; s < a.state_count(); ++s) {
      if (!cur[s]) continue;
      for (auto e : a.successors(s, x)) nxt[e.dst] = 1;
    }
    cur.swap(nxt);
  }
  for (State s = 0; s < a.state_count(); ++s) {
    if (cur[s] && a.accepting(s)) return true;
  }
  return false;
}

std::optional<LassoWord> nonemptiness(const Acceptor& a) {
  auto kind = a.acceptance();
  if (kind != Acceptance::safety && kind != Acceptance::cosafety && kind != Acceptance::weak) {
    throw std::invalid_argument("nonemptiness needs safety, co-safety or weak acceptance");
  }
  const std::size_t n = a.state_count();
  std::vector<int> order_of(n, -1);
  std::vector<State> order;
  std::vector<std::pair<State, Symbol>> parent(n);
  order_of[a.initial()] = 0;
  order.push_back(a.initial());
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (auto e : a.edges(order[i])) {
      if (order_of[e.dst] != -1) continue;
      order_of[e.dst] = static_cast<int>(order.size());
      order.push_back(e.dst);
      parent[e.dst] = {order[i], e.sym};
    }
  }
  Adjacency adj(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (auto e : a.edges(order[i])) adj[i].push_back(order_of[e.dst]);
  }
  auto scc = tarjan_scc(adj);
  auto cyclic = cyclic_components(adj, scc);
  std::vector<char> all_acc(scc.count, 1);
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (!a.accepting(order[i])) all_acc[scc.comp[i]] = 0;
  }
  for (std::size_t i = 0; i < order.size(); ++i) {
    int c = scc.comp[i];
    if (!cyclic[c] || !all_acc[c]) continue;
    State rep = order[i];
    LassoWord w;
    for (State s = rep; s != a.initial(); s = parent[s].first) w.head.push_back(parent[s].second);
    std::reverse(w.head.begin(), w.head.end());

    // shortest cycle through rep inside its component
    std::unordered_map<State, std::pair<State, Symbol>> back;
    std::deque<State> q{rep};
    std::optional<std::pair<State, Symbol>> closing;
    std::unordered_map<State, char> seen{{rep, 1}};
    while (!q.empty() && !closing) {
      State u = q.front();
      q.pop_front();
      for (auto e : a.edges(u)) {
        if (scc.comp[order_of[e.dst]] != c) continue;
        if (e.dst == rep) {
          closing = std::make_pair(u, e.sym);
          break;
        }
        if (seen.emplace(e.dst, 1).second) {
          back[e.dst] = {u, e.sym};
          q.push_back(e.dst);
        }
      }
    }
    if (!closing) throw std::logic_error("cyclic component without a cycle through its member");
    w.loop.push_back(closing->second);
    for (State s = closing->first; s != rep; s = back[s].first) w.loop.push_back(back[s].second);
    std::reverse(w.loop.begin(), w.loop.end());
    if (!lasso_membership(a, w)) throw std::logic_error("emptiness witness fails membership");
    return w;
  }
  return std::nullopt;
}

namespace {

void require_same_alphabet(const Acceptor& a, const Acceptor& b) {
  if (a.alphabet() != b.alphabet()) throw std::invalid_argument("alphabet mismatch");
}

}  // namespace

Acceptor intersect_safety_cosafety(const Acceptor& s, const Acceptor& c) {
  require_same_alphabet(s, c);
  if (s.acceptance() != Acceptance::safety) throw std::invalid_argument("left operand must be a safety acceptor");
  if (c.acceptance() != Acceptance::cosafety) throw std::invalid_argument("right operand must be co-safety");
  // blocks: 0 (safe, pending) above 1 (safe, reached) and 2 (unsafe, pending), both above 3
  auto block_of = [&](State x, State y) { return (s.accepting(x) ? 0 : 2) + (c.accepting(y) ? 1 : 0); };

  const std::uint64_t nc = c.state_count();
  std::unordered_map<std::uint64_t, State> id;
  std::vector<std::pair<State, State>> pairs;
  Acceptor out(s.alphabet(), 0, 0, Acceptance::weak);
  std::vector<int> blocks;
  auto intern = [&](State x, State y) {
    auto [it, fresh] = id.emplace(x * nc + y, static_cast<State>(pairs.size()));
    if (fresh) {
      pairs.emplace_back(x, y);
      int b = block_of(x, y);
      out.add_state(b == 1);
      blocks.push_back(b);
    }
    return it->second;
  };
  intern(s.initial(), c.initial());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    auto [x, y] = pairs[i];
    for (auto e : s.edges(x)) {
      for (auto f : c.successors(y, e.sym)) {
        State t = intern(e.dst, f.dst);
        out.add_edge(static_cast<State>(i), e.sym, t);
      }
    }
  }
  out.set_blocks(blocks, {{1, 0}, {2, 0}, {3, 1}, {3, 2}});
  return out;
}

Acceptor intersect_safety(const Acceptor& a, const Acceptor& b) {
  require_same_alphabet(a, b);
  if (a.acceptance() != Acceptance::safety || b.acceptance() != Acceptance::safety) {
    throw std::invalid_argument("both operands must be safety acceptors");
  }
  const std::uint64_t nb = b.state_count();
  std::unordered_map<std::uint64_t, State> id;
  std::vector<std::pair<State, State>> pairs;
  Acceptor out(a.alphabet(), 0, 0, Acceptance::safety);
  std::optional<State> sink;
  auto intern = [&](State x, State y) -> State {
    if (!a.accepting(x) || !b.accepting(y)) {
      if (!sink) {
        sink = out.add_state(false);
        pairs.emplace_back(x, y);
        for (Symbol s = 0; s < out.alphabet().size(); ++s) out.add_edge(*sink, s, *sink);
      }
      return *sink;
    }
    auto [it, fresh] = id.emplace(x * nb + y, static_cast<State>(pairs.size()));
    if (fresh) {
      pairs.emplace_back(x, y);
      out.add_state(true);
    }
    return it->second;
  };
  intern(a.initial(), b.initial());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (sink && i == *sink) continue;
    auto [x, y] = pairs[i];
    for (auto e : a.edges(x)) {
      for (auto f : b.successors(y, e.sym)) out.add_edge(static_cast<State>(i), e.sym, intern(e.dst, f.dst));
    }
  }
  return out;
}

Acceptor minimize_deterministic(const Acceptor& a) {
  if (a.acceptance() != Acceptance::safety && a.acceptance() != Acceptance::cosafety) {
    throw std::invalid_argument("minimization needs a safety or co-safety acceptor");
  }
  if (!a.deterministic()) throw std::invalid_argument("minimization needs a deterministic acceptor");
  if (!a.complete()) throw std::invalid_argument("minimization needs a complete acceptor");
  const std::size_t k = a.alphabet().size();

  std::vector<int> idx(a.state_count(), -1);
  std::vector<State> reach{a.initial()};
  idx[a.initial()] = 0;
  for (std::size_t i = 0; i < reach.size(); ++i) {
    for (auto e : a.edges(reach[i])) {
      if (idx[e.dst] == -1) {
        idx[e.dst] = static_cast<int>(reach.size());
        reach.push_back(e.dst);
      }
    }
  }
  const std::size_t m = reach.size();
  std::vector<std::uint32_t> delta(m * k);
  for (std::size_t i = 0; i < m; ++i) {
    for (auto e : a.edges(reach[i])) delta[i * k + e.sym] = idx[e.dst];
  }
  // inverse transitions in CSR layout, keyed by target * k + symbol
  std::vector<std::uint32_t> inv_start(m * k + 1, 0), inv(m * k);
  for (std::size_t i = 0; i < m * k; ++i) ++inv_start[delta[i] * k + i % k + 1];
  for (std::size_t i = 1; i <= m * k; ++i) inv_start[i] += inv_start[i - 1];
  {
    std::vector<std::uint32_t> fill(inv_start.begin(), inv_start.end() - 1);
    for (std::size_t i = 0; i < m * k; ++i) inv[fill[delta[i] * k + i % k]++] = static_cast<std::uint32_t>(i / k);
  }

  std::vector<std::vector<std::uint32_t>> blocks;
  std::vector<int> block_of(m);
  {
    std::vector<std::uint32_t> acc, rej;
    for (std::uint32_t i = 0; i < m; ++i) (a.accepting(reach[i]) ? acc : rej).push_back(i);
    for (auto* part : {&acc, &rej}) {
      if (part->empty()) continue;
      for (auto s : *part) block_of[s] = static_cast<int>(blocks.size());
      blocks.push_back(*part);
    }
  }
  std::deque<std::pair<int, Symbol>> work;
  std::vector<char> in_work;
  auto push = [&](int b, Symbol x) {
    if (in_work.size() < (b + 1) * k) in_work.resize((b + 1) * k, 0);
    if (in_work[b * k + x]) return;
    in_work[b * k + x] = 1;
    work.emplace_back(b, x);
  };
  if (blocks.size() == 2) {
    int smaller = blocks[0].size() <= blocks[1].size() ? 0 : 1;
    for (Symbol x = 0; x < k; ++x) push(smaller, x);
  }
  std::vector<char> marked(m, 0);
  std::vector<int> hits(m, 0);
  while (!work.empty()) {
    auto [b, x] = work.front();
    work.pop_front();
    in_work[b * k + x] = 0;
    std::vector<std::uint32_t> pre;
    for (auto t : blocks[b]) {
      for (auto i = inv_start[t * k + x]; i < inv_start[t * k + x + 1]; ++i) pre.push_back(inv[i]);
    }
    std::vector<int> touched;
    for (auto s : pre) {
      if (marked[s]) continue;
      marked[s] = 1;
      if (hits[block_of[s]]++ == 0) touched.push_back(block_of[s]);
    }
    for (int y : touched) {
      if (hits[y] < static_cast<int>(blocks[y].size())) {
        std::vector<std::uint32_t> in, rest;
        for (auto s : blocks[y]) (marked[s] ? in : rest).push_back(s);
        int z = static_cast<int>(blocks.size());
        blocks[y] = std::move(rest);
        for (auto s : in) block_of[s] = z;
        blocks.push_back(std::move(in));
        for (Symbol c = 0; c < k; ++c) {
          bool y_pending = in_work.size() > y * k + c && in_work[y * k + c];
          if (y_pending || blocks[z].size() <= blocks[y].size()) {
            push(z, c);
          } else {
            push(y, c);
          }
        }
      }
      hits[y] = 0;
    }
    for (auto s : pre) marked[s] = 0;
  }

  // quotient, numbered in breadth-first order from the initial block
  std::vector<int> new_id(blocks.size(), -1);
  std::vector<int> queue{block_of[0]};
  new_id[block_of[0]] = 0;
  for (std::size_t i = 0; i < queue.size(); ++i) {
    std::uint32_t rep = blocks[queue[i]].front();
    for (Symbol x = 0; x < k; ++x) {
      int t = block_of[delta[rep * k + x]];
      if (new_id[t] == -1) {
        new_id[t] = static_cast<int>(queue.size());
        queue.push_back(t);
      }
    }
  }
  Acceptor out(a.alphabet(), queue.size(), 0, a.acceptance());
  for (std::size_t i = 0; i < queue.size(); ++i) {
    std::uint32_t rep = blocks[queue[i]].front();
    out.set_accepting(static_cast<State>(i), a.accepting(reach[rep]));
    for (Symbol x = 0; x < k; ++x) out.add_edge(static_cast<State>(i), x, new_id[block_of[delta[rep * k + x]]]);
  }
  return out;
}

Acceptor complete_with_sink(const Acceptor& a) {
  if (a.complete()) return a;
  Acceptor out = a;
  State sink = out.add_state(false);
  for (Symbol x = 0; x < a.alphabet().size(); ++x) out.add_edge(sink, x, sink);
  for (State s = 0; s < a.state_count(); ++s) {
    for (Symbol x = 0; x < a.alphabet().size(); ++x) {
      if (a.successors(s, x).empty()) out.add_edge(s, x, sink);
    }
  }
  if (a.acceptance() == Acceptance::weak) {
    std::vector<int> blocks = a.block_of();
    int nb = a.block_count();
    blocks.push_back(nb);
    auto order = a.block_order();
    for (int b = 0; b < nb; ++b) order.emplace_back(nb, b);
    out.set_blocks(blocks, order);
  }
  return out;
}

AnnotatedAutomaton annotate(const WeightedAutomaton& w) {
  std::vector<std::string> names;
  const auto& ts = w.transitions();
  for (std::size_t i = 0; i < ts.size(); ++i) {
    names.push_back(w.alphabet()[ts[i].sym] + ":" + std::to_string(ts[i].weight) + ":" + std::to_string(i));
  }
  AnnotatedAutomaton out{Acceptor(names, w.state_count(), w.initial(), Acceptance::safety), {}, {}};
  for (State s = 0; s < w.state_count(); ++s) out.automaton.set_accepting(s, true);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    out.automaton.add_edge(ts[i].src, static_cast<Symbol>(i), ts[i].dst);
    out.letter.push_back(ts[i].sym);
    out.weight.push_back(ts[i].weight);
  }
  return out;
}

}  // namespace qcomp
