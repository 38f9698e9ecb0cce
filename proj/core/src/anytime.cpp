// SPDX-License-Identifier: Apache-2.0
#include "qcomp/anytime.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <stdexcept>

#include "qcomp/inclusion.hpp"

namespace qcomp {

namespace {

void check_kp(unsigned k, unsigned p) {
  if (k == 0 || p == 0) throw std::invalid_argument("k and p must be positive integers");
}

Dyadic discount_dyadic(unsigned k) { return Dyadic(Integer(1) + (Integer(1) << k), k); }

std::int64_t floor_shift(std::int64_t i, unsigned k) { return i >> k; }  // arithmetic shift floors
std::int64_t ceil_shift(std::int64_t i, unsigned k) { return -((-i) >> k); }

}  // namespace

Rational anytime_discount(unsigned k) {
  if (k == 0) throw std::invalid_argument("k must be a positive integer");
  return 1 + make_rational(1, Integer(1) << k);
}

Dyadic round_low(const Dyadic& x, unsigned p, unsigned k) {
  check_kp(k, p);
  return Dyadic(x.scaled_floor(p + k), p + k);
}

Dyadic round_up(const Dyadic& x, unsigned p, unsigned k) {
  check_kp(k, p);
  return Dyadic(x.scaled_ceil(p + k), p + k);
}

Dyadic gap_low(const Weights& w, unsigned k, unsigned p) {
  const Dyadic d = discount_dyadic(k);
  Dyadic g(0);
  for (auto u : w) g = round_low(d * g + Dyadic(static_cast<long>(u)), p, k);
  return g;
}

Dyadic gap_up(const Weights& w, unsigned k, unsigned p) {
  const Dyadic d = discount_dyadic(k);
  Dyadic g(0);
  for (auto u : w) g = round_up(d * g + Dyadic(static_cast<long>(u)), p, k);
  return g;
}

Rational ds_low(const Weights& w, unsigned k, unsigned p) {
  if (w.empty()) return 0;
  return gap_low(w, k, p).to_rational() / pow(anytime_discount(k), w.size() - 1);
}

Rational ds_up(const Weights& w, unsigned k, unsigned p) {
  if (w.empty()) return 0;
  return gap_up(w, k, p).to_rational() / pow(anytime_discount(k), w.size() - 1);
}

GapBounds comp_bounds(GapRounding kind, std::int64_t mu, unsigned k, unsigned p) {
  check_kp(k, p);
  if (mu < 1) throw std::invalid_argument("mu must be >= 1");
  if (2 * k + p > 52 || mu > (std::int64_t{1} << 8)) throw std::length_error("comparator parameters too large");
  const std::int64_t core = mu << (2 * k + p);  // mu * 2^k / r
  const std::int64_t extra = std::int64_t{1} << k;  // 2^-p / r
  if (kind == GapRounding::low) return {-core, core + extra};
  return {-core - extra, core};
}

std::int64_t comp_step(GapRounding kind, const GapBounds& b, std::int64_t i, std::int64_t u, unsigned k,
                       unsigned p) {
  if (i <= b.lo) return b.lo;
  if (i >= b.hi) return b.hi;
  const std::int64_t j = i + (kind == GapRounding::low ? floor_shift(i, k) : ceil_shift(i, k)) + (u << (p + k));
  return std::clamp(j, b.lo, b.hi);
}

namespace {

Acceptor build_comp(GapRounding kind, std::int64_t mu, unsigned k, unsigned p, Relation r, std::size_t cap) {
  if (r != Relation::le && r != Relation::ge) throw std::invalid_argument("gap comparators support le and ge only");
  const GapBounds b = comp_bounds(kind, mu, k, p);
  const auto n = static_cast<std::size_t>(b.hi - b.lo + 1);
  if (n > cap) {
    throw std::length_error("comparator needs " + std::to_string(n) + " states (cap " + std::to_string(cap) +
                            "; mu=" + std::to_string(mu) + " k=" + std::to_string(k) + " p=" + std::to_string(p) +
                            ")");
  }
  Acceptor a(weight_alphabet(mu), n, static_cast<State>(-b.lo), Acceptance::finite);
  for (std::int64_t i = b.lo; i <= b.hi; ++i) {
    const auto s = static_cast<State>(i - b.lo);
    a.set_accepting(s, r == Relation::le ? i <= 0 : i >= 0);
    for (std::int64_t u = -mu; u <= mu; ++u) {
      a.add_edge(s, weight_symbol(mu, u), static_cast<State>(comp_step(kind, b, i, u, k, p) - b.lo));
    }
  }
  return a;
}

}  // namespace

Acceptor build_comp_low(std::int64_t mu, unsigned k, unsigned p, Relation r, std::size_t state_cap) {
  return build_comp(GapRounding::low, mu, k, p, r, state_cap);
}

Acceptor build_comp_up(std::int64_t mu, unsigned k, unsigned p, Relation r, std::size_t state_cap) {
  return build_comp(GapRounding::up, mu, k, p, r, state_cap);
}

std::optional<Rational> finite_sup(const WeightedAutomaton& w, const std::vector<Symbol>& word, const Rational& d) {
  std::vector<std::optional<Rational>> best(w.state_count());
  best[w.initial()] = Rational(0);
  Rational scale = 1;
  for (auto a : word) {
    std::vector<std::optional<Rational>> next(w.state_count());
    for (const auto& t : w.transitions()) {
      if (t.sym != a || !best[t.src]) continue;
      Rational v = *best[t.src] + Rational(t.weight) / scale;
      if (!next[t.dst] || v > *next[t.dst]) next[t.dst] = v;
    }
    best.swap(next);
    scale *= d;
  }
  std::optional<Rational> out;
  for (auto& b : best) {
    if (b && (!out || *b > *out)) out = b;
  }
  return out;
}

const char* to_string(ApproxOutcome o) {
  switch (o) {
    case ApproxOutcome::not_included: return "not-included";
    case ApproxOutcome::close_included: return "close-included";
    case ApproxOutcome::included: return "included";
    case ApproxOutcome::not_far_included: return "not-far-included";
  }
  return "?";
}

const char* to_string(AnytimeVerdict::Kind k) {
  switch (k) {
    case AnytimeVerdict::Kind::not_included: return "not-included";
    case AnytimeVerdict::Kind::included: return "included";
    case AnytimeVerdict::Kind::close_included: return "close-included";
  }
  return "?";
}

namespace {

void check_finite_input(const WeightedAutomaton& p, const WeightedAutomaton& q) {
  if (p.alphabet() != q.alphabet()) throw std::invalid_argument("alphabet mismatch");
  for (const auto* w : {&p, &q}) {
    if (w->min_weight() < 0) throw std::invalid_argument("anytime inclusion needs nonnegative weights");
  }
}

// Searches for a run of P that no run of Q dominates under the rounded gap comparator (relation <=).
// Returns the word of such a run, or nullopt when every run is dominated.
std::optional<std::vector<Symbol>> find_undominated(const WeightedAutomaton& p, const WeightedAutomaton& q,
                                                    GapRounding kind, unsigned k, unsigned prec,
                                                    std::size_t& explored) {
  check_kp(k, prec);
  check_finite_input(p, q);
  const std::int64_t mu =
      std::max<std::int64_t>({1, p.max_weight() - q.min_weight(), q.max_weight() - p.min_weight()});
  const GapBounds b = comp_bounds(kind, mu, k, prec);
  const auto q_by = transitions_by_letter(q);
  const auto& tp = p.transitions();
  const auto& tq = q.transitions();

  using Pairs = std::vector<std::pair<State, std::int64_t>>;
  struct Node {
    State p;
    Pairs s;
    std::uint32_t parent;
    Symbol letter;
  };
  std::vector<Node> nodes;
  std::map<std::pair<State, Pairs>, std::uint32_t> seen;
  nodes.push_back({p.initial(), {{q.initial(), 0}}, 0, 0});
  seen.emplace(std::make_pair(p.initial(), nodes[0].s), 0);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (auto t : p.outgoing(nodes[i].p)) {
      Pairs next;
      bool forever = false;
      for (auto [qs, c] : nodes[i].s) {
        for (auto u : q_by[qs][tp[t].sym]) {
          const std::int64_t c2 = comp_step(kind, b, c, tp[t].weight - tq[u].weight, k, prec);
          if (c2 == b.lo) forever = true;        // dominated by this Q run from now on
          if (c2 == b.hi) continue;              // this Q run can no longer dominate
          next.emplace_back(tq[u].dst, c2);
        }
        if (forever) break;
      }
      if (forever) continue;
      std::sort(next.begin(), next.end());
      next.erase(std::unique(next.begin(), next.end()), next.end());
      bool dominated = std::any_of(next.begin(), next.end(), [](const auto& x) { return x.second <= 0; });
      if (!dominated) {
        std::vector<Symbol> word{tp[t].sym};
        for (std::size_t j = i; j != 0; j = nodes[j].parent) word.push_back(nodes[j].letter);
        std::reverse(word.begin(), word.end());
        explored = nodes.size();
        return word;
      }
      auto key = std::make_pair(tp[t].dst, next);
      if (seen.count(key)) continue;
      seen.emplace(key, static_cast<std::uint32_t>(nodes.size()));
      nodes.push_back({tp[t].dst, std::move(next), static_cast<std::uint32_t>(i), tp[t].sym});
    }
  }
  explored = nodes.size();
  return std::nullopt;
}

}  // namespace

ApproxResult low_approx_inc(const WeightedAutomaton& p, const WeightedAutomaton& q, unsigned k, unsigned prec) {
  ApproxResult out;
  auto w = find_undominated(p, q, GapRounding::low, k, prec, out.explored);
  if (!w) {
    out.outcome = ApproxOutcome::close_included;
    return out;
  }
  const Rational d = anytime_discount(k);
  out.outcome = ApproxOutcome::not_included;
  out.witness = *w;
  out.wt_p = *finite_sup(p, *w, d);
  out.wt_q = *finite_sup(q, *w, d);
  if (!(out.wt_p > out.wt_q)) throw std::logic_error("lower-approximation witness failed exact verification");
  return out;
}

ApproxResult upper_approx_inc(const WeightedAutomaton& p, const WeightedAutomaton& q, unsigned k, unsigned prec) {
  ApproxResult out;
  auto w = find_undominated(p, q, GapRounding::up, k, prec, out.explored);
  if (!w) {
    out.outcome = ApproxOutcome::included;
    return out;
  }
  const Rational d = anytime_discount(k);
  out.outcome = ApproxOutcome::not_far_included;
  out.witness = *w;
  out.wt_p = *finite_sup(p, *w, d);
  out.wt_q = *finite_sup(q, *w, d);
  const Rational slack = d * make_rational(1, Integer(1) << prec);
  if (!(out.wt_p > out.wt_q - slack)) throw std::logic_error("upper-approximation witness failed exact verification");
  return out;
}

AnytimeVerdict anytime_inclusion(const WeightedAutomaton& p, const WeightedAutomaton& q, unsigned k,
                                 const AnytimeBudget& budget) {
  if (budget.max_rounds == 0) throw std::invalid_argument("budget must allow at least one round");
  AnytimeVerdict v;
  for (unsigned round = 1; round <= budget.max_rounds; ++round) {
    const unsigned prec = round;  // eps = 2^-round
    if (budget.min_eps_exponent && prec > *budget.min_eps_exponent) break;
    RoundRecord rec;
    rec.round = round;
    rec.p = prec;
    auto low = low_approx_inc(p, q, k, prec);
    rec.low = low.outcome;
    rec.explored = low.explored;
    if (low.outcome == ApproxOutcome::not_included) {
      v.trace.push_back(rec);
      v.kind = AnytimeVerdict::Kind::not_included;
      v.witness = low.witness;
      v.wt_p = low.wt_p;
      v.wt_q = low.wt_q;
      v.eps_exponent = prec;
      return v;
    }
    auto up = upper_approx_inc(p, q, k, prec);
    rec.up = up.outcome;
    rec.explored += up.explored;
    v.trace.push_back(rec);
    v.eps_exponent = prec;
    if (up.outcome == ApproxOutcome::included) {
      v.kind = AnytimeVerdict::Kind::included;
      return v;
    }
  }
  v.kind = AnytimeVerdict::Kind::close_included;
  return v;
}

}  // namespace qcomp
