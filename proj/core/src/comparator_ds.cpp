// SPDX-License-Identifier: Apache-2.0
#include "qcomp/comparator_ds.hpp"

#include <map>
#include <numeric>
#include <optional>
#include <queue>
#include <stdexcept>

namespace qcomp {

Relation parse_relation(std::string_view s) {
  if (s == "lt" || s == "<") return Relation::lt;
  if (s == "gt" || s == ">") return Relation::gt;
  if (s == "le" || s == "<=") return Relation::le;
  if (s == "ge" || s == ">=") return Relation::ge;
  if (s == "eq" || s == "=" || s == "==") return Relation::eq;
  if (s == "ne" || s == "!=") return Relation::ne;
  throw std::invalid_argument("unknown relation '" + std::string(s) + "'");
}

const char* to_string(Relation r) {
  switch (r) {
    case Relation::lt: return "lt";
    case Relation::gt: return "gt";
    case Relation::le: return "le";
    case Relation::ge: return "ge";
    case Relation::eq: return "eq";
    case Relation::ne: return "ne";
  }
  return "?";
}

bool holds(const Rational& lhs, Relation r, const Rational& rhs) {
  switch (r) {
    case Relation::lt: return lhs < rhs;
    case Relation::gt: return lhs > rhs;
    case Relation::le: return lhs <= rhs;
    case Relation::ge: return lhs >= rhs;
    case Relation::eq: return lhs == rhs;
    case Relation::ne: return lhs != rhs;
  }
  return false;
}

std::vector<std::string> weight_alphabet(std::int64_t mu) {
  std::vector<std::string> out;
  for (std::int64_t v = -mu; v <= mu; ++v) out.push_back(std::to_string(v));
  return out;
}

LassoWord weights_to_word(const LassoWeights& l, std::int64_t mu) {
  LassoWord w;
  for (auto x : l.head) {
    if (x < -mu || x > mu) throw std::invalid_argument("weight outside [-mu, mu]");
    w.head.push_back(weight_symbol(mu, x));
  }
  for (auto x : l.loop) {
    if (x < -mu || x > mu) throw std::invalid_argument("weight outside [-mu, mu]");
    w.loop.push_back(weight_symbol(mu, x));
  }
  return w;
}

std::vector<std::string> pair_alphabet(std::int64_t lo, std::int64_t hi) {
  std::vector<std::string> out;
  for (std::int64_t a = lo; a <= hi; ++a) {
    for (std::int64_t b = lo; b <= hi; ++b) out.push_back(std::to_string(a) + ":" + std::to_string(b));
  }
  return out;
}

LassoWord zip_pairs(const LassoWeights& a, const LassoWeights& b, std::int64_t lo, std::int64_t hi) {
  if (a.loop.empty() || b.loop.empty()) throw std::invalid_argument("lasso loop must be nonempty");
  std::size_t h = std::max(a.head.size(), b.head.size());
  std::size_t l = std::lcm(a.loop.size(), b.loop.size());
  auto sym = [&](std::size_t i) {
    std::int64_t x = a.at(i), y = b.at(i);
    if (x < lo || x > hi || y < lo || y > hi) throw std::invalid_argument("pair component out of range");
    return pair_symbol(lo, hi, x, y);
  };
  LassoWord w;
  for (std::size_t i = 0; i < h; ++i) w.head.push_back(sym(i));
  for (std::size_t i = h; i < h + l; ++i) w.loop.push_back(sym(i));
  return w;
}

Rational ThresholdValue::value(const Rational& d) const { return ds_lasso(digits(), d); }

LassoWeights ThresholdValue::digits() const {
  return LassoWeights{head, loop.empty() ? Weights{0} : loop};
}

ThresholdValue ThresholdValue::parse(std::string_view text) {
  auto list = [&](std::string_view part) {
    Weights out;
    std::size_t pos = 0;
    while (pos <= part.size()) {
      std::size_t comma = part.find(',', pos);
      if (comma == std::string_view::npos) comma = part.size();
      std::string tok(part.substr(pos, comma - pos));
      auto first = tok.find_first_not_of(" \t");
      auto last = tok.find_last_not_of(" \t");
      tok = first == std::string::npos ? "" : tok.substr(first, last - first + 1);
      if (!tok.empty()) {
        std::size_t used = 0;
        long long v = 0;
        try {
          v = std::stoll(tok, &used);
        } catch (const std::exception&) {
          used = 0;
        }
        if (used != tok.size()) throw std::invalid_argument("bad digit '" + tok + "' in threshold");
        out.push_back(v);
      } else if (comma != part.size() || pos != 0) {
        throw std::invalid_argument("empty digit in threshold");
      }
      pos = comma + 1;
    }
    return out;
  };
  ThresholdValue v;
  auto semi = text.find(';');
  v.head = list(text.substr(0, semi));
  if (semi != std::string_view::npos) v.loop = list(text.substr(semi + 1));
  return v;
}

namespace {

void check_params(std::int64_t mu, std::int64_t d) {
  if (mu < 1) throw std::invalid_argument("mu must be >= 1");
  if (d < 2) throw std::invalid_argument("discount factor must be an integer >= 2");
}

// ceil(mu/(d-1))
std::int64_t ceil_t(std::int64_t mu, std::int64_t d) { return (mu + d - 2) / (d - 1); }

}  // namespace

Acceptor build_gap_dfa(std::int64_t mu, std::int64_t d) {
  check_params(mu, d);
  const std::int64_t hi = mu / (d - 1);
  const std::int64_t lo = 1 - ceil_t(mu, d);  // floor(-T) + 1
  const auto live = static_cast<std::size_t>(hi - lo + 1);
  const State bad = static_cast<State>(live), very_good = bad + 1;
  Acceptor a(weight_alphabet(mu), live + 2, static_cast<State>(-lo), Acceptance::finite);
  a.set_accepting(bad, true);
  for (std::int64_t g = lo; g <= hi; ++g) {
    for (std::int64_t v = -mu; v <= mu; ++v) {
      std::int64_t n = d * g + v;
      State dst = n > hi ? bad : n < lo ? very_good : static_cast<State>(n - lo);
      a.add_edge(static_cast<State>(g - lo), weight_symbol(mu, v), dst);
    }
  }
  for (State s : {bad, very_good}) {
    for (std::int64_t v = -mu; v <= mu; ++v) a.add_edge(s, weight_symbol(mu, v), s);
  }
  return a;
}

namespace {

// Re-reads the gap DFA as an omega acceptor, optionally over the negated alphabet.
Acceptor retag_gap(const Acceptor& gap, std::int64_t mu, bool negate, bool cosafety) {
  const State bad = static_cast<State>(gap.state_count() - 2);
  Acceptor out(gap.alphabet(), gap.state_count(), gap.initial(),
               cosafety ? Acceptance::cosafety : Acceptance::safety);
  for (State s = 0; s < gap.state_count(); ++s) {
    out.set_accepting(s, cosafety ? s == bad : s != bad);
    for (auto e : gap.edges(s)) {
      Symbol sym = negate ? static_cast<Symbol>(2 * mu) - e.sym : e.sym;
      out.add_edge(s, sym, e.dst);
    }
  }
  return out;
}

// Exact-zero tracker: live gaps -floor(T)..floor(T) and one sink.
Acceptor build_zero_tracker(std::int64_t mu, std::int64_t d, bool cosafety) {
  const std::int64_t t = mu / (d - 1);
  const auto live = static_cast<std::size_t>(2 * t + 1);
  const State sink = static_cast<State>(live);
  Acceptor a(weight_alphabet(mu), live + 1, static_cast<State>(t),
             cosafety ? Acceptance::cosafety : Acceptance::safety);
  for (State s = 0; s <= sink; ++s) a.set_accepting(s, cosafety ? s == sink : s != sink);
  for (std::int64_t g = -t; g <= t; ++g) {
    for (std::int64_t v = -mu; v <= mu; ++v) {
      std::int64_t n = d * g + v;
      State dst = (n > t || n < -t) ? sink : static_cast<State>(n + t);
      a.add_edge(static_cast<State>(g + t), weight_symbol(mu, v), dst);
    }
  }
  for (std::int64_t v = -mu; v <= mu; ++v) a.add_edge(sink, weight_symbol(mu, v), sink);
  return a;
}

}  // namespace

Acceptor build_ds_comparator(std::int64_t mu, std::int64_t d, Relation r) {
  check_params(mu, d);
  switch (r) {
    case Relation::le: return retag_gap(build_gap_dfa(mu, d), mu, false, false);
    case Relation::gt: return retag_gap(build_gap_dfa(mu, d), mu, false, true);
    case Relation::ge: return retag_gap(build_gap_dfa(mu, d), mu, true, false);
    case Relation::lt: return retag_gap(build_gap_dfa(mu, d), mu, true, true);
    case Relation::eq: return build_zero_tracker(mu, d, false);
    case Relation::ne: return build_zero_tracker(mu, d, true);
  }
  throw std::invalid_argument("unknown relation");
}

Acceptor build_threshold_comparator(std::int64_t mu, std::int64_t d, Relation r, const ThresholdValue& v) {
  check_params(mu, d);
  const LassoWeights dig = v.digits();
  for (auto x : dig.head) {
    if (x < -mu || x > mu) throw std::invalid_argument("threshold digit outside [-mu, mu]");
  }
  for (auto x : dig.loop) {
    if (x < -mu || x > mu) throw std::invalid_argument("threshold digit outside [-mu, mu]");
  }
  const Rational dr(d);
  const Rational t = make_rational(mu, d - 1);
  if (abs(ds_lasso(dig, dr)) >= t * d) throw std::invalid_argument("threshold outside the representable range");

  const std::size_t m = dig.head.size();
  const std::size_t n = m + dig.loop.size();
  auto digit = [&](std::size_t j) { return j < m ? dig.head[j] : dig.loop[j - m]; };
  auto next = [&](std::size_t j) { return j + 1 < n ? j + 1 : m; };

  // Live gap range [lo_j, hi_j] per position j (position = index of the next digit).
  std::vector<std::int64_t> lo(n), hi(n);
  const Relation base = r == Relation::gt ? Relation::le : r == Relation::lt ? Relation::ge
                        : r == Relation::ne ? Relation::eq : r;
  for (std::size_t j = 0; j < n; ++j) {
    LassoWeights post;
    if (j < m) {
      post.head.assign(dig.head.begin() + static_cast<std::ptrdiff_t>(j), dig.head.end());
      post.loop = dig.loop;
    } else {
      post.loop.assign(dig.loop.begin() + static_cast<std::ptrdiff_t>(j - m), dig.loop.end());
      post.loop.insert(post.loop.end(), dig.loop.begin(), dig.loop.begin() + static_cast<std::ptrdiff_t>(j - m));
    }
    Rational upper = ds_lasso(post, dr) / d + t;
    Rational lower = upper - 2 * t;
    switch (base) {
      case Relation::le:
        lo[j] = floor_of(lower).get_si() + 1;
        hi[j] = floor_of(upper).get_si();
        break;
      case Relation::ge:
        lo[j] = ceil_of(lower).get_si();
        hi[j] = ceil_of(upper).get_si() - 1;
        break;
      default:
        lo[j] = ceil_of(lower).get_si();
        hi[j] = floor_of(upper).get_si();
        break;
    }
  }

  const bool cosafety = r == Relation::gt || r == Relation::lt || r == Relation::ne;
  Acceptor a(weight_alphabet(mu), 0, 0, cosafety ? Acceptance::cosafety : Acceptance::safety);
  std::map<std::pair<std::int64_t, std::size_t>, State> ids;
  std::queue<std::pair<std::int64_t, std::size_t>> work;
  // above: gap too large (bad for le, good for ge); below: gap too small
  std::optional<State> above, below;
  auto sink = [&](std::optional<State>& slot, bool rejecting_for_safety) {
    if (!slot) {
      // for eq/ne both sides share one sink
      if (base == Relation::eq && (above || below)) {
        slot = above ? *above : *below;
        return *slot;
      }
      slot = a.add_state(cosafety ? rejecting_for_safety : !rejecting_for_safety);
      for (std::int64_t x = -mu; x <= mu; ++x) a.add_edge(*slot, weight_symbol(mu, x), *slot);
    }
    return *slot;
  };
  auto state = [&](std::int64_t p, std::size_t j) {
    auto [it, fresh] = ids.emplace(std::make_pair(p, j), 0);
    if (fresh) {
      it->second = a.add_state(!cosafety);
      work.emplace(p, j);
    }
    return it->second;
  };
  state(0, 0);
  while (!work.empty()) {
    auto [p, j] = work.front();
    work.pop();
    const State src = ids.at({p, j});
    const std::size_t j2 = next(j);
    for (std::int64_t x = -mu; x <= mu; ++x) {
      const std::int64_t q = d * p + x - digit(j);
      State dst;
      if (q > hi[j2]) {
        dst = sink(above, base != Relation::ge);
      } else if (q < lo[j2]) {
        dst = sink(below, base != Relation::le);
      } else {
        dst = state(q, j2);
      }
      a.add_edge(src, weight_symbol(mu, x), dst);
    }
  }
  return a;
}

Acceptor build_xc_comparator(std::int64_t mu, std::int64_t d) {
  check_params(mu, d);
  const std::int64_t max_x = 1 + mu / (d - 1);
  const std::int64_t max_c = (mu * d) / (d - 1);
  const std::int64_t xs = 2 * max_x + 1;
  // 0 = s; then (x, c) for c in 0..max_c; then (x, bottom)
  auto xc = [&](std::int64_t x, std::int64_t c) { return static_cast<State>(1 + (x + max_x) * (max_c + 1) + c); };
  auto xb = [&](std::int64_t x) { return static_cast<State>(1 + xs * (max_c + 1) + (x + max_x)); };
  const std::size_t total = 1 + static_cast<std::size_t>(xs * (max_c + 2));
  Acceptor a(pair_alphabet(0, mu), total, 0, Acceptance::buchi);
  for (std::int64_t x = -max_x; x <= max_x; ++x) {
    for (std::int64_t c = 0; c <= max_c; ++c) a.set_accepting(xc(x, c), true);
  }
  auto in_range = [&](std::int64_t x) { return x >= -max_x && x <= max_x; };
  for (std::int64_t p = 0; p <= mu; ++p) {
    for (std::int64_t q = 0; q <= mu; ++q) {
      const Symbol sym = pair_symbol(0, mu, p, q);
      for (std::int64_t x = -max_x; x <= max_x; ++x) {
        const std::int64_t c = q - p - x;
        if (c >= 1 && c <= max_c) a.add_edge(0, sym, xc(x, c));
      }
      if (in_range(q - p)) a.add_edge(0, sym, xb(q - p));
      for (std::int64_t x = -max_x; x <= max_x; ++x) {
        const std::int64_t base = q + d * x - p;
        if (in_range(base)) a.add_edge(xb(x), sym, xb(base));
        for (std::int64_t c2 = 1; c2 < d; ++c2) {
          if (in_range(base - c2)) a.add_edge(xb(x), sym, xc(base - c2, c2));
        }
        for (std::int64_t c = 0; c <= max_c; ++c) {
          for (std::int64_t c2 = 0; c2 < d; ++c2) {
            if (in_range(base - c2)) a.add_edge(xc(x, c), sym, xc(base - c2, c2));
          }
        }
      }
    }
  }
  return a;
}

Acceptor pair_adapter(const Acceptor& single, std::int64_t mu) {
  if (single.alphabet().size() < static_cast<std::size_t>(2 * mu + 1)) {
    throw std::invalid_argument("acceptor alphabet does not cover [-mu, mu]");
  }
  Acceptor out(pair_alphabet(0, mu), single.state_count(), single.initial(), single.acceptance());
  for (State s = 0; s < single.state_count(); ++s) {
    out.set_accepting(s, single.accepting(s));
    for (std::int64_t p = 0; p <= mu; ++p) {
      for (std::int64_t q = 0; q <= mu; ++q) {
        for (auto e : single.successors(s, weight_symbol(mu, p - q))) {
          out.add_edge(s, pair_symbol(0, mu, p, q), e.dst);
        }
      }
    }
  }
  if (!single.block_of().empty()) out.set_blocks(single.block_of(), single.block_order());
  return out;
}

}  // namespace qcomp
