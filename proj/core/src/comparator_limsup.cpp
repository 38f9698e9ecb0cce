// SPDX-License-Identifier: Apache-2.0
#include "qcomp/comparator_limsup.hpp"

#include <stdexcept>

namespace qcomp {

namespace {

// Adds the f_k / s_k pair for one k, entered from `start`. `read` maps a pair to the pair it stands for.
template <class Read>
void add_block(Acceptor& a, State start, std::int64_t k, std::int64_t mu, Read read) {
  const State f = a.add_state(true);
  const State s = a.add_state(false);
  for (std::int64_t x = -mu; x <= mu; ++x) {
    for (std::int64_t y = -mu; y <= mu; ++y) {
      auto [p, q] = read(x, y);
      const Symbol sym = pair_symbol(-mu, mu, x, y);
      if (p > k || q > k) continue;
      if (p == k) a.add_edge(start, sym, f);
      const State dst = p == k ? f : s;
      a.add_edge(f, sym, dst);
      a.add_edge(s, sym, dst);
    }
  }
}

template <class Read>
Acceptor build_union(std::int64_t mu, Read read) {
  if (mu < 0) throw std::invalid_argument("mu must be >= 0");
  Acceptor a(pair_alphabet(-mu, mu), 1, 0, Acceptance::buchi);
  for (Symbol sym = 0; sym < a.alphabet().size(); ++sym) a.add_edge(0, sym, 0);
  for (std::int64_t k = -mu; k <= mu; ++k) add_block(a, 0, k, mu, read);
  return a;
}

auto identity = [](std::int64_t x, std::int64_t y) { return std::pair{x, y}; };

}  // namespace

Acceptor build_limsup_block(std::int64_t k, std::int64_t mu) {
  if (mu < 0 || k < -mu || k > mu) throw std::invalid_argument("block index outside [-mu, mu]");
  Acceptor a(pair_alphabet(-mu, mu), 1, 0, Acceptance::buchi);
  for (Symbol sym = 0; sym < a.alphabet().size(); ++sym) a.add_edge(0, sym, 0);
  add_block(a, 0, k, mu, identity);
  return a;
}

Acceptor build_limsup_comparator(std::int64_t mu) { return build_union(mu, identity); }

Acceptor build_liminf_comparator(std::int64_t mu) {
  return build_union(mu, [](std::int64_t x, std::int64_t y) { return std::pair{-y, -x}; });
}

bool limit_compare(const Acceptor& ge_comparator, std::int64_t mu, const LassoWeights& a,
                   const LassoWeights& b, Relation r) {
  auto ge = [&](const LassoWeights& x, const LassoWeights& y) {
    return lasso_membership(ge_comparator, zip_pairs(x, y, -mu, mu));
  };
  switch (r) {
    case Relation::ge: return ge(a, b);
    case Relation::le: return ge(b, a);
    case Relation::gt: return !ge(b, a);
    case Relation::lt: return !ge(a, b);
    case Relation::eq: return ge(a, b) && ge(b, a);
    case Relation::ne: return !(ge(a, b) && ge(b, a));
  }
  return false;
}

}  // namespace qcomp
