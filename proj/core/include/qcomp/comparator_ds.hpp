// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qcomp/automata.hpp"
#include "qcomp/exact.hpp"

namespace qcomp {

enum class Relation { lt, gt, le, ge, eq, ne };

// Accepts "lt", "<", "le", "<=", "gt", ">", "ge", ">=", "eq", "=", "ne", "!=".
Relation parse_relation(std::string_view s);
const char* to_string(Relation r);
bool holds(const Rational& lhs, Relation r, const Rational& rhs);
inline constexpr Relation all_relations[] = {Relation::lt, Relation::gt, Relation::le,
                                             Relation::ge, Relation::eq, Relation::ne};

// Symbols "-mu" .. "mu"; symbol id of v is v + mu.
std::vector<std::string> weight_alphabet(std::int64_t mu);
inline Symbol weight_symbol(std::int64_t mu, std::int64_t v) { return static_cast<Symbol>(v + mu); }
LassoWord weights_to_word(const LassoWeights& l, std::int64_t mu);

// Symbols "a:b" for lo <= a, b <= hi; id of (a, b) is (a-lo)*(hi-lo+1) + (b-lo).
std::vector<std::string> pair_alphabet(std::int64_t lo, std::int64_t hi);
inline Symbol pair_symbol(std::int64_t lo, std::int64_t hi, std::int64_t a, std::int64_t b) {
  return static_cast<Symbol>((a - lo) * (hi - lo + 1) + (b - lo));
}
// Zips two lassos into one lasso of pairs (common head length, lcm loop length).
LassoWord zip_pairs(const LassoWeights& a, const LassoWeights& b, std::int64_t lo, std::int64_t hi);

// Ultimately periodic digit sequence head . loop^omega; an empty loop means 0^omega.
struct ThresholdValue {
  Weights head;
  Weights loop;

  Rational value(const Rational& d) const;
  LassoWeights digits() const;
  static ThresholdValue parse(std::string_view text);  // "h0,h1;l0,l1"
};

// Finite-word DFA accepting exactly the prefixes whose recoverable gap exceeds floor(mu/(d-1)).
Acceptor build_gap_dfa(std::int64_t mu, std::int64_t d);
// Deterministic comparator for DS(A, d) R 0 over weight_alphabet(mu).
Acceptor build_ds_comparator(std::int64_t mu, std::int64_t d, Relation r);
// Deterministic comparator for DS(A, d) R value(v).
Acceptor build_threshold_comparator(std::int64_t mu, std::int64_t d, Relation r, const ThresholdValue& v);
// Nondeterministic Buchi comparator for DS(A, d) < DS(B, d) over pair_alphabet(0, mu).
Acceptor build_xc_comparator(std::int64_t mu, std::int64_t d);
// Lifts a comparator over weight_alphabet(mu) to pairs (a, b), 0 <= a, b <= mu, reading a - b.
Acceptor pair_adapter(const Acceptor& single, std::int64_t mu);

}  // namespace qcomp
