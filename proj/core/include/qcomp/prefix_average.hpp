// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qcomp/exact.hpp"

namespace qcomp {

// Eventually Sum(A[0, i-1]) > Sum(B[0, i-1]) for all i, checked together with
// "Sum(A[0, i-1]) >= Sum(B[0, i-1]) for infinitely many i".
// Both lassos need a nonempty loop and nonnegative entries.
bool pla_geq(const LassoWeights& a, const LassoWeights& b);

enum class PdaState { s_n, s_p, s_f };
const char* to_string(PdaState s);

struct CounterStep {
  PdaState state;
  std::int64_t counter;
};

// Deterministic counter run of the prefix-average pushdown comparator over the first `steps` letters.
// Entry i describes the configuration after i + 1 letters.
std::vector<CounterStep> pda_counter_trace(const LassoWeights& a, const LassoWeights& b, std::size_t steps);

// `.seq` text: "head: n1 n2 ..." and "loop: n1 ...".
LassoWeights parse_seq(std::string_view text);
std::string serialize_seq(const LassoWeights& l);

}  // namespace qcomp
