// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "qcomp/automata.hpp"
#include "qcomp/comparator_ds.hpp"

namespace qcomp {

// All acceptors here read pairs (a, b) over pair_alphabet(-mu, mu).

// Buchi block accepting (A, B) iff limsup(A) = k and limsup(B) <= k.
// States: 0 = s, 1 = f_k (accepting), 2 = s_k.
Acceptor build_limsup_block(std::int64_t k, std::int64_t mu);
// Union of the blocks for k in [-mu, mu] sharing the start state; accepts iff limsup(A) >= limsup(B).
Acceptor build_limsup_comparator(std::int64_t mu);
// Same shape with (a, b) read as (-b, -a); accepts iff liminf(A) >= liminf(B).
Acceptor build_liminf_comparator(std::int64_t mu);

enum class LimitKind { limsup, liminf };

// Any relation, answered by >= membership queries on (A, B) and (B, A).
bool limit_compare(const Acceptor& ge_comparator, std::int64_t mu, const LassoWeights& a,
                   const LassoWeights& b, Relation r);

}  // namespace qcomp
