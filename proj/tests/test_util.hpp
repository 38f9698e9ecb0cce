// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <random>

#include "qcomp/exact.hpp"

namespace testutil {

inline std::int64_t uniform(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

inline qcomp::Weights random_weights(std::mt19937_64& rng, std::size_t n, std::int64_t mu,
                                     std::int64_t lo_bound = INT64_MIN) {
  std::int64_t lo = lo_bound == INT64_MIN ? -mu : lo_bound;
  qcomp::Weights w(n);
  for (auto& x : w) x = uniform(rng, lo, mu);
  return w;
}

inline qcomp::LassoWeights random_lasso(std::mt19937_64& rng, std::size_t max_head,
                                        std::size_t max_loop, std::int64_t mu,
                                        std::int64_t lo_bound = INT64_MIN) {
  qcomp::LassoWeights l;
  l.head = random_weights(rng, uniform(rng, 0, max_head), mu, lo_bound);
  l.loop = random_weights(rng, uniform(rng, 1, max_loop), mu, lo_bound);
  return l;
}

}  // namespace testutil
