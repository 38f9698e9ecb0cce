// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <numeric>

#include "qcomp/prefix_average.hpp"
#include "qcomp/wa_format.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace qcomp;
using namespace oracles;

namespace {

LassoWeights lasso(Weights h, Weights l) { return {std::move(h), std::move(l)}; }

}  // namespace

TEST(PrefixAverage, Examples) {
  EXPECT_TRUE(pla_geq(lasso({}, {2}), lasso({}, {1})));
  EXPECT_FALSE(pla_geq(lasso({}, {1}), lasso({}, {2})));
  EXPECT_FALSE(pla_geq(lasso({}, {1, 0}), lasso({}, {0, 1})));
  EXPECT_FALSE(pla_geq(lasso({}, {0, 1}), lasso({}, {1, 0})));
  // equal loops, head decides
  EXPECT_TRUE(pla_geq(lasso({3}, {1}), lasso({}, {1})));
  EXPECT_FALSE(pla_geq(lasso({}, {1}), lasso({}, {1})));
  // negative drift eventually beats any head
  EXPECT_FALSE(pla_geq(lasso({100}, {0}), lasso({}, {1})));
  EXPECT_TRUE(pla_geq(lasso({}, {1}), lasso({100}, {0})));
  EXPECT_THROW(pla_geq(lasso({1}, {}), lasso({}, {1})), std::invalid_argument);
  EXPECT_THROW(pla_geq(lasso({-1}, {1}), lasso({}, {1})), std::invalid_argument);
}

TEST(PrefixAverage, AgreesWithPrefixSums) {
  std::mt19937_64 rng(71);
  int positives = 0;
  for (int i = 0; i < 10000; ++i) {
    std::int64_t mu = testutil::uniform(rng, 1, 4);
    auto a = testutil::random_lasso(rng, 3, 4, mu, 0);
    auto b = testutil::random_lasso(rng, 3, 4, mu, 0);
    bool got = pla_geq(a, b);
    ASSERT_EQ(got, oracle_pla(a, b, mu)) << serialize_seq(a) << serialize_seq(b);
    positives += got;
  }
  EXPECT_GT(positives, 1000);
}

TEST(PrefixAverage, LimitAverageImpliesPrefixAverage) {
  std::mt19937_64 rng(72);
  int checked = 0;
  for (int i = 0; i < 5000; ++i) {
    auto a = testutil::random_lasso(rng, 4, 5, 5, 0);
    auto b = testutil::random_lasso(rng, 4, 5, 5, 0);
    // mean(a.loop) > mean(b.loop), cross-multiplied
    auto sum = [](const Weights& w) { return std::accumulate(w.begin(), w.end(), std::int64_t{0}); };
    auto lhs = sum(a.loop) * static_cast<std::int64_t>(b.loop.size());
    auto rhs = sum(b.loop) * static_cast<std::int64_t>(a.loop.size());
    if (lhs > rhs) {
      ++checked;
      EXPECT_TRUE(pla_geq(a, b));
    }
    EXPECT_FALSE(pla_geq(a, b) && pla_geq(b, a));
  }
  EXPECT_GT(checked, 1000);
}

TEST(PrefixAverage, CounterTraceExamples) {
  auto t = pda_counter_trace(lasso({}, {1, 2}), lasso({}, {1, 2}), 10);
  ASSERT_EQ(t.size(), 10u);
  for (auto& s : t) {
    EXPECT_EQ(s.state, PdaState::s_n);
    EXPECT_EQ(s.counter, 0);
  }
  t = pda_counter_trace(lasso({}, {3}), lasso({}, {1}), 5);
  for (std::size_t i = 0; i < t.size(); ++i) {
    EXPECT_EQ(t[i].state, PdaState::s_p);
    EXPECT_EQ(t[i].counter, 2 * static_cast<std::int64_t>(i + 1));
  }
  t = pda_counter_trace(lasso({}, {1, 0}), lasso({}, {0, 1}), 4);
  EXPECT_EQ(t[0].state, PdaState::s_p);
  EXPECT_EQ(t[1].state, PdaState::s_n);
  EXPECT_EQ(t[1].counter, 0);
  EXPECT_THROW(pda_counter_trace(lasso({}, {1}), lasso({}, {1}), 0), std::invalid_argument);
  EXPECT_STREQ(to_string(PdaState::s_f), "sF");
}

TEST(PrefixAverage, CounterTraceInvariant) {
  std::mt19937_64 rng(73);
  for (int i = 0; i < 1000; ++i) {
    auto a = testutil::random_lasso(rng, 5, 6, 5, 0);
    auto b = testutil::random_lasso(rng, 5, 6, 5, 0);
    auto t = pda_counter_trace(a, b, 200);
    auto d = prefix_diff(a, b, 200);
    for (std::size_t s = 0; s < t.size(); ++s) {
      ASSERT_EQ(t[s].counter, std::abs(d[s + 1]));
      ASSERT_EQ(t[s].state == PdaState::s_n, d[s + 1] <= 0);
    }
  }
}

TEST(PrefixAverage, SeqFormat) {
  auto l = parse_seq("# sample\nhead: 1 2\nloop: 0 3\n");
  EXPECT_EQ(l.head, (Weights{1, 2}));
  EXPECT_EQ(l.loop, (Weights{0, 3}));
  EXPECT_EQ(serialize_seq(l), "head: 1 2\nloop: 0 3\n");
  EXPECT_EQ(parse_seq(serialize_seq(l)).loop, l.loop);
  auto no_head = parse_seq("loop: 4\n");
  EXPECT_TRUE(no_head.head.empty());
  try {
    parse_seq("head: 1\nloop: 1 x\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2) << e.what();
  }
  EXPECT_THROW(parse_seq("head: 1\n"), ParseError);
  EXPECT_THROW(parse_seq("loop:\n"), ParseError);
  EXPECT_THROW(parse_seq("tail: 1\nloop: 1\n"), ParseError);
}
