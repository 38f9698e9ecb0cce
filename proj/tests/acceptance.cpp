// SPDX-License-Identifier: Apache-2.0
// Acceptance suite: one PASS/FAIL line per criterion. Exit status 1 if any criterion fails.
#include <CLI11.hpp>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "qcomp/anytime.hpp"
#include "qcomp/bench.hpp"
#include "qcomp/comparator_ds.hpp"
#include "qcomp/comparator_limsup.hpp"
#include "qcomp/games.hpp"
#include "qcomp/inclusion.hpp"
#include "qcomp/prefix_average.hpp"

using namespace qcomp;
using namespace oracles;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

const std::array<Relation, 6> kRelations{Relation::lt, Relation::gt, Relation::le,
                                         Relation::ge, Relation::eq, Relation::ne};

bool member(const Acceptor& c, const LassoWeights& l, std::int64_t mu) {
  return lasso_membership(c, weights_to_word(l, mu));
}

// Random lasso; one in four has DS exactly 0 (blocks x, -d*x, then zeros).
LassoWeights comparator_sample(std::mt19937_64& rng, std::int64_t mu, std::int64_t d) {
  if (testutil::uniform(rng, 0, 3) != 0) return testutil::random_lasso(rng, 6, 6, mu);
  LassoWeights l;
  const std::int64_t xmax = mu / d;
  std::int64_t blocks = testutil::uniform(rng, 0, 3);
  for (std::int64_t b = 0; b < blocks; ++b) {
    std::int64_t x = testutil::uniform(rng, -xmax, xmax);
    l.head.push_back(x);
    l.head.push_back(-d * x);
  }
  l.loop = {0};
  return l;
}

Outcome criterion1() {
  std::mt19937_64 rng(1001);
  long checked = 0, zero = 0;
  for (std::int64_t d : {2, 3}) {
    for (std::int64_t mu : {2, 4, 6}) {
      for (auto r : kRelations) {
        Acceptor c = build_ds_comparator(mu, d, r);
        for (int i = 0; i < 10000; ++i) {
          LassoWeights l = comparator_sample(rng, mu, d);
          Rational v = ds_lasso(l, d);
          zero += v == 0;
          if (member(c, l, mu) != holds(v, r, 0)) {
            return {false, "mismatch d=" + std::to_string(d) + " mu=" + std::to_string(mu) + " rel=" + to_string(r)};
          }
          ++checked;
        }
      }
    }
  }
  return {true, std::to_string(checked) + " lassos, " + std::to_string(zero) + " with DS = 0"};
}

Outcome criterion2() {
  Outcome o;
  std::vector<std::string> misses;
  int fixpoints = 0;
  for (std::int64_t d : {2, 3}) {
    for (std::int64_t mu = 1; mu <= 10; ++mu) {
      const std::size_t expected = static_cast<std::size_t>(2 * (mu / (d - 1)) + 2);
      const std::size_t got = build_ds_comparator(mu, d, Relation::le).state_count();
      if (got != expected) {
        misses.push_back("d=" + std::to_string(d) + ",mu=" + std::to_string(mu) + ":" + std::to_string(got) + "!=" +
                         std::to_string(expected));
      }
      for (auto r : kRelations) {
        Acceptor c = build_ds_comparator(mu, d, r);
        if (minimize_deterministic(c).state_count() != c.state_count()) {
          o.pass = false;
          o.detail += "not minimal d=" + std::to_string(d) + " mu=" + std::to_string(mu) + " " + to_string(r) + "; ";
        } else {
          ++fixpoints;
        }
      }
    }
  }
  if (build_ds_comparator(5, 2, Relation::le).state_count() != 12) o.pass = false;
  o.detail += std::to_string(fixpoints) + "/120 minimization fixpoints";
  if (!misses.empty()) {
    o.pass = false;
    o.detail += "; state count differs from 2*floor(mu/(d-1))+2 for";
    for (const auto& m : misses) o.detail += " " + m;
    o.detail += " (minimal size is floor(T)+ceil(T)+2, T=mu/(d-1))";
  }
  return o;
}

Outcome criterion3() {
  std::mt19937_64 rng(1003);
  long agree = 0;
  for (auto [mu, d] : {std::pair<std::int64_t, std::int64_t>{3, 2}, {4, 3}}) {
    Acceptor xc = build_xc_comparator(mu, d);
    Acceptor ad = pair_adapter(build_ds_comparator(mu, d, Relation::lt), mu);
    for (int i = 0; i < 10000; ++i) {
      LassoWeights a = testutil::random_lasso(rng, 5, 5, mu, 0);
      LassoWeights b = i % 5 == 0 ? a : testutil::random_lasso(rng, 5, 5, mu, 0);
      LassoWord w = zip_pairs(a, b, 0, mu);
      bool x = lasso_membership(xc, w), y = lasso_membership(ad, w);
      if (x != y || x != (ds_lasso(a, d) < ds_lasso(b, d))) {
        return {false, "disagreement at mu=" + std::to_string(mu) + " d=" + std::to_string(d)};
      }
      ++agree;
    }
  }
  return {true, std::to_string(agree) + " pairs agree"};
}

struct InclusionPair {
  WeightedAutomaton p, q;
};

std::vector<InclusionPair> inclusion_corpus() {
  std::vector<InclusionPair> out;
  Rng pick(1004);
  for (std::uint64_t i = 0; i < 200; ++i) {
    auto np = static_cast<std::size_t>(pick.uniform(1, 6)), nq = static_cast<std::size_t>(pick.uniform(1, 6));
    out.push_back({random_weighted_automaton({np, Rational(3), 4, 2 * i}),
                   random_weighted_automaton({nq, Rational(3), 4, 2 * i + 1})});
  }
  return out;
}

// Binary lassos in normal form with |head|, |loop| <= 6.
std::vector<LassoWord> bounded_lassos() {
  std::vector<LassoWord> out;
  std::set<std::pair<std::vector<Symbol>, std::vector<Symbol>>> seen;
  auto seqs = [](std::size_t len) {
    std::vector<std::vector<Symbol>> v;
    for (std::uint32_t m = 0; m < (1u << len); ++m) {
      std::vector<Symbol> s;
      for (std::size_t i = 0; i < len; ++i) s.push_back((m >> i) & 1u);
      v.push_back(s);
    }
    return v;
  };
  for (std::size_t h = 0; h <= 6; ++h) {
    for (std::size_t l = 1; l <= 6; ++l) {
      for (auto& hs : seqs(h)) {
        for (auto& ls : seqs(l)) {
          LassoWord nf = normal_form({hs, ls});
          if (seen.insert({nf.head, nf.loop}).second) out.push_back(nf);
        }
      }
    }
  }
  return out;
}

Outcome criterion4() {
  const auto corpus = inclusion_corpus();
  const auto words = bounded_lassos();
  std::mt19937_64 rng(1044);
  int included = 0, refuted = 0, enumerated = 0;
  for (const auto& [p, q] : corpus) {
    const bool small = p.state_count() <= 4 && q.state_count() <= 4;
    bool viol_nonstrict = false, viol_strict = false;
    if (small) {
      ++enumerated;
      for (const auto& w : words) {
        Rational a = sup_weight(p, w, 2), b = sup_weight(q, w, 2);
        viol_nonstrict = viol_nonstrict || a > b;
        viol_strict = viol_strict || a >= b;
        if (viol_nonstrict) break;  // implies a strict violation too
      }
      viol_strict = viol_strict || viol_nonstrict;
    }
    for (auto s : {Strictness::nonstrict, Strictness::strict}) {
      auto v = check_inclusion(p, q, 2, s);
      if (v.included) {
        ++included;
        for (int i = 0; i < 1000; ++i) {
          LassoWord w;
          for (auto n = testutil::uniform(rng, 0, 8); n > 0; --n) w.head.push_back(static_cast<Symbol>(rng() % 2));
          for (auto n = testutil::uniform(rng, 1, 8); n > 0; --n) w.loop.push_back(static_cast<Symbol>(rng() % 2));
          Rational a = sup_weight(p, w, 2), b = sup_weight(q, w, 2);
          if (s == Strictness::nonstrict ? a > b : a >= b) return {false, "Included verdict refuted by a probe"};
        }
      } else {
        ++refuted;
        auto chk = verify_witness(p, q, 2, v.word, s);
        if (!chk.violates || chk.wt_p != v.wt_p || chk.wt_q != v.wt_q) return {false, "counterexample fails exact check"};
      }
      if (small) {
        bool enum_viol = s == Strictness::nonstrict ? viol_nonstrict : viol_strict;
        if (enum_viol == v.included) return {false, "bounded enumeration disagrees with the verdict"};
      }
    }
  }
  return {true, std::to_string(included) + " included, " + std::to_string(refuted) + " counterexamples, " +
                    std::to_string(enumerated) + " pairs enumerated over " + std::to_string(words.size()) + " lassos"};
}

Outcome criterion5() {
  const auto corpus = inclusion_corpus();
  int safety = 0, weak = 0;
  for (const auto& [p, q] : corpus) {
    Acceptor s = counterexample_automaton(p, q, 2, Strictness::strict);
    if (s.acceptance() != Acceptance::safety || !s.structural_error().empty()) return {false, "strict product not safety"};
    ++safety;
    Acceptor w = counterexample_automaton(p, q, 2, Strictness::nonstrict);
    if (w.acceptance() != Acceptance::weak || !w.structural_error().empty()) {
      return {false, "nonstrict product fails the weak partition check: " + w.structural_error()};
    }
    ++weak;
  }
  return {true, std::to_string(safety) + " safety, " + std::to_string(weak) + " weak"};
}

Outcome criterion6() {
  std::mt19937_64 rng(1006);
  long checked = 0;
  for (int i = 0; i < 10000; ++i) {
    const auto mu = testutil::uniform(rng, 1, 4);
    Weights w = testutil::random_weights(rng, static_cast<std::size_t>(testutil::uniform(rng, 1, 12)), mu);
    for (unsigned k = 1; k <= 3; ++k) {
      const Rational d = anytime_discount(k);
      const Rational ds = ds_finite(w, d);
      for (unsigned p = 1; p <= 3; ++p) {
        const Rational tol = d * pow2(-static_cast<long>(p));
        const Rational lo = ds - ds_low(w, k, p), hi = ds_up(w, k, p) - ds;
        if (lo < 0 || lo >= tol || hi < 0 || hi >= tol) return {false, "bound violated"};
        ++checked;
      }
    }
  }
  return {true, std::to_string(checked) + " (word, k, p) triples"};
}

Outcome criterion7() {
  Outcome o;
  int not_included_ok = 0;
  for (int i = 0; i < 50; ++i) {
    const unsigned k = 1 + static_cast<unsigned>(i % 3);
    const long m = 1 + (i / 3) % 8;
    const std::int64_t mu = 2 + (i / 24) % 2;
    Weights diff = approach_zero(mu, anytime_discount(k), pow2(-m), 200, true);
    Weights pw, qw;
    split(diff, pw, qw);
    auto v = anytime_inclusion(chain(pw), chain(qw), k, AnytimeBudget{12, std::nullopt});
    if (v.kind == AnytimeVerdict::Kind::not_included && v.trace.size() <= 12) ++not_included_ok;
  }
  int included_ok = 0, bounded = 0, within = 0;
  long min_off = 0, max_off = 0;
  for (int i = 0; i < 50; ++i) {
    const unsigned k = 1 + static_cast<unsigned>(i % 2);
    const long m = 1 + (i / 2) % 10;
    const std::int64_t mu = 2 + (i / 20) % 2;
    const Rational d = anytime_discount(k);
    Weights diff = approach_zero(mu, d, pow2(-m), 200);
    Weights pw, qw;
    split(diff, pw, qw);
    const Rational delta = min_margin(diff, d);
    unsigned guaranteed = 1;
    while (d * pow2(-static_cast<long>(guaranteed)) >= delta) ++guaranteed;
    auto v = anytime_inclusion(chain(pw), chain(qw), k, AnytimeBudget{guaranteed, std::nullopt});
    if (v.kind != AnytimeVerdict::Kind::included) continue;
    ++included_ok;
    if (v.trace.size() <= guaranteed) ++bounded;
    const auto predicted = static_cast<long>(std::ceil(std::log2(Rational(d / delta).get_d())));
    const long rounds = static_cast<long>(v.trace.size());
    if (std::labs(rounds - predicted) <= 1) ++within;
    if (included_ok == 1 || rounds - predicted < min_off) min_off = rounds - predicted;
    if (included_ok == 1 || rounds - predicted > max_off) max_off = rounds - predicted;
  }
  o.pass = not_included_ok == 50 && included_ok == 50 && bounded == 50 && within == 50;
  o.detail = "not-included " + std::to_string(not_included_ok) + "/50 within 12 rounds; included " +
             std::to_string(included_ok) + "/50, terminated by d*eps < delta " + std::to_string(bounded) +
             "/50, round count within ceil(log2(d/delta)) +- 1 " + std::to_string(within) + "/50";
  o.detail += ", rounds - predicted in [" + std::to_string(min_off) + ", " + std::to_string(max_off) + "]";
  if (within < 50) o.detail += " (integer weights make early rounds exact, so Included arrives sooner)";
  return o;
}

Outcome criterion8() {
  std::mt19937_64 rng(1008);
  const Rational d(2);
  long checks = 0, boundary = 0;
  for (int it = 0; it < 100; ++it) {
    auto g = random_game(rng, static_cast<std::size_t>(testutil::uniform(rng, 1, 40)), testutil::uniform(rng, 1, 5));
    const Rational opt = optimal_value_exact(g, d).value;
    ThresholdValue best = optimal_threshold(g, d);
    if (best.value(d) != opt) return {false, "threshold reconstruction"};
    std::vector<ThresholdValue> ts{best, nudge(best, 3, 1), nudge(best, 3, -1), nudge(best, 0, 1), nudge(best, 0, -1)};
    for (const auto& t : ts) {
      for (auto r : {Relation::le, Relation::lt}) {
        auto sol = satisfice(g, 2, t, r);
        if (sol.minimizer_wins != holds(opt, r, t.value(d))) return {false, "satisfice disagrees with the optimum"};
        ++checks;
        boundary += t.value(d) == opt;
      }
    }
  }
  return {true, std::to_string(checks) + " queries, " + std::to_string(boundary) + " at equality"};
}

Outcome criterion9() {
  std::mt19937_64 rng(1009);
  int checked = 0;
  for (int it = 0; it < 300; ++it) {
    const Rational d = it % 3 == 0 ? Rational(3) : it % 3 == 1 ? Rational(2) : make_rational(5, 2);
    auto g = random_game(rng, static_cast<std::size_t>(testutil::uniform(rng, 1, 5)), 4, 3);
    if (optimal_value_exact(g, d).value != minimax_oracle(g, d)) return {false, "optimum differs from lasso minimax"};
    ++checked;
  }
  return {true, std::to_string(checked) + " games"};
}

Outcome criterion10() {
  const Rational d(2);
  std::string ks;
  std::size_t prev_k = 0;
  double prev_ratio = 0;
  bool ok = true;
  for (std::size_t n = 2; n <= 6; ++n) {
    auto g = zp_game_family(n, d, 4);
    std::size_t k = vi_stabilization_round(g, d, 2 * 4 * n * n + 8 * n);
    double ratio = static_cast<double>(k) / static_cast<double>(n);
    ok = ok && k > prev_k && ratio > prev_ratio;
    prev_k = k;
    prev_ratio = ratio;
    ks += (ks.empty() ? "" : ", ") + std::string("k(") + std::to_string(n) + ")=" + std::to_string(k);
  }
  return {ok, ks};
}

Outcome criterion11() {
  std::mt19937_64 rng(1011);
  for (int i = 0; i < 10000; ++i) {
    const auto k = static_cast<unsigned>(testutil::uniform(rng, 1, 6));
    const auto mu = testutil::uniform(rng, 1, 5);
    Weights a = testutil::random_weights(rng, static_cast<std::size_t>(testutil::uniform(rng, 1, 25)), mu);
    const Rational d = anytime_discount(k);
    Rational diff = Rational(sum_finite(a)) - ds_finite(a, d);
    if (diff < 0) diff = -diff;
    const auto n = static_cast<long>(a.size());
    if (!(diff < pow2(-static_cast<long>(k)) * mu * n * n)) return {false, "bound violated"};
  }
  return {true, "10000 words"};
}

Outcome criterion12() {
  std::mt19937_64 rng(1012);
  std::map<std::int64_t, Acceptor> cache;
  int yes = 0;
  for (int i = 0; i < 10000; ++i) {
    const auto mu = testutil::uniform(rng, 1, 5);
    if (!cache.count(mu)) cache.emplace(mu, build_limsup_comparator(mu));
    LassoWeights a = testutil::random_lasso(rng, 4, 5, mu), b = testutil::random_lasso(rng, 4, 5, mu);
    bool got = lasso_membership(cache.at(mu), zip_pairs(a, b, -mu, mu));
    if (got != (limsup_lasso(a) >= limsup_lasso(b))) return {false, "limsup mismatch"};
    yes += got;
  }
  return {true, "10000 pairs, " + std::to_string(yes) + " accepted"};
}

Outcome criterion13() {
  std::mt19937_64 rng(1013);
  int positive = 0;
  for (int i = 0; i < 10000; ++i) {
    const auto mu = testutil::uniform(rng, 1, 5);
    auto a = testutil::random_lasso(rng, 4, 5, mu, 0), b = testutil::random_lasso(rng, 4, 5, mu, 0);
    bool got = pla_geq(a, b);
    if (got != oracle_pla(a, b, mu)) return {false, "pla_geq disagrees with prefix sums"};
    positive += got;
  }
  for (int i = 0; i < 1000; ++i) {
    auto a = testutil::random_lasso(rng, 6, 6, 5, 0), b = testutil::random_lasso(rng, 6, 6, 5, 0);
    auto t = pda_counter_trace(a, b, 200);
    auto d = prefix_diff(a, b, 200);
    for (std::size_t s = 0; s < t.size(); ++s) {
      if (t[s].counter != std::abs(d[s + 1]) || (t[s].state == PdaState::s_n) != (d[s + 1] <= 0)) {
        return {false, "counter invariant broken"};
      }
    }
  }
  return {true, "10000 pairs (" + std::to_string(positive) + " true), 1000 traces of 200 steps"};
}

std::string run_cli(const std::string& cli, const std::string& data, const std::string& args) {
  std::string cmd = "cd '" + data + "' && '" + cli + "'";
  std::istringstream in(args);
  std::string tok;
  while (in >> tok) cmd += " '" + tok + "'";
  cmd += " 2>&1";
  FILE* f = popen(cmd.c_str(), "r");
  if (!f) return "popen failed";
  std::string out;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), f)) > 0) out.append(buf.data(), n);
  int status = pclose(f);
  out += "exit " + std::to_string(WIFEXITED(status) ? WEXITSTATUS(status) : -1) + "\n";
  return out;
}

Outcome criterion14(const std::string& cli, const std::string& data, const std::string& golden) {
  std::ifstream cases(golden + "/cases.txt");
  if (!cases) return {false, "missing cases.txt"};
  std::string line;
  int ok = 0, total = 0;
  std::string bad;
  while (std::getline(cases, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto bar = line.find('|');
    std::string name = line.substr(0, bar), args = line.substr(bar + 1);
    name.erase(name.find_last_not_of(' ') + 1);
    ++total;
    std::ifstream g(golden + "/" + name + ".out", std::ios::binary);
    std::stringstream expected;
    expected << g.rdbuf();
    std::string first = run_cli(cli, data, args), second = run_cli(cli, data, args);
    if (first == expected.str() && second == first) {
      ++ok;
    } else {
      bad += " " + name;
    }
  }
  Outcome o{ok == total && total > 0, std::to_string(ok) + "/" + std::to_string(total) + " golden outputs stable"};
  if (!bad.empty()) o.detail += "; differing:" + bad;
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qcomp acceptance suite"};
  std::string cli, data, golden;
  std::vector<int> only;
  app.add_option("--cli", cli, "qcomp executable")->required();
  app.add_option("--data", data, "sample input directory")->required();
  app.add_option("--golden", golden, "golden output directory")->required();
  app.add_option("--only", only, "run only these criteria");
  CLI11_PARSE(app, argc, argv);
  cli = std::filesystem::absolute(cli).string();

  std::vector<std::pair<int, std::function<Outcome()>>> all{
      {1, criterion1},   {2, criterion2},   {3, criterion3},   {4, criterion4},   {5, criterion5},
      {6, criterion6},   {7, criterion7},   {8, criterion8},   {9, criterion9},   {10, criterion10},
      {11, criterion11}, {12, criterion12}, {13, criterion13},
      {14, [&] { return criterion14(cli, data, golden); }},
  };
  int failed = 0;
  for (auto& [id, fn] : all) {
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s criterion %d: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", id, o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
