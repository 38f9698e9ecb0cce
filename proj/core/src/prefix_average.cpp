// SPDX-License-Identifier: Apache-2.0
#include "qcomp/prefix_average.hpp"

#include <charconv>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "qcomp/wa_format.hpp"

namespace qcomp {

namespace {

void check_lasso(const LassoWeights& l) {
  if (l.loop.empty()) throw std::invalid_argument("sequence needs a nonempty loop");
  for (const auto* part : {&l.head, &l.loop}) {
    for (auto x : *part) {
      if (x < 0) throw std::invalid_argument("prefix-average sequences must be nonnegative");
    }
  }
}

}  // namespace

bool pla_geq(const LassoWeights& a, const LassoWeights& b) {
  check_lasso(a);
  check_lasso(b);
  const std::size_t h = std::max(a.head.size(), b.head.size());
  const std::size_t l = std::lcm(a.loop.size(), b.loop.size());
  // D(i) = Sum(A[0, i-1]) - Sum(B[0, i-1]); from i = h on, D(i + l) = D(i) + delta.
  std::int64_t diff = 0;
  for (std::size_t i = 0; i < h; ++i) diff += a.at(i) - b.at(i);
  std::vector<std::int64_t> steady(l);
  for (std::size_t r = 0; r < l; ++r) {
    steady[r] = diff;
    diff += a.at(h + r) - b.at(h + r);
  }
  const std::int64_t delta = diff - steady[0];
  if (delta != 0) return delta > 0;
  bool finitely_many_b_ahead = true, infinitely_many_a_ahead = false;
  for (auto x : steady) {
    if (x <= 0) finitely_many_b_ahead = false;
    if (x >= 0) infinitely_many_a_ahead = true;
  }
  return finitely_many_b_ahead && infinitely_many_a_ahead;
}

const char* to_string(PdaState s) {
  switch (s) {
    case PdaState::s_n: return "sN";
    case PdaState::s_p: return "sP";
    case PdaState::s_f: return "sF";
  }
  return "?";
}

std::vector<CounterStep> pda_counter_trace(const LassoWeights& a, const LassoWeights& b, std::size_t steps) {
  check_lasso(a);
  check_lasso(b);
  if (steps == 0) throw std::invalid_argument("steps must be positive");
  std::vector<CounterStep> out;
  out.reserve(steps);
  PdaState st = PdaState::s_n;
  std::int64_t stack = 0;  // tokens on the stack
  for (std::size_t i = 0; i < steps; ++i) {
    std::int64_t u = a.at(i) - b.at(i);
    // s_N tracks a difference <= 0: a surplus for B pushes, a surplus for A pops.
    // s_P tracks a difference > 0 with the roles swapped.
    const bool positive = st != PdaState::s_n;
    std::int64_t push = positive ? u : -u;
    if (push >= 0) {
      stack += push;
    } else if (stack + push >= 0) {
      stack += push;
    } else {
      stack = -(stack + push);  // popped through zero: the sign flips
      st = positive ? PdaState::s_n : PdaState::s_p;
    }
    if (st == PdaState::s_p && stack == 0) st = PdaState::s_n;  // empty stack means difference 0
    out.push_back({st, stack});
  }
  return out;
}

LassoWeights parse_seq(std::string_view text) {
  LassoWeights out;
  bool head = false, loop = false;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto toks = tokenize_line(line);
    if (!toks.empty()) {
      Weights* dst = nullptr;
      if (toks[0].text == "head:") {
        if (head) throw ParseError(line_no, toks[0].column, "duplicate 'head:'");
        head = true;
        dst = &out.head;
      } else if (toks[0].text == "loop:") {
        if (loop) throw ParseError(line_no, toks[0].column, "duplicate 'loop:'");
        loop = true;
        dst = &out.loop;
      } else {
        throw ParseError(line_no, toks[0].column, "expected 'head:' or 'loop:'");
      }
      for (std::size_t i = 1; i < toks.size(); ++i) {
        std::int64_t v = 0;
        const auto& t = toks[i].text;
        auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
        if (ec != std::errc() || p != t.data() + t.size()) {
          throw ParseError(line_no, toks[i].column, "expected an integer");
        }
        dst->push_back(v);
      }
    }
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  if (!loop || out.loop.empty()) throw ParseError(line_no, 1, "missing or empty 'loop:'");
  return out;
}

std::string serialize_seq(const LassoWeights& l) {
  std::ostringstream out;
  out << "head:";
  for (auto x : l.head) out << ' ' << x;
  out << "\nloop:";
  for (auto x : l.loop) out << ' ' << x;
  out << "\n";
  return out.str();
}

}  // namespace qcomp
