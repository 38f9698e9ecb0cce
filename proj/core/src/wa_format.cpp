// SPDX-License-Identifier: Apache-2.0
#include "qcomp/wa_format.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <optional>
#include <sstream>

namespace qcomp {

ParseError::ParseError(int line, int column, const std::string& msg)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg),
      line_(line),
      column_(column) {}

std::vector<Token> tokenize_line(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i >= line.size()) break;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    out.push_back({line.substr(i, j - i), static_cast<int>(i) + 1});
    i = j;
  }
  return out;
}

namespace {

struct PendingTrans {
  State src;
  Symbol sym;
  State dst;
  std::optional<std::int64_t> weight;
  int line;
};

class WaParser {
 public:
  WaParser(std::string_view text, const ParseOptions& opt) : text_(text), opt_(opt) {}

  WaDocument run() {
    std::size_t pos = 0;
    int lineno = 0;
    bool header = false;
    while (pos <= text_.size()) {
      std::size_t nl = text_.find('\n', pos);
      std::string_view line = text_.substr(pos, nl == std::string_view::npos ? text_.npos : nl - pos);
      ++lineno;
      line_ = lineno;
      auto hash = line.find('#');
      if (hash != std::string_view::npos) line = line.substr(0, hash);
      auto toks = tokenize_line(line);
      if (!toks.empty()) {
        if (!header) {
          if (toks.size() != 2 || toks[0].text != "wa" || toks[1].text != "v1") {
            fail(toks[0].column, "expected header 'wa v1'");
          }
          header = true;
        } else {
          directive(toks);
        }
      }
      if (nl == std::string_view::npos) break;
      pos = nl + 1;
    }
    if (!header) fail(1, "missing header 'wa v1'");
    return finish();
  }

 private:
  [[noreturn]] void fail(int column, const std::string& msg) { throw ParseError(line_, column, msg); }

  std::int64_t integer(const Token& t) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc() || ptr != t.text.data() + t.text.size()) {
      fail(t.column, "expected an integer, got '" + std::string(t.text) + "'");
    }
    return v;
  }

  State state(const Token& t) {
    if (!states_) fail(t.column, "'states' must precede state references");
    std::int64_t v = integer(t);
    if (v < 0 || static_cast<std::size_t>(v) >= *states_) fail(t.column, "state " + std::string(t.text) + " out of range");
    return static_cast<State>(v);
  }

  Symbol symbol(const Token& t) {
    if (alphabet_.empty()) fail(t.column, "'alphabet' must precede symbol references");
    auto it = std::find(alphabet_.begin(), alphabet_.end(), t.text);
    if (it == alphabet_.end()) fail(t.column, "unknown symbol '" + std::string(t.text) + "'");
    return static_cast<Symbol>(it - alphabet_.begin());
  }

  void arity(const std::vector<Token>& toks, std::size_t lo, std::size_t hi) {
    if (toks.size() < lo || toks.size() > hi) fail(toks[0].column, "wrong number of fields for '" + std::string(toks[0].text) + "'");
  }

  void once(bool seen, const Token& t) {
    if (seen) fail(t.column, "duplicate '" + std::string(t.text) + "' directive");
  }

  void directive(const std::vector<Token>& toks) {
    std::string_view d = toks[0].text;
    if (d == "mode") {
      arity(toks, 2, 2);
      once(mode_.has_value(), toks[0]);
      if (toks[1].text == "omega") {
        mode_ = Mode::omega;
      } else if (toks[1].text == "finite") {
        mode_ = Mode::finite;
      } else {
        fail(toks[1].column, "mode must be omega or finite");
      }
    } else if (d == "states") {
      arity(toks, 2, 2);
      once(states_.has_value(), toks[0]);
      std::int64_t n = integer(toks[1]);
      if (n <= 0) fail(toks[1].column, "state count must be positive");
      states_ = static_cast<std::size_t>(n);
    } else if (d == "init") {
      arity(toks, 2, 2);
      once(init_.has_value(), toks[0]);
      init_ = state(toks[1]);
    } else if (d == "alphabet") {
      arity(toks, 2, SIZE_MAX);
      once(!alphabet_.empty(), toks[0]);
      for (std::size_t i = 1; i < toks.size(); ++i) {
        std::string name(toks[i].text);
        if (std::find(alphabet_.begin(), alphabet_.end(), name) != alphabet_.end()) {
          fail(toks[i].column, "duplicate symbol '" + name + "'");
        }
        alphabet_.push_back(name);
      }
    } else if (d == "trans") {
      arity(toks, 4, 5);
      PendingTrans t{state(toks[1]), symbol(toks[2]), state(toks[3]), std::nullopt, line_};
      if (toks.size() == 5) t.weight = integer(toks[4]);
      trans_.push_back(t);
    } else if (d == "acceptance") {
      arity(toks, 2, 2);
      once(acceptance_.has_value(), toks[0]);
      try {
        acceptance_ = parse_acceptance(toks[1].text);
      } catch (const std::invalid_argument& e) {
        fail(toks[1].column, e.what());
      }
      acceptance_line_ = line_;
    } else if (d == "accepting") {
      once(accepting_.has_value(), toks[0]);
      accepting_.emplace();
      for (std::size_t i = 1; i < toks.size(); ++i) accepting_->push_back(state(toks[i]));
      if (!acceptance_line_) acceptance_line_ = line_;
    } else if (d == "partition") {
      arity(toks, 2, SIZE_MAX);
      std::string_view head = toks[1].text;
      if (head.empty() || head.back() != ':') fail(toks[1].column, "expected 'partition <block>: states...'");
      Token b{head.substr(0, head.size() - 1), toks[1].column};
      std::int64_t block = integer(b);
      if (block < 0) fail(b.column, "block ids are nonnegative");
      for (std::size_t i = 2; i < toks.size(); ++i) {
        State s = state(toks[i]);
        if (block_of_.count(s)) fail(toks[i].column, "state listed in two blocks");
        block_of_[s] = static_cast<int>(block);
      }
      max_block_ = std::max(max_block_, static_cast<int>(block));
    } else if (d == "order") {
      arity(toks, 2, SIZE_MAX);
      std::string joined;
      for (std::size_t i = 1; i < toks.size(); ++i) joined += toks[i].text;
      auto lt = joined.find('<');
      if (lt == std::string::npos) fail(toks[1].column, "expected 'order b1<b2'");
      Token lo{std::string_view(joined).substr(0, lt), toks[1].column};
      Token hi{std::string_view(joined).substr(lt + 1), toks[1].column};
      order_.emplace_back(static_cast<int>(integer(lo)), static_cast<int>(integer(hi)));
    } else {
      fail(toks[0].column, "unknown directive '" + std::string(d) + "'");
    }
  }

  WaDocument finish() {
    if (!mode_) fail(1, "missing 'mode'");
    if (!states_) fail(1, "missing 'states'");
    if (!init_) fail(1, "missing 'init'");
    if (alphabet_.empty()) fail(1, "missing 'alphabet'");
    bool acceptor = acceptance_.has_value() || accepting_.has_value();
    if (!acceptor) {
      std::vector<WeightedTransition> ts;
      for (const auto& t : trans_) {
        if (!t.weight) throw ParseError(t.line, 1, "weighted transition without a weight");
        ts.push_back({t.src, t.sym, t.dst, *t.weight});
      }
      try {
        return WeightedAutomaton(alphabet_, *states_, *init_, ts, *mode_);
      } catch (const std::invalid_argument& e) {
        throw ParseError(line_, 1, e.what());
      }
    }
    Acceptance acc;
    if (*mode_ == Mode::finite) {
      if (acceptance_ && *acceptance_ != Acceptance::finite) {
        throw ParseError(acceptance_line_.value_or(1), 1, "finite-word acceptors take no omega acceptance");
      }
      acc = Acceptance::finite;
    } else {
      if (!acceptance_) throw ParseError(acceptance_line_.value_or(1), 1, "missing 'acceptance'");
      if (*acceptance_ == Acceptance::finite) throw ParseError(*acceptance_line_, 1, "acceptance finite needs mode finite");
      acc = *acceptance_;
    }
    Acceptor a(alphabet_, *states_, *init_, acc);
    if (accepting_) {
      for (auto s : *accepting_) a.set_accepting(s, true);
    }
    for (const auto& t : trans_) a.add_edge(t.src, t.sym, t.dst);
    if (acc == Acceptance::weak) {
      std::vector<int> blocks(*states_, -1);
      for (auto [s, b] : block_of_) blocks[s] = b;
      for (State s = 0; s < *states_; ++s) {
        if (blocks[s] < 0) throw ParseError(line_, 1, "state " + std::to_string(s) + " has no block");
      }
      a.set_blocks(blocks, order_);
    } else if (!block_of_.empty() || !order_.empty()) {
      throw ParseError(acceptance_line_.value_or(1), 1, "partition given for non-weak acceptance");
    }
    if (opt_.complete_acceptors) a = complete_with_sink(a);
    auto err = a.structural_error();
    if (!err.empty()) throw ParseError(acceptance_line_.value_or(1), 1, err);
    return a;
  }

  std::string_view text_;
  ParseOptions opt_;
  int line_ = 0;
  std::optional<Mode> mode_;
  std::optional<std::size_t> states_;
  std::optional<State> init_;
  std::vector<std::string> alphabet_;
  std::vector<PendingTrans> trans_;
  std::optional<Acceptance> acceptance_;
  std::optional<int> acceptance_line_;
  std::optional<std::vector<State>> accepting_;
  std::map<State, int> block_of_;
  int max_block_ = -1;
  std::vector<std::pair<int, int>> order_;
};

void header(std::ostringstream& os, Mode mode, std::size_t states, State init, const std::vector<std::string>& alphabet) {
  os << "wa v1\n";
  os << "mode " << (mode == Mode::finite ? "finite" : "omega") << "\n";
  os << "states " << states << "\n";
  os << "init " << init << "\n";
  os << "alphabet";
  for (const auto& s : alphabet) os << ' ' << s;
  os << "\n";
}

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

WaDocument parse_wa(std::string_view text, const ParseOptions& opt) { return WaParser(text, opt).run(); }

WeightedAutomaton parse_weighted(std::string_view text) {
  auto doc = parse_wa(text);
  if (auto* w = std::get_if<WeightedAutomaton>(&doc)) return *w;
  throw ParseError(1, 1, "expected a weighted automaton, found an acceptor");
}

Acceptor parse_acceptor(std::string_view text, const ParseOptions& opt) {
  auto doc = parse_wa(text, opt);
  if (auto* a = std::get_if<Acceptor>(&doc)) return *a;
  throw ParseError(1, 1, "expected an acceptor, found a weighted automaton");
}

std::string serialize_wa(const WeightedAutomaton& w) {
  std::ostringstream os;
  header(os, w.mode(), w.state_count(), w.initial(), w.alphabet());
  for (const auto& t : w.transitions()) {
    os << "trans " << t.src << ' ' << w.alphabet()[t.sym] << ' ' << t.dst << ' ' << t.weight << "\n";
  }
  return os.str();
}

std::string serialize_wa(const Acceptor& a) {
  std::ostringstream os;
  header(os, a.mode(), a.state_count(), a.initial(), a.alphabet());
  if (a.acceptance() != Acceptance::finite) os << "acceptance " << to_string(a.acceptance()) << "\n";
  os << "accepting";
  for (State s = 0; s < a.state_count(); ++s) {
    if (a.accepting(s)) os << ' ' << s;
  }
  os << "\n";
  for (State s = 0; s < a.state_count(); ++s) {
    for (auto e : a.edges(s)) os << "trans " << s << ' ' << a.alphabet()[e.sym] << ' ' << e.dst << "\n";
  }
  if (a.acceptance() == Acceptance::weak) {
    for (int b = 0; b < a.block_count(); ++b) {
      os << "partition " << b << ":";
      for (State s = 0; s < a.state_count(); ++s) {
        if (a.block_of()[s] == b) os << ' ' << s;
      }
      os << "\n";
    }
    for (auto [lo, hi] : a.block_order()) os << "order " << lo << "<" << hi << "\n";
  }
  return os.str();
}

std::string emit_dot(const WeightedAutomaton& w) {
  std::ostringstream os;
  os << "digraph wa {\n  rankdir=LR;\n  init [shape=point];\n  init -> q" << w.initial() << ";\n";
  for (State s = 0; s < w.state_count(); ++s) os << "  q" << s << " [shape=circle];\n";
  for (const auto& t : w.transitions()) {
    os << "  q" << t.src << " -> q" << t.dst << " [label=\"" << dot_escape(w.alphabet()[t.sym]) << " / " << t.weight
       << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

std::string emit_dot(const Acceptor& a) {
  std::ostringstream os;
  os << "digraph acceptor {\n  rankdir=LR;\n  init [shape=point];\n  init -> q" << a.initial() << ";\n";
  for (State s = 0; s < a.state_count(); ++s) {
    os << "  q" << s << " [shape=" << (a.accepting(s) ? "doublecircle" : "circle");
    if (a.acceptance() == Acceptance::weak) os << ", label=\"" << s << " [b" << a.block_of()[s] << "]\"";
    os << "];\n";
  }
  for (State s = 0; s < a.state_count(); ++s) {
    // one edge per target, labels merged
    std::map<State, std::string> merged;
    for (auto e : a.edges(s)) {
      auto& l = merged[e.dst];
      if (!l.empty()) l += ",";
      l += a.alphabet()[e.sym];
    }
    for (const auto& [t, label] : merged) os << "  q" << s << " -> q" << t << " [label=\"" << dot_escape(label) << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace qcomp
