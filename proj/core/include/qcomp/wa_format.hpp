// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include "qcomp/automata.hpp"

namespace qcomp {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, const std::string& msg);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

struct ParseOptions {
  bool complete_acceptors = false;
};

using WaDocument = std::variant<WeightedAutomaton, Acceptor>;

// `.wa` text. A document with `acceptance` or `accepting` lines is an acceptor,
// otherwise a weighted automaton.
WaDocument parse_wa(std::string_view text, const ParseOptions& opt = {});
WeightedAutomaton parse_weighted(std::string_view text);
Acceptor parse_acceptor(std::string_view text, const ParseOptions& opt = {});

std::string serialize_wa(const WeightedAutomaton& w);
std::string serialize_wa(const Acceptor& a);

std::string emit_dot(const WeightedAutomaton& w);
std::string emit_dot(const Acceptor& a);

// Whitespace-separated tokens with their 1-based columns.
struct Token {
  std::string_view text;
  int column;
};
std::vector<Token> tokenize_line(std::string_view line);

}  // namespace qcomp
