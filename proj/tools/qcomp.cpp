// SPDX-License-Identifier: Apache-2.0
// qcomp command-line tool. Exit codes: 0 positive verdict, 1 negative verdict,
// 2 counterexample, 64 usage error, 65 input parse error.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "qcomp/anytime.hpp"
#include "qcomp/bench.hpp"
#include "qcomp/comparator_ds.hpp"
#include "qcomp/exact.hpp"
#include "qcomp/games.hpp"
#include "qcomp/inclusion.hpp"
#include "qcomp/prefix_average.hpp"
#include "qcomp/wa_format.hpp"

using namespace qcomp;

namespace {

constexpr int kUsage = 64;
constexpr int kParse = 65;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parse error tagged with the file it came from.
struct FileError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

template <class F>
auto parse_file(const std::string& path, F parse) {
  std::string text = read_file(path);
  try {
    return parse(text);
  } catch (const ParseError& e) {
    throw FileError(path + ": " + e.what());
  }
}

std::int64_t integer_discount(const std::string& text) {
  Rational d = parse_rational(text);
  if (d.get_den() != 1 || d < 2) throw UsageError("--d must be an integer >= 2");
  return d.get_num().get_si();
}

std::string symbols(const std::vector<Symbol>& w, const std::vector<std::string>& alphabet) {
  return format_word(LassoWord{w, {}}, alphabet);
}

int cmd_comparator_build(std::int64_t mu, const std::string& d_text, const std::string& rel,
                         const std::string& threshold, const std::string& out, const std::string& dot) {
  std::int64_t d = integer_discount(d_text);
  Relation r = parse_relation(rel);
  Acceptor a = threshold.empty() ? build_ds_comparator(mu, d, r)
                                 : build_threshold_comparator(mu, d, r, ThresholdValue::parse(threshold));
  if (!out.empty()) write_file(out, serialize_wa(a));
  if (!dot.empty()) write_file(dot, emit_dot(a));
  std::cout << "states=" << a.state_count() << "\ntransitions=" << a.edge_count() << "\n";
  return 0;
}

int cmd_comparator_member(const std::string& aut, const std::string& word) {
  Acceptor a = parse_file(aut, [](const std::string& t) { return parse_acceptor(t); });
  LassoWord w = parse_word(word, a.alphabet());
  bool ok = a.mode() == Mode::finite ? accepts_finite(a, w.head) : lasso_membership(a, w);
  std::cout << (ok ? "accept" : "reject") << "\n";
  return ok ? 0 : 1;
}

int cmd_inclusion(const std::string& p_path, const std::string& q_path, const std::string& d_text, bool strict) {
  auto p = parse_file(p_path, [](const std::string& t) { return parse_weighted(t); });
  auto q = parse_file(q_path, [](const std::string& t) { return parse_weighted(t); });
  auto v = check_inclusion(p, q, integer_discount(d_text), strict ? Strictness::strict : Strictness::nonstrict);
  if (v.included) {
    std::cout << "included\n";
    return 0;
  }
  std::cout << "counterexample " << format_word(v.word, p.alphabet()) << " wtP=" << to_string(v.wt_p)
            << " wtQ=" << to_string(v.wt_q) << "\n";
  return 2;
}

int cmd_anytime(const std::string& p_path, const std::string& q_path, unsigned k, unsigned max_rounds,
                std::optional<unsigned> eps) {
  auto p = parse_file(p_path, [](const std::string& t) { return parse_weighted(t); });
  auto q = parse_file(q_path, [](const std::string& t) { return parse_weighted(t); });
  AnytimeBudget budget;
  budget.max_rounds = max_rounds;
  budget.min_eps_exponent = eps;
  auto v = anytime_inclusion(p, q, k, budget);
  for (const auto& r : v.trace) {
    std::cout << "round " << r.round << " p=" << r.p << " low=" << to_string(r.low)
              << " up=" << (r.up ? to_string(*r.up) : "-") << " explored=" << r.explored << "\n";
  }
  std::cout << to_string(v.kind) << " eps=2^-" << v.eps_exponent;
  if (v.kind == AnytimeVerdict::Kind::not_included) {
    std::cout << " witness " << symbols(v.witness, p.alphabet()) << " wtP=" << to_string(v.wt_p)
              << " wtQ=" << to_string(v.wt_q);
  }
  std::cout << "\n";
  switch (v.kind) {
    case AnytimeVerdict::Kind::included: return 0;
    case AnytimeVerdict::Kind::not_included: return 2;
    case AnytimeVerdict::Kind::close_included: return 1;
  }
  return 1;
}

QuantGame load_game(const std::string& path) {
  return parse_file(path, [](const std::string& t) { return parse_game(t); });
}

int cmd_game_optimize(const std::string& path, const std::string& d_text) {
  QuantGame g = load_game(path);
  auto v = optimal_value_exact(g, parse_rational(d_text));
  std::cout << "value " << to_string(v.value) << "\nrounds " << v.rounds << "\n";
  return 0;
}

// "S name..." lines, '#' comments
void apply_labels(QuantGame& g, const std::string& path) {
  std::string text = read_file(path);
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    std::istringstream ls(line);
    long long s = 0;
    if (!(ls >> s)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      throw FileError(path + ": line " + std::to_string(line_no) + ": expected a state index");
    }
    if (s < 0 || static_cast<std::size_t>(s) >= g.state_count()) {
      throw FileError(path + ": line " + std::to_string(line_no) + ": state out of range");
    }
    std::string name;
    while (ls >> name) g.add_label(static_cast<State>(s), name);
  }
}

int cmd_game_satisfice(const std::string& path, const std::string& d_text, const std::string& threshold,
                       const std::string& rel, const std::string& objective, const std::string& labels) {
  QuantGame g = load_game(path);
  if (!labels.empty()) apply_labels(g, labels);
  std::int64_t d = integer_discount(d_text);
  Relation r = parse_relation(rel);
  ThresholdValue v = ThresholdValue::parse(threshold);
  GameSolution sol;
  if (objective.empty()) {
    sol = satisfice(g, d, v, r);
  } else {
    Acceptor o = parse_file(objective, [](const std::string& t) { return parse_acceptor(t); });
    sol = satisfice_with_objective(g, d, v, r, o);
  }
  std::cout << "winner " << (sol.minimizer_wins ? "minimizer" : "maximizer") << "\n";
  for (const auto& line : sol.strategy_lines()) std::cout << line << "\n";
  return sol.minimizer_wins ? 0 : 1;
}

LassoWeights load_seq(const std::string& path) {
  return parse_file(path, [](const std::string& t) { return parse_seq(t); });
}

int cmd_pla_compare(const std::string& a, const std::string& b) {
  bool r = pla_geq(load_seq(a), load_seq(b));
  std::cout << (r ? "true" : "false") << "\n";
  return r ? 0 : 1;
}

int cmd_pla_trace(const std::string& a, const std::string& b, std::size_t steps) {
  auto t = pda_counter_trace(load_seq(a), load_seq(b), steps);
  for (std::size_t i = 0; i < t.size(); ++i) {
    std::cout << (i + 1) << " " << to_string(t[i].state) << " " << t[i].counter << "\n";
  }
  return 0;
}

void emit(const std::string& out, const std::string& text) {
  if (out.empty()) {
    std::cout << text;
  } else {
    write_file(out, text);
  }
}

int cmd_eval_ds(const std::string& word, const std::string& d_text) {
  Rational d = parse_rational(d_text);
  if (d <= 1) throw UsageError("--d must exceed 1");
  auto tv = ThresholdValue::parse(word);
  Rational v = tv.loop.empty() ? ds_finite(tv.head, d) : ds_lasso(tv.digits(), d);
  std::cout << to_string(v) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Comparator automata for discounted-sum, limsup and prefix-average reasoning"};
  app.require_subcommand(1);
  int code = 0;
  std::function<int()> action;

  // comparator
  auto* comp = app.add_subcommand("comparator", "Build or query comparator automata");
  comp->require_subcommand(1);
  struct {
    std::int64_t mu = 1;
    std::string d, rel, threshold, out, dot, aut, word;
  } c;
  auto* build = comp->add_subcommand("build", "Build a DS comparator and print its size");
  build->add_option("--mu", c.mu, "Weight bound")->required()->check(CLI::Range(1, 1 << 20));
  build->add_option("--d", c.d, "Integer discount factor")->required();
  build->add_option("--rel", c.rel, "lt|gt|le|ge|eq|ne")->required();
  build->add_option("--threshold", c.threshold, "Threshold digits h0,h1;l0,l1");
  build->add_option("-o,--output", c.out, "Write the acceptor as .wa");
  build->add_option("--dot", c.dot, "Write Graphviz output");
  build->callback([&] { action = [&] { return cmd_comparator_build(c.mu, c.d, c.rel, c.threshold, c.out, c.dot); }; });
  auto* member = comp->add_subcommand("member", "Test lasso membership");
  member->add_option("--aut", c.aut, "Acceptor .wa file")->required();
  member->add_option("--word", c.word, "Lasso h0,h1;l0,l1")->required();
  member->callback([&] { action = [&] { return cmd_comparator_member(c.aut, c.word); }; });

  // inclusion
  auto* inc = app.add_subcommand("inclusion", "DS inclusion between weighted automata");
  inc->require_subcommand(1);
  struct {
    std::string p, q, d;
    bool strict = false;
  } ic;
  auto* check = inc->add_subcommand("check", "Decide P <= Q (or P < Q with --strict)");
  check->add_option("P", ic.p)->required();
  check->add_option("Q", ic.q)->required();
  check->add_option("--d", ic.d, "Integer discount factor")->required();
  check->add_flag("--strict", ic.strict);
  check->callback([&] { action = [&] { return cmd_inclusion(ic.p, ic.q, ic.d, ic.strict); }; });

  // anytime
  struct {
    std::string p, q;
    unsigned k = 1, rounds = 12;
    std::optional<unsigned> eps;
  } at;
  auto* any = app.add_subcommand("anytime", "Anytime inclusion over finite words with d = 1 + 2^-k");
  any->add_option("P", at.p)->required();
  any->add_option("Q", at.q)->required();
  any->add_option("--k", at.k, "Discount exponent")->required()->check(CLI::Range(1u, 20u));
  auto* mr = any->add_option("--max-rounds", at.rounds, "Round budget")->check(CLI::Range(1u, 64u));
  std::string eps_text;
  any->add_option("--eps", eps_text, "Stop at resolution 2^-P")->excludes(mr);
  any->callback([&] {
    if (!eps_text.empty()) {
      std::string t = eps_text.rfind("2^-", 0) == 0 ? eps_text.substr(3) : eps_text;
      try {
        std::size_t used = 0;
        unsigned long v = std::stoul(t, &used);
        if (used != t.size() || v == 0 || v > 64) throw std::invalid_argument("");
        at.eps = static_cast<unsigned>(v);
        at.rounds = at.eps.value();
      } catch (const std::exception&) {
        throw CLI::ValidationError("--eps", "expected 2^-P with 1 <= P <= 64");
      }
    }
    action = [&] { return cmd_anytime(at.p, at.q, at.k, at.rounds, at.eps); };
  });

  // game
  auto* game = app.add_subcommand("game", "Quantitative graph games");
  game->require_subcommand(1);
  struct {
    std::string file, d, threshold, rel, objective, labels;
  } gc;
  auto* opt = game->add_subcommand("optimize", "Exact optimal value");
  opt->add_option("G", gc.file)->required();
  opt->add_option("--d", gc.d, "Discount factor p/q")->required();
  opt->callback([&] { action = [&] { return cmd_game_optimize(gc.file, gc.d); }; });
  auto* sat = game->add_subcommand("satisfice", "Can the minimizer keep the cost R threshold");
  sat->add_option("G", gc.file)->required();
  sat->add_option("--d", gc.d, "Integer discount factor")->required();
  sat->add_option("--threshold", gc.threshold, "Threshold digits h;l")->required();
  sat->add_option("--rel", gc.rel, "le|lt")->required()->check(CLI::IsMember({"le", "lt"}));
  auto* obj = sat->add_option("--objective", gc.objective, "Deterministic safety acceptor over labels");
  sat->add_option("--labels", gc.labels, "Extra state labels")->needs(obj);
  sat->callback([&] {
    action = [&] { return cmd_game_satisfice(gc.file, gc.d, gc.threshold, gc.rel, gc.objective, gc.labels); };
  });

  // pla
  auto* pla = app.add_subcommand("pla", "Prefix-average comparison");
  pla->require_subcommand(1);
  struct {
    std::string a, b;
    std::size_t steps = 1;
  } pc;
  auto* cmp = pla->add_subcommand("compare", "Eventually Sum(A) > Sum(B)");
  cmp->add_option("A", pc.a)->required();
  cmp->add_option("B", pc.b)->required();
  cmp->callback([&] { action = [&] { return cmd_pla_compare(pc.a, pc.b); }; });
  auto* tr = pla->add_subcommand("trace", "Counter trace of the pushdown comparator");
  tr->add_option("A", pc.a)->required();
  tr->add_option("B", pc.b)->required();
  tr->add_option("--steps", pc.steps)->required()->check(CLI::Range(std::size_t{1}, std::size_t{1} << 24));
  tr->callback([&] { action = [&] { return cmd_pla_trace(pc.a, pc.b, pc.steps); }; });

  // gen
  auto* gen = app.add_subcommand("gen", "Benchmark generators");
  gen->require_subcommand(1);
  struct {
    std::size_t states = 2, n = 1, c = 4;
    std::string density = "2", d = "2", out;
    std::int64_t mu = 2;
    std::uint64_t seed = 0;
  } gp;
  auto* rwa = gen->add_subcommand("random-wa", "Random complete weighted automaton");
  rwa->add_option("--states", gp.states)->required()->check(CLI::Range(std::size_t{1}, std::size_t{1} << 20));
  rwa->add_option("--density", gp.density, "Transitions per state (p/q or decimal)")->required();
  rwa->add_option("--mu", gp.mu, "Weights in [0, mu-1]")->required();
  rwa->add_option("--seed", gp.seed)->required();
  rwa->add_option("-o,--output", gp.out);
  rwa->callback([&] {
    action = [&] {
      emit(gp.out, serialize_wa(random_weighted_automaton({gp.states, parse_rational(gp.density), gp.mu, gp.seed})));
      return 0;
    };
  });
  auto* zp = gen->add_subcommand("zp-game", "Value-iteration lower-bound game");
  zp->add_option("--n", gp.n)->required()->check(CLI::Range(std::size_t{1}, std::size_t{1000}));
  zp->add_option("--d", gp.d, "Discount factor p/q")->required();
  zp->add_option("--c", gp.c, "Horizon constant")->check(CLI::Range(std::size_t{1}, std::size_t{1000}));
  zp->add_option("-o,--output", gp.out);
  zp->callback([&] {
    action = [&] {
      emit(gp.out, serialize_game(zp_game_family(gp.n, parse_rational(gp.d), gp.c)));
      return 0;
    };
  });

  // eval
  auto* ev = app.add_subcommand("eval", "Exact evaluation");
  ev->require_subcommand(1);
  std::string ev_word, ev_d;
  auto* ds = ev->add_subcommand("ds", "Discounted sum of a lasso or finite word");
  ds->add_option("--word", ev_word, "h0,h1;l0,l1")->required();
  ds->add_option("--d", ev_d, "Discount factor p/q")->required();
  ds->callback([&] { action = [&] { return cmd_eval_ds(ev_word, ev_d); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    code = action();
  } catch (const FileError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParse;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParse;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return code;
}
