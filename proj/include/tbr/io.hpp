#pragma once

#include <iosfwd>

#include "tbr/poly.hpp"
#include "tbr/reductions.hpp"

namespace tbr {

struct ParseError : std::runtime_error {
  int line;
  ParseError(int line_, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line_) + ": " + msg),
        line(line_) {}
};

struct ParsedInstance {
  TemporalDigraph digraph;
  std::vector<RootSet> root_sets;
};

/// Line-oriented instance format: `tdg 1` header, then `v`, `active`
/// (with inclusive `a-b` interval shorthand), `e`, `te`, and `roots i` blocks
/// of `r <vertex> <t>` lines. `#` starts a comment.
ParsedInstance parse_instance(const std::string& text);
std::string serialize_instance(const TemporalDigraph& g,
                               const std::vector<RootSet>& root_sets);

struct ParsedSolution {
  ProblemVariant variant;
  struct Branching {
    std::map<std::string, std::set<Timestamp>> gamma_sub;
    std::map<std::string, std::set<TimePair>> lambda_sub;
  };
  std::vector<Branching> branchings;
};

/// Solution format: `tsol 1` header, `variant <spanning> <disjointness>`,
/// then per-branching blocks of `active` and `te` lines.
ParsedSolution parse_solution(const std::string& text);
std::string serialize_solution(const std::vector<TemporalBranching>& branchings,
                               ProblemVariant variant);

/// Attaches a parsed solution to its instance, taking branching i's roots from
/// the instance's i-th root block. Throws ParseError-style invalid_argument on
/// dangling references.
std::vector<TemporalBranching> bind_solution(const TemporalDigraph& g,
                                             const std::vector<RootSet>& root_sets,
                                             const ParsedSolution& sol);

/// DIMACS CNF restricted to exactly three positive literals per clause.
CnfFormula parse_cnf(const std::string& text);

/// WDP format: `wdp 1` header, `v`, `e`, and `request <source> <target>`.
WdpInstance parse_wdp(const std::string& text);
std::string serialize_wdp(const WdpInstance& w);

struct GenOptions {
  int vertices = 3;
  int lifetime = 3;
  double edge_prob = 0.3;
  std::uint64_t seed = 1;
  bool interval_activity = false;
  int k = 2;
};

/// Seed-deterministic random instance; equal options give identical bytes.
ParsedInstance generate_instance(const GenOptions& opts);

/// Command-line front end. Exit codes: 0 solved/valid, 2 usage or parse
/// error, 3 infeasible/invalid, 4 capability or scale refusal.
int run_cli(const std::vector<std::string>& args, std::istream& in,
            std::ostream& out, std::ostream& err);

}  // namespace tbr
