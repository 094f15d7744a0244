#include "tbr/io.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "tbr/exact.hpp"

namespace tbr {

namespace {

std::vector<std::string> tokens_of(const std::string& line) {
  std::string body = line.substr(0, line.find('#'));
  std::istringstream is(body);
  std::vector<std::string> toks;
  std::string t;
  while (is >> t) toks.push_back(t);
  return toks;
}

int parse_int(const std::string& tok, int line) {
  size_t used = 0;
  int value = 0;
  try {
    value = std::stoi(tok, &used);
  } catch (const std::exception&) {
    throw ParseError(line, "expected an integer, got '" + tok + "'");
  }
  if (used != tok.size())
    throw ParseError(line, "expected an integer, got '" + tok + "'");
  return value;
}

// Accepts "t" or inclusive "t1-t2".
void parse_times(const std::string& tok, int line, std::set<Timestamp>& into) {
  auto dash = tok.find('-');
  if (dash == std::string::npos || dash == 0) {
    int t = parse_int(tok, line);
    if (t < 0) throw ParseError(line, "negative timestamp");
    into.insert(t);
    return;
  }
  int a = parse_int(tok.substr(0, dash), line);
  int b = parse_int(tok.substr(dash + 1), line);
  if (a < 0 || b < a) throw ParseError(line, "bad interval '" + tok + "'");
  for (int t = a; t <= b; ++t) into.insert(t);
}

std::string times_tokens(const std::set<Timestamp>& times) {
  std::string out;
  auto it = times.begin();
  while (it != times.end()) {
    Timestamp lo = *it, hi = *it;
    auto next = std::next(it);
    while (next != times.end() && *next == hi + 1) hi = *next++;
    if (!out.empty()) out += " ";
    out += std::to_string(lo);
    if (hi > lo) out += "-" + std::to_string(hi);
    it = next;
  }
  return out;
}

}  // namespace

ParsedInstance parse_instance(const std::string& text) {
  ParsedInstance pi;
  TemporalDigraph& g = pi.digraph;
  std::istringstream is(text);
  std::string line;
  int ln = 0;
  bool header = false;
  int roots_open = 0;  // index of the open roots block
  std::set<std::string> vset, eset;

  while (std::getline(is, line)) {
    ++ln;
    auto toks = tokens_of(line);
    if (toks.empty()) continue;
    const std::string& d = toks[0];
    if (!header) {
      if (d != "tdg" || toks.size() != 2 || toks[1] != "1")
        throw ParseError(ln, "expected header 'tdg 1'");
      header = true;
      continue;
    }
    if (d == "v") {
      if (toks.size() != 2) throw ParseError(ln, "usage: v <id>");
      if (!vset.insert(toks[1]).second)
        throw ParseError(ln, "duplicate vertex " + toks[1]);
      g.vertices.push_back(toks[1]);
    } else if (d == "active") {
      if (toks.size() < 3) throw ParseError(ln, "usage: active <id> <t>...");
      if (!vset.count(toks[1])) throw ParseError(ln, "undeclared vertex " + toks[1]);
      for (size_t i = 2; i < toks.size(); ++i)
        parse_times(toks[i], ln, g.gamma[toks[1]]);
    } else if (d == "e") {
      if (toks.size() != 4) throw ParseError(ln, "usage: e <id> <tail> <head>");
      if (!eset.insert(toks[1]).second)
        throw ParseError(ln, "duplicate edge " + toks[1]);
      if (!vset.count(toks[2])) throw ParseError(ln, "undeclared vertex " + toks[2]);
      if (!vset.count(toks[3])) throw ParseError(ln, "undeclared vertex " + toks[3]);
      g.edges.push_back({toks[1], toks[2], toks[3]});
    } else if (d == "te") {
      if (toks.size() != 4) throw ParseError(ln, "usage: te <eid> <dep> <arr>");
      if (!eset.count(toks[1])) throw ParseError(ln, "undeclared edge " + toks[1]);
      int dep = parse_int(toks[2], ln), arr = parse_int(toks[3], ln);
      if (dep < 0 || arr < 0) throw ParseError(ln, "negative timestamp");
      g.lambda[toks[1]].insert({dep, arr});
    } else if (d == "roots") {
      if (toks.size() != 2) throw ParseError(ln, "usage: roots <i>");
      int idx = parse_int(toks[1], ln);
      if (idx != roots_open + 1)
        throw ParseError(ln, "roots blocks must be numbered consecutively from 1");
      roots_open = idx;
      pi.root_sets.push_back({});
    } else if (d == "r") {
      if (toks.size() != 3) throw ParseError(ln, "usage: r <vertex> <t>");
      if (roots_open == 0) throw ParseError(ln, "r line outside a roots block");
      if (!vset.count(toks[1])) throw ParseError(ln, "undeclared vertex " + toks[1]);
      int t = parse_int(toks[2], ln);
      pi.root_sets.back().roots.insert({toks[1], t});
    } else {
      throw ParseError(ln, "unknown directive '" + d + "'");
    }
  }
  if (!header) throw ParseError(ln, "missing 'tdg 1' header");

  auto violations = validate(g);
  if (!violations.empty()) throw ParseError(ln, "invalid instance: " + violations[0]);
  for (const auto& rs : pi.root_sets)
    for (const auto& r : rs.roots)
      if (!g.has_temporal_vertex(r))
        throw ParseError(ln, "root (" + r.vertex + "," + std::to_string(r.time) +
                                 ") is not a temporal vertex");
  return pi;
}

std::string serialize_instance(const TemporalDigraph& g,
                               const std::vector<RootSet>& root_sets) {
  std::ostringstream os;
  os << "tdg 1\n";
  for (const auto& v : g.vertices) os << "v " << v << "\n";
  for (const auto& v : g.vertices) {
    const auto& times = g.activity(v);
    if (!times.empty()) os << "active " << v << " " << times_tokens(times) << "\n";
  }
  for (const auto& e : g.edges) os << "e " << e.id << " " << e.tail << " " << e.head << "\n";
  for (const auto& e : g.edges)
    for (const TimePair& tp : g.pairs(e.id))
      os << "te " << e.id << " " << tp.dep << " " << tp.arr << "\n";
  for (size_t i = 0; i < root_sets.size(); ++i) {
    os << "roots " << i + 1 << "\n";
    for (const auto& r : root_sets[i].roots)
      os << "r " << r.vertex << " " << r.time << "\n";
  }
  return os.str();
}

ParsedSolution parse_solution(const std::string& text) {
  ParsedSolution sol;
  std::istringstream is(text);
  std::string line;
  int ln = 0;
  bool header = false, have_variant = false;

  while (std::getline(is, line)) {
    ++ln;
    auto toks = tokens_of(line);
    if (toks.empty()) continue;
    const std::string& d = toks[0];
    if (!header) {
      if (d != "tsol" || toks.size() != 2 || toks[1] != "1")
        throw ParseError(ln, "expected header 'tsol 1'");
      header = true;
      continue;
    }
    if (d == "variant") {
      if (toks.size() != 3) throw ParseError(ln, "usage: variant <spanning> <disjointness>");
      if (toks[1] == "temporal")
        sol.variant.spanning = Spanning::temporal;
      else if (toks[1] == "vertex")
        sol.variant.spanning = Spanning::vertex;
      else
        throw ParseError(ln, "unknown spanning '" + toks[1] + "'");
      if (toks[2] == "edge")
        sol.variant.disjointness = Disjointness::edge;
      else if (toks[2] == "t-edge")
        sol.variant.disjointness = Disjointness::t_edge;
      else
        throw ParseError(ln, "unknown disjointness '" + toks[2] + "'");
      have_variant = true;
    } else if (d == "branching") {
      if (toks.size() != 2) throw ParseError(ln, "usage: branching <i>");
      int idx = parse_int(toks[1], ln);
      if (idx != static_cast<int>(sol.branchings.size()) + 1)
        throw ParseError(ln, "branching blocks must be numbered consecutively from 1");
      sol.branchings.push_back({});
    } else if (d == "active") {
      if (sol.branchings.empty()) throw ParseError(ln, "active line outside a branching");
      if (toks.size() < 3) throw ParseError(ln, "usage: active <id> <t>...");
      for (size_t i = 2; i < toks.size(); ++i)
        parse_times(toks[i], ln, sol.branchings.back().gamma_sub[toks[1]]);
    } else if (d == "te") {
      if (sol.branchings.empty()) throw ParseError(ln, "te line outside a branching");
      if (toks.size() != 4) throw ParseError(ln, "usage: te <eid> <dep> <arr>");
      int dep = parse_int(toks[2], ln), arr = parse_int(toks[3], ln);
      sol.branchings.back().lambda_sub[toks[1]].insert({dep, arr});
    } else {
      throw ParseError(ln, "unknown directive '" + d + "'");
    }
  }
  if (!header) throw ParseError(ln, "missing 'tsol 1' header");
  if (!have_variant) throw ParseError(ln, "missing variant line");
  return sol;
}

std::string serialize_solution(const std::vector<TemporalBranching>& branchings,
                               ProblemVariant variant) {
  std::ostringstream os;
  os << "tsol 1\n";
  os << "variant " << to_string(variant.spanning) << " "
     << to_string(variant.disjointness) << "\n";
  for (size_t i = 0; i < branchings.size(); ++i) {
    os << "branching " << i + 1 << "\n";
    for (const auto& [v, times] : branchings[i].gamma_sub)
      if (!times.empty()) os << "active " << v << " " << times_tokens(times) << "\n";
    for (const auto& [id, ps] : branchings[i].lambda_sub)
      for (const TimePair& tp : ps)
        os << "te " << id << " " << tp.dep << " " << tp.arr << "\n";
  }
  return os.str();
}

std::vector<TemporalBranching> bind_solution(const TemporalDigraph& g,
                                             const std::vector<RootSet>& root_sets,
                                             const ParsedSolution& sol) {
  if (sol.branchings.size() != root_sets.size())
    throw std::invalid_argument("solution has " + std::to_string(sol.branchings.size()) +
                                " branchings but the instance declares " +
                                std::to_string(root_sets.size()) + " root sets");
  std::vector<TemporalBranching> out;
  for (size_t i = 0; i < sol.branchings.size(); ++i) {
    TemporalBranching b;
    b.host = &g;
    for (const auto& [v, times] : sol.branchings[i].gamma_sub) {
      if (!g.has_vertex(v))
        throw std::invalid_argument("solution references unknown vertex " + v);
      b.gamma_sub[v] = times;
    }
    for (const auto& [id, ps] : sol.branchings[i].lambda_sub) {
      if (!g.find_edge(id))
        throw std::invalid_argument("solution references unknown edge " + id);
      b.lambda_sub[id] = ps;
    }
    b.roots = root_sets[i];
    out.push_back(std::move(b));
  }
  return out;
}

CnfFormula parse_cnf(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  int ln = 0;
  CnfFormula phi;
  bool have_header = false;
  int expect_clauses = 0;
  std::vector<int> current;

  while (std::getline(is, line)) {
    ++ln;
    if (!line.empty() && (line[0] == 'c' || line[0] == '%')) continue;
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) {
      if (!have_header) {
        if (tok != "p") throw ParseError(ln, "expected 'p cnf <vars> <clauses>'");
        std::string kind;
        if (!(ls >> kind) || kind != "cnf") throw ParseError(ln, "expected 'p cnf'");
        std::string nv, nc;
        if (!(ls >> nv >> nc)) throw ParseError(ln, "expected 'p cnf <vars> <clauses>'");
        phi.num_variables = parse_int(nv, ln);
        expect_clauses = parse_int(nc, ln);
        have_header = true;
        continue;
      }
      int lit = parse_int(tok, ln);
      if (lit == 0) {
        if (current.size() != 3)
          throw ParseError(ln, "clauses must contain exactly 3 positive literals");
        phi.clauses.push_back({current[0], current[1], current[2]});
        current.clear();
      } else if (lit < 0) {
        throw ParseError(ln, "negative literal " + std::to_string(lit) +
                                 ": clauses must contain exactly 3 positive literals");
      } else {
        if (lit > phi.num_variables)
          throw ParseError(ln, "literal " + std::to_string(lit) + " exceeds variable count");
        current.push_back(lit);
      }
    }
  }
  if (!have_header) throw ParseError(ln, "missing 'p cnf' header");
  if (!current.empty()) throw ParseError(ln, "unterminated clause");
  if (static_cast<int>(phi.clauses.size()) != expect_clauses)
    throw ParseError(ln, "clause count differs from header");
  return phi;
}

WdpInstance parse_wdp(const std::string& text) {
  WdpInstance w;
  std::istringstream is(text);
  std::string line;
  int ln = 0;
  bool header = false;
  std::set<std::string> vset, eset;
  while (std::getline(is, line)) {
    ++ln;
    auto toks = tokens_of(line);
    if (toks.empty()) continue;
    const std::string& d = toks[0];
    if (!header) {
      if (d != "wdp" || toks.size() != 2 || toks[1] != "1")
        throw ParseError(ln, "expected header 'wdp 1'");
      header = true;
      continue;
    }
    if (d == "v") {
      if (toks.size() != 2) throw ParseError(ln, "usage: v <id>");
      if (!vset.insert(toks[1]).second) throw ParseError(ln, "duplicate vertex " + toks[1]);
      w.digraph.vertices.push_back(toks[1]);
    } else if (d == "e") {
      if (toks.size() != 4) throw ParseError(ln, "usage: e <id> <tail> <head>");
      if (!eset.insert(toks[1]).second) throw ParseError(ln, "duplicate edge " + toks[1]);
      if (!vset.count(toks[2])) throw ParseError(ln, "undeclared vertex " + toks[2]);
      if (!vset.count(toks[3])) throw ParseError(ln, "undeclared vertex " + toks[3]);
      w.digraph.edges.push_back({toks[1], toks[2], toks[3]});
    } else if (d == "request") {
      if (toks.size() != 3) throw ParseError(ln, "usage: request <source> <target>");
      if (!vset.count(toks[1])) throw ParseError(ln, "undeclared vertex " + toks[1]);
      if (!vset.count(toks[2])) throw ParseError(ln, "undeclared vertex " + toks[2]);
      w.requests.push_back({toks[1], toks[2]});
    } else {
      throw ParseError(ln, "unknown directive '" + d + "'");
    }
  }
  if (!header) throw ParseError(ln, "missing 'wdp 1' header");
  return w;
}

std::string serialize_wdp(const WdpInstance& w) {
  std::ostringstream os;
  os << "wdp 1\n";
  for (const auto& v : w.digraph.vertices) os << "v " << v << "\n";
  for (const auto& e : w.digraph.edges)
    os << "e " << e.id << " " << e.tail << " " << e.head << "\n";
  for (const auto& [s, t] : w.requests) os << "request " << s << " " << t << "\n";
  return os.str();
}

ParsedInstance generate_instance(const GenOptions& opts) {
  if (opts.vertices < 1 || opts.lifetime < 1 || opts.k < 1)
    throw std::invalid_argument("gen needs at least one vertex, timestamp, and root set");
  std::mt19937_64 eng(opts.seed);
  auto below = [&](int n) { return static_cast<int>(eng() % static_cast<std::uint64_t>(n)); };
  auto unit = [&]() { return (eng() >> 11) * 0x1.0p-53; };

  ParsedInstance pi;
  TemporalDigraph& g = pi.digraph;
  for (int i = 1; i <= opts.vertices; ++i) g.vertices.push_back("v" + std::to_string(i));

  for (const auto& v : g.vertices) {
    std::set<Timestamp> times;
    if (opts.interval_activity) {
      int a = 1 + below(opts.lifetime);
      int len = 1 + below(opts.lifetime - a + 1);
      for (int t = a; t < a + len; ++t) times.insert(t);
    } else {
      while (times.empty())
        for (int t = 1; t <= opts.lifetime; ++t)
          if (unit() < 0.6) times.insert(t);
    }
    g.gamma[v] = std::move(times);
  }

  for (const auto& u : g.vertices)
    for (const auto& v : g.vertices) {
      if (u == v) continue;
      std::set<TimePair> ps;
      for (Timestamp t : g.gamma[u])
        for (Timestamp t2 : g.gamma[v])
          if (t <= t2 && unit() < opts.edge_prob) ps.insert({t, t2});
      if (!ps.empty()) {
        std::string id = u + "-" + v;
        g.edges.push_back({id, u, v});
        g.lambda[id] = std::move(ps);
      }
    }

  auto vt = g.temporal_vertices();
  for (int i = 0; i < opts.k; ++i) {
    RootSet rs;
    int want = std::min<int>(1 + below(2), static_cast<int>(vt.size()));
    while (static_cast<int>(rs.roots.size()) < want)
      rs.roots.insert(vt[below(static_cast<int>(vt.size()))]);
    pi.root_sets.push_back(std::move(rs));
  }
  return pi;
}

namespace {

std::string read_input(const std::string& path, std::istream& in) {
  if (path == "-") {
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
  }
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("cannot open " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

ProblemVariant variant_of(const std::string& spanning, const std::string& disjoint) {
  ProblemVariant v;
  v.spanning = spanning == "temporal" ? Spanning::temporal : Spanning::vertex;
  v.disjointness = disjoint == "edge" ? Disjointness::edge : Disjointness::t_edge;
  return v;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in,
            std::ostream& out, std::ostream& err) {
  CLI::App app{"disjoint spanning branchings in temporal digraphs"};
  app.require_subcommand(1);

  std::string spanning, disjoint, method = "auto", instance_path = "-";
  std::string solution_path, reduce_kind, input_path = "-";
  std::string lift_spanning = "temporal";
  int k = -1;
  GenOptions gen;

  auto add_variant = [&](CLI::App* cmd) {
    cmd->add_option("--spanning", spanning, "temporal or vertex")
        ->required()
        ->check(CLI::IsMember({"temporal", "vertex"}));
    cmd->add_option("--disjoint", disjoint, "edge or t-edge")
        ->required()
        ->check(CLI::IsMember({"edge", "t-edge"}));
  };

  CLI::App* solve_cmd = app.add_subcommand("solve", "solve an instance");
  add_variant(solve_cmd);
  solve_cmd->add_option("--k", k, "expected number of root sets");
  solve_cmd->add_option("--method", method)->check(CLI::IsMember({"auto", "poly", "exact"}));
  solve_cmd->add_option("instance", instance_path, "instance file or - for stdin");

  CLI::App* verify_cmd = app.add_subcommand("verify", "verify a solution document");
  add_variant(verify_cmd);
  verify_cmd->add_option("instance", instance_path)->required();
  verify_cmd->add_option("solution", solution_path, "solution file or - for stdin");

  CLI::App* reduce_cmd = app.add_subcommand("reduce", "generate a gadget instance");
  reduce_cmd
      ->add_option("kind", reduce_kind,
                   "nae-star | nae-vertex | wdp | single-source | lift-roots")
      ->required()
      ->check(CLI::IsMember({"nae-star", "nae-vertex", "wdp", "single-source",
                             "lift-roots"}));
  reduce_cmd->add_option("--spanning", lift_spanning, "variant for lift-roots")
      ->check(CLI::IsMember({"temporal", "vertex"}));
  reduce_cmd->add_option("input", input_path, "input file or - for stdin");

  CLI::App* oracle_cmd = app.add_subcommand("oracle", "brute-force verdict");
  add_variant(oracle_cmd);
  oracle_cmd->add_option("--k", k);
  oracle_cmd->add_option("instance", instance_path);

  CLI::App* gen_cmd = app.add_subcommand("gen", "random instance");
  gen_cmd->add_option("--vertices", gen.vertices)->check(CLI::PositiveNumber);
  gen_cmd->add_option("--lifetime", gen.lifetime)->check(CLI::PositiveNumber);
  gen_cmd->add_option("--edge-prob", gen.edge_prob)->check(CLI::Range(0.0, 1.0));
  gen_cmd->add_option("--seed", gen.seed);
  gen_cmd->add_option("--k", gen.k)->check(CLI::PositiveNumber);
  gen_cmd->add_flag("--interval-activity", gen.interval_activity);

  std::vector<const char*> argv;
  argv.push_back("tbranch");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    try {
      app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
      out << app.help();
      return 0;
    } catch (const CLI::ParseError& e) {
      err << e.what() << "\n";
      return 2;
    }

    if (solve_cmd->parsed() || oracle_cmd->parsed()) {
      ParsedInstance pi = parse_instance(read_input(instance_path, in));
      if (k >= 0 && k != static_cast<int>(pi.root_sets.size())) {
        err << "instance declares " << pi.root_sets.size() << " root sets, --k says "
            << k << "\n";
        return 2;
      }
      ProblemVariant variant = variant_of(spanning, disjoint);
      std::optional<std::vector<TemporalBranching>> res;
      if (oracle_cmd->parsed()) {
        res = oracle_enumerate(pi.digraph, pi.root_sets, variant);
      } else {
        Method m = method == "auto"   ? Method::automatic
                   : method == "poly" ? Method::poly
                                      : Method::exact;
        res = solve(pi.digraph, pi.root_sets, variant, m);
      }
      if (!res) {
        out << "INFEASIBLE\n";
        return 3;
      }
      out << serialize_solution(*res, variant);
      return 0;
    }

    if (verify_cmd->parsed()) {
      ParsedInstance pi = parse_instance(read_input(instance_path, in));
      ParsedSolution sol = parse_solution(read_input(
          solution_path.empty() ? std::string("-") : solution_path, in));
      ProblemVariant variant = variant_of(spanning, disjoint);
      if (sol.variant != variant) {
        err << "solution document variant disagrees with the flags\n";
        return 2;
      }
      std::vector<TemporalBranching> bs;
      try {
        bs = bind_solution(pi.digraph, pi.root_sets, sol);
      } catch (const std::invalid_argument& e) {
        err << e.what() << "\n";
        return 2;
      }
      try {
        for (size_t i = 0; i < bs.size(); ++i) {
          auto res = verify_branching(bs[i], variant.spanning);
          if (!res) {
            err << "branching " << i + 1 << ": " << res.diagnostic << "\n";
            return 3;
          }
        }
        auto dis = check_disjoint(bs, variant.disjointness);
        if (!dis) {
          err << dis.diagnostic << "\n";
          return 3;
        }
      } catch (const std::invalid_argument& e) {
        err << e.what() << "\n";
        return 3;
      }
      return 0;
    }

    if (reduce_cmd->parsed()) {
      std::string text = read_input(input_path, in);
      if (reduce_kind == "nae-star" || reduce_kind == "nae-vertex") {
        CnfFormula phi = parse_cnf(text);
        ReductionOutput ro = reduce_kind == "nae-star" ? reduce_nae3sat_star(phi)
                                                       : reduce_nae3sat_vertex(phi);
        out << serialize_instance(ro.instance, ro.root_sets);
      } else if (reduce_kind == "wdp") {
        WdpInstance w = normalize_wdp(parse_wdp(text));
        ReductionOutput ro = reduce_wdp(w);
        out << serialize_instance(ro.instance, ro.root_sets);
      } else if (reduce_kind == "single-source") {
        ParsedInstance pi = parse_instance(text);
        ReductionOutput ro = to_single_source(pi.digraph, pi.root_sets);
        out << serialize_instance(ro.instance, ro.root_sets);
      } else {
        ParsedInstance pi = parse_instance(text);
        Spanning span =
            lift_spanning == "temporal" ? Spanning::temporal : Spanning::vertex;
        auto lifted = lift_roots(pi.digraph, pi.root_sets, span);
        out << serialize_instance(pi.digraph, lifted);
      }
      return 0;
    }

    if (gen_cmd->parsed()) {
      ParsedInstance pi = generate_instance(gen);
      out << serialize_instance(pi.digraph, pi.root_sets);
      return 0;
    }

    err << "no subcommand\n";
    return 2;
  } catch (const ParseError& e) {
    err << e.what() << "\n";
    return 2;
  } catch (const CapabilityError& e) {
    err << e.what() << "\n";
    return 4;
  } catch (const ScaleError& e) {
    err << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return 2;
  }
}

}  // namespace tbr
