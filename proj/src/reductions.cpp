#include "tbr/reductions.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace tbr {

namespace {

std::string fresh_name(std::string base, const std::set<std::string>& taken) {
  while (taken.count(base)) base += "~";
  return base;
}

std::set<std::string> vertex_names(const TemporalDigraph& g) {
  return {g.vertices.begin(), g.vertices.end()};
}

std::set<std::string> edge_ids(const TemporalDigraph& g) {
  std::set<std::string> out;
  for (const auto& e : g.edges) out.insert(e.id);
  return out;
}

void add_edge(TemporalDigraph& g, std::set<std::string>& ids, const std::string& base_id,
              const std::string& tail, const std::string& head,
              const std::set<TimePair>& pairs) {
  std::string id = fresh_name(base_id, ids);
  ids.insert(id);
  g.edges.push_back({id, tail, head});
  g.lambda[id] = pairs;
}

}  // namespace

void require_valid(const CnfFormula& phi) {
  if (phi.num_variables < 0) throw std::invalid_argument("negative variable count");
  for (const auto& c : phi.clauses)
    for (int lit : c)
      if (lit < 1 || lit > phi.num_variables)
        throw std::invalid_argument("clause literal " + std::to_string(lit) +
                                    " outside [1.." +
                                    std::to_string(phi.num_variables) + "]");
}

ReductionOutput to_single_source(const TemporalDigraph& g,
                                 const std::vector<RootSet>& root_sets) {
  require_valid(g);
  if (root_sets.empty()) throw std::invalid_argument("need at least one root set");
  for (const auto& rs : root_sets)
    for (const auto& r : rs.roots)
      if (!g.has_temporal_vertex(r))
        throw std::invalid_argument("root is not a temporal vertex");

  Timestamp shift = 0;
  for (const auto& [v, times] : g.gamma)
    if (times.count(0)) shift = 1;

  ReductionOutput out;
  out.decoder = "single-source";
  out.info["shift"] = std::to_string(shift);
  int k = static_cast<int>(root_sets.size());

  TemporalDigraph& h = out.instance;
  h.vertices = g.vertices;
  h.edges = g.edges;
  for (const auto& [v, times] : g.gamma)
    for (Timestamp t : times) h.gamma[v].insert(t + shift);
  for (const auto& [id, ps] : g.lambda)
    for (const TimePair& tp : ps) h.lambda[id].insert({tp.dep + shift, tp.arr + shift});

  auto names = vertex_names(h);
  auto ids = edge_ids(h);

  std::vector<std::string> sub_roots;
  for (int i = 1; i <= k; ++i) {
    std::string ri = fresh_name("r#" + std::to_string(i), names);
    names.insert(ri);
    sub_roots.push_back(ri);
    h.vertices.push_back(ri);
    h.gamma[ri] = {0};
  }
  std::string r = fresh_name("r", names);
  h.vertices.push_back(r);
  h.gamma[r] = {0};
  out.info["root"] = r;

  for (int i = 0; i < k; ++i) {
    std::map<std::string, std::set<TimePair>> grouped;
    for (const auto& root : root_sets[i].roots)
      grouped[root.vertex].insert({0, root.time + shift});
    for (const auto& [u, ps] : grouped)
      add_edge(h, ids, sub_roots[i] + ">" + u, sub_roots[i], u, ps);
    // every branching must span (r_i, 0), so one parallel copy per branching
    for (int c = 1; c <= k; ++c)
      add_edge(h, ids, r + ">" + sub_roots[i] + "/" + std::to_string(c), r,
               sub_roots[i], {{0, 0}});
  }

  out.root_sets.assign(k, RootSet{{TemporalVertex{r, 0}}});
  return out;
}

std::vector<RootSet> lift_roots(const TemporalDigraph& g,
                                const std::vector<RootSet>& root_sets,
                                Spanning spanning) {
  std::vector<RootSet> out = root_sets;
  RootSet extra;
  if (spanning == Spanning::temporal) {
    for (const auto& v : g.vertices)
      for (Timestamp t : g.activity(v))
        if (!g.active_at(v, t - 1)) extra.roots.insert({v, t});
  } else {
    for (const auto& v : g.vertices) {
      const auto& times = g.activity(v);
      if (!times.empty()) extra.roots.insert({v, *times.begin()});
    }
  }
  out.push_back(std::move(extra));
  return out;
}

WdpInstance normalize_wdp(const WdpInstance& w) {
  if (w.requests.size() != 2)
    throw std::invalid_argument("normalize_wdp expects exactly two requests");
  for (const auto& [s, t] : w.requests)
    if (!w.digraph.has_vertex(s) || !w.digraph.has_vertex(t))
      throw std::invalid_argument("request references an undeclared vertex");

  WdpInstance out = w;
  std::map<std::string, int> indeg, outdeg, uses;
  for (const auto& v : out.digraph.vertices) indeg[v] = outdeg[v] = 0;
  for (const auto& e : out.digraph.edges) {
    ++outdeg[e.tail];
    ++indeg[e.head];
  }
  for (const auto& [s, t] : out.requests) {
    ++uses[s];
    ++uses[t];
  }

  std::set<std::string> names(out.digraph.vertices.begin(), out.digraph.vertices.end());
  std::set<std::string> ids;
  for (const auto& e : out.digraph.edges) ids.insert(e.id);

  for (size_t i = 0; i < out.requests.size(); ++i) {
    auto& [s, t] = out.requests[i];
    std::string tag = std::to_string(i + 1);
    if (indeg[s] > 0 || uses[s] > 1) {
      --uses[s];
      std::string fresh = fresh_name("src#" + tag, names);
      names.insert(fresh);
      out.digraph.vertices.push_back(fresh);
      std::string id = fresh_name(fresh + ">" + s, ids);
      ids.insert(id);
      out.digraph.edges.push_back({id, fresh, s});
      s = fresh;
      ++uses[s];
    }
    if (outdeg[t] > 0 || uses[t] > 1) {
      --uses[t];
      std::string fresh = fresh_name("snk#" + tag, names);
      names.insert(fresh);
      out.digraph.vertices.push_back(fresh);
      std::string id = fresh_name(t + ">" + fresh, ids);
      ids.insert(id);
      out.digraph.edges.push_back({id, t, fresh});
      t = fresh;
      ++uses[t];
    }
  }
  return out;
}

ReductionOutput reduce_wdp(const WdpInstance& w) {
  if (w.requests.size() != 2) throw std::invalid_argument("reduce_wdp expects 2-WDP");
  std::map<std::string, int> indeg, outdeg;
  for (const auto& v : w.digraph.vertices) indeg[v] = outdeg[v] = 0;
  for (const auto& e : w.digraph.edges) {
    ++outdeg[e.tail];
    ++indeg[e.head];
  }
  const std::string s1 = w.requests[0].first, t1 = w.requests[0].second;
  const std::string s2 = w.requests[1].first, t2 = w.requests[1].second;
  std::set<std::string> specials{s1, t1, s2, t2};
  if (specials.size() != 4 || indeg[s1] || indeg[s2] || outdeg[t1] || outdeg[t2])
    throw std::invalid_argument("reduce_wdp expects a normalized instance");

  ReductionOutput out;
  out.decoder = "wdp";
  TemporalDigraph& g = out.instance;
  g.vertices = w.digraph.vertices;

  std::set<std::string> names = {g.vertices.begin(), g.vertices.end()};
  std::string x = fresh_name("X", names);
  names.insert(x);
  std::string y = fresh_name("Y", names);
  names.insert(y);
  g.vertices.push_back(x);
  g.vertices.push_back(y);
  out.info["s1"] = s1;
  out.info["t1"] = t1;
  out.info["s2"] = s2;
  out.info["t2"] = t2;
  out.info["x"] = x;
  out.info["y"] = y;

  auto in_snap1 = [&](const std::string& v) { return v != s2 && v != t2; };
  auto in_snap3 = [&](const std::string& v) { return v != s1 && v != t1; };
  for (const auto& v : w.digraph.vertices) {
    if (in_snap1(v)) g.gamma[v].insert(1);
    if (in_snap3(v)) g.gamma[v].insert(3);
  }
  g.gamma[x] = {1};
  g.gamma[y] = {3};

  std::set<std::string> ids;
  for (const auto& e : w.digraph.edges) {
    std::set<TimePair> ps;
    if (in_snap1(e.tail) && in_snap1(e.head)) ps.insert({1, 1});
    if (in_snap3(e.tail) && in_snap3(e.head)) ps.insert({3, 3});
    ids.insert(e.id);
    g.edges.push_back(e);
    if (!ps.empty()) g.lambda[e.id] = ps;
  }
  out.info["original_edges"] = std::to_string(w.digraph.edges.size());

  for (const auto& v : w.digraph.vertices)
    if (in_snap1(v)) add_edge(g, ids, x + ">" + v, x, v, {{1, 1}});
  for (const auto& v : g.vertices)
    if (v != s1 && v != s2 && v != t2 && v != t1 && v != y)
      add_edge(g, ids, t1 + ">" + v, t1, v, {{1, 1}});
  for (const auto& v : w.digraph.vertices)
    if (in_snap3(v)) add_edge(g, ids, y + ">" + v, y, v, {{3, 3}});
  for (const auto& v : g.vertices)
    if (v != s2 && v != s1 && v != t1 && v != t2 && v != x)
      add_edge(g, ids, t2 + ">" + v, t2, v, {{3, 3}});

  out.root_sets = {RootSet{{{s1, 1}, {y, 3}}}, RootSet{{{s2, 3}, {x, 1}}}};
  return out;
}

ReductionOutput reduce_nae3sat_star(const CnfFormula& phi) {
  require_valid(phi);
  int n = phi.num_variables;
  int m = static_cast<int>(phi.clauses.size());

  ReductionOutput out;
  out.decoder = "nae-star";
  out.info["n"] = std::to_string(n);
  out.info["m"] = std::to_string(m);
  TemporalDigraph& g = out.instance;

  g.vertices.push_back("T");
  for (int i = 1; i <= n; ++i) {
    g.vertices.push_back("x#" + std::to_string(i));
    g.vertices.push_back("xbar#" + std::to_string(i));
  }

  auto pos = [](int i) { return "x#" + std::to_string(i); };
  auto neg = [](int i) { return "xbar#" + std::to_string(i); };

  for (int i = 1; i <= n; ++i) {
    Timestamp t = 2 * i - 1;
    g.gamma["T"].insert(t);
    g.gamma[pos(i)].insert(t);
    g.gamma[neg(i)].insert(t);
    g.lambda[pos(i) + ">T"].insert({t, t});
    g.lambda[neg(i) + ">T"].insert({t, t});
  }
  for (int j = 1; j <= m; ++j) {
    Timestamp t = 2 * (n + j) - 1;
    g.gamma["T"].insert(t);
    for (int lit : phi.clauses[j - 1]) {
      g.gamma[pos(lit)].insert(t);
      g.lambda[pos(lit) + ">T"].insert({t, t});
    }
  }
  for (int i = 1; i <= n; ++i) {
    g.edges.push_back({pos(i) + ">T", pos(i), "T"});
    g.edges.push_back({neg(i) + ">T", neg(i), "T"});
  }

  RootSet roots;
  for (const auto& v : g.vertices)
    if (v != "T")
      for (Timestamp t : g.activity(v)) roots.roots.insert({v, t});
  out.root_sets = {roots, roots};
  return out;
}

ReductionOutput reduce_nae3sat_vertex(const CnfFormula& phi) {
  require_valid(phi);
  int n = phi.num_variables;
  int m = static_cast<int>(phi.clauses.size());

  ReductionOutput out;
  out.decoder = "nae-vertex";
  out.info["n"] = std::to_string(n);
  out.info["m"] = std::to_string(m);
  TemporalDigraph& g = out.instance;

  auto xv = [](int i) { return "x#" + std::to_string(i); };
  auto tv = [](int i) { return "T#" + std::to_string(i); };
  auto fv = [](int i) { return "F#" + std::to_string(i); };
  auto av = [](int i) { return "a#" + std::to_string(i); };
  auto cv = [](int j) { return "c#" + std::to_string(j); };

  g.vertices.push_back("g");
  g.vertices.push_back("r");
  g.gamma["g"] = {1, 2};
  g.gamma["r"] = {1, 2};
  for (int i = 1; i <= n; ++i) {
    for (const auto& v : {xv(i), tv(i), fv(i), av(i)}) g.vertices.push_back(v);
    g.gamma[xv(i)] = {1};
    g.gamma[av(i)] = {1};
    g.gamma[tv(i)] = {1, 2};
    g.gamma[fv(i)] = {1, 2};
  }
  for (int j = 1; j <= m; ++j) {
    g.vertices.push_back(cv(j));
    g.gamma[cv(j)] = {1};
  }

  auto edge1 = [&](const std::string& tail, const std::string& head) {
    std::string id = tail + ">" + head;
    if (!g.find_edge(id)) g.edges.push_back({id, tail, head});
    g.lambda[id].insert({1, 1});
  };
  for (int i = 1; i <= n; ++i) {
    edge1("g", xv(i));
    edge1("r", xv(i));
    edge1(xv(i), tv(i));
    edge1(xv(i), fv(i));
    edge1(tv(i), av(i));
    edge1(fv(i), av(i));
  }
  // Clause vertices hang off the T side of their literals' gadgets, so a
  // branching reaches c_j only through a variable it set to true.
  for (int j = 1; j <= m; ++j)
    for (int lit : phi.clauses[j - 1]) edge1(tv(lit), cv(j));

  for (int i = 1; i <= n; ++i)
    for (const auto& head : {tv(i), fv(i)})
      for (const auto& tail : {std::string("g"), std::string("r")}) {
        std::string id = tail + ">" + head;
        g.edges.push_back({id, tail, head});
        g.lambda[id].insert({2, 2});
      }

  RootSet roots{{TemporalVertex{"g", 1}, TemporalVertex{"r", 1}}};
  out.root_sets = {roots, roots};
  return out;
}

std::vector<bool> decode_assignment(const ReductionOutput& out,
                                    const std::vector<TemporalBranching>& branchings) {
  if (branchings.size() != 2)
    throw std::invalid_argument("decode_assignment expects two branchings");
  Spanning span;
  if (out.decoder == "nae-star")
    span = Spanning::temporal;
  else if (out.decoder == "nae-vertex")
    span = Spanning::vertex;
  else
    throw std::invalid_argument("output was not produced by a NAE reduction");

  for (const auto& b : branchings) {
    auto res = verify_branching(b, span);
    if (!res)
      throw std::invalid_argument("branchings do not verify: " + res.diagnostic);
  }
  auto dis = check_disjoint(branchings, Disjointness::edge);
  if (!dis) throw std::invalid_argument("branchings are not edge-disjoint: " + dis.diagnostic);

  int n = std::stoi(out.info.at("n"));
  std::vector<bool> assignment(n, false);
  for (int i = 1; i <= n; ++i) {
    std::string edge = out.decoder == "nae-star"
                           ? "x#" + std::to_string(i) + ">T"
                           : "x#" + std::to_string(i) + ">T#" + std::to_string(i);
    Timestamp t = out.decoder == "nae-star" ? 2 * i - 1 : 1;
    auto it = branchings[0].lambda_sub.find(edge);
    assignment[i - 1] = it != branchings[0].lambda_sub.end() && it->second.count({t, t});
  }
  return assignment;
}

std::pair<std::vector<std::string>, std::vector<std::string>> decode_paths(
    const ReductionOutput& out, const std::vector<TemporalBranching>& branchings) {
  if (out.decoder != "wdp")
    throw std::invalid_argument("output was not produced by the WDP reduction");
  if (branchings.size() != 2)
    throw std::invalid_argument("decode_paths expects two branchings");
  for (const auto& b : branchings) {
    auto res = verify_branching(b, Spanning::temporal);
    if (!res)
      throw std::invalid_argument("branchings do not verify: " + res.diagnostic);
  }
  auto dis = check_disjoint(branchings, Disjointness::edge);
  if (!dis) throw std::invalid_argument("branchings are not edge-disjoint: " + dis.diagnostic);

  size_t original = std::stoul(out.info.at("original_edges"));
  CompiledHost ch = compile(out.instance);
  detail::Workspace ws;

  auto trace = [&](const TemporalBranching& b, const std::string& from,
                   const std::string& to, Timestamp t) {
    Selection sel = make_selection(ch, b);
    detail::forward_reach(ch, sel, ws);
    int target = ch.node_of({to, t});
    int source = ch.node_of({from, t});
    std::vector<std::string> path;
    int x = target;
    while (x != source) {
      if (x < 0 || !ws.reach[x]) throw std::invalid_argument("no embedded path");
      int p = ws.parent[x];
      if (p < 0) throw std::invalid_argument("no embedded path");
      const auto& arc = ch.arcs[p];
      if (static_cast<size_t>(arc.edge) >= original)
        throw std::invalid_argument("embedded walk leaves the source digraph");
      path.push_back(out.instance.edges[arc.edge].id);
      x = arc.tail;
    }
    std::reverse(path.begin(), path.end());
    return path;
  };

  return {trace(branchings[0], out.info.at("s1"), out.info.at("t1"), 1),
          trace(branchings[1], out.info.at("s2"), out.info.at("t2"), 3)};
}

std::optional<std::vector<bool>> solve_nae3sat_bruteforce(const CnfFormula& phi) {
  require_valid(phi);
  if (phi.num_variables > 20)
    throw ScaleError("NAE brute force refuses " + std::to_string(phi.num_variables) +
                     " variables (guard: 20)");
  int n = phi.num_variables;
  for (long long mask = 0; mask < (1LL << n); ++mask) {
    bool ok = true;
    for (const auto& c : phi.clauses) {
      bool any_true = false, any_false = false;
      for (int lit : c) {
        if ((mask >> (lit - 1)) & 1)
          any_true = true;
        else
          any_false = true;
      }
      if (!any_true || !any_false) {
        ok = false;
        break;
      }
    }
    if (ok) {
      std::vector<bool> a(n);
      for (int i = 0; i < n; ++i) a[i] = (mask >> i) & 1;
      return a;
    }
  }
  return std::nullopt;
}

std::optional<std::array<std::vector<std::string>, 2>> solve_wdp_bruteforce(
    const WdpInstance& w) {
  if (w.requests.size() != 2)
    throw std::invalid_argument("solve_wdp_bruteforce expects exactly two requests");
  if (w.digraph.edges.size() > 16)
    throw ScaleError("WDP brute force refuses " +
                     std::to_string(w.digraph.edges.size()) + " edges (guard: 16)");
  for (const auto& [s, t] : w.requests)
    if (!w.digraph.has_vertex(s) || !w.digraph.has_vertex(t))
      throw std::invalid_argument("request references an undeclared vertex");

  std::map<std::string, std::vector<const EdgeDecl*>> out_edges;
  for (const auto& e : w.digraph.edges) out_edges[e.tail].push_back(&e);

  std::set<std::string> used_edges;
  std::vector<std::string> p1, p2;

  // Vertex-simple path search from `at` to `to`, skipping used edges.
  std::function<bool(const std::string&, const std::string&, std::set<std::string>&,
                     std::vector<std::string>&)>
      dfs = [&](const std::string& at, const std::string& to,
                std::set<std::string>& visited, std::vector<std::string>& path) {
        if (at == to) return true;
        for (const EdgeDecl* e : out_edges[at]) {
          if (used_edges.count(e->id) || visited.count(e->head)) continue;
          visited.insert(e->head);
          path.push_back(e->id);
          if (dfs(e->head, to, visited, path)) return true;
          path.pop_back();
          visited.erase(e->head);
        }
        return false;
      };

  // Enumerate first paths; for each, greedily look for a disjoint second one.
  std::function<bool(const std::string&, std::set<std::string>&)> enum_first =
      [&](const std::string& at, std::set<std::string>& visited) {
        if (at == w.requests[0].second) {
          for (const auto& id : p1) used_edges.insert(id);
          std::set<std::string> v2{w.requests[1].first};
          p2.clear();
          bool ok = dfs(w.requests[1].first, w.requests[1].second, v2, p2);
          for (const auto& id : p1) used_edges.erase(id);
          return ok;
        }
        for (const EdgeDecl* e : out_edges[at]) {
          if (visited.count(e->head)) continue;
          visited.insert(e->head);
          p1.push_back(e->id);
          if (enum_first(e->head, visited)) return true;
          p1.pop_back();
          visited.erase(e->head);
        }
        return false;
      };

  std::set<std::string> v1{w.requests[0].first};
  if (enum_first(w.requests[0].first, v1))
    return std::array<std::vector<std::string>, 2>{p1, p2};
  return std::nullopt;
}

}  // namespace tbr
