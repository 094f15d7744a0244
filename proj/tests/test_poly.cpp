#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "tbr/exact.hpp"
#include "tbr/io.hpp"
#include "tbr/poly.hpp"

using namespace tbr;
using test::make_digraph;
using test::roots;

namespace {

ParsedInstance small_instance(std::uint64_t seed, bool interval, int vertices = 3,
                              int lifetime = 3, double prob = 0.35) {
  GenOptions opts;
  opts.vertices = vertices;
  opts.lifetime = lifetime;
  opts.edge_prob = prob;
  opts.seed = seed;
  opts.interval_activity = interval;
  return generate_instance(opts);
}

bool outputs_verify(const std::vector<TemporalBranching>& bs, Disjointness d) {
  for (const auto& b : bs)
    if (!verify_branching(b, Spanning::temporal)) return false;
  return check_disjoint(bs, d).ok;
}

}  // namespace

TEST_CASE("a temporal path rooted at its start is a feasible k=1 instance") {
  auto g = make_digraph({{"a", {1}}, {"b", {1, 2}}, {"c", {2}}},
                        {{"ab", "a", "b", {{1, 1}}}, {"bc", "b", "c", {{2, 2}}}});
  auto res = solve_tedge_temporal(g, {roots({{"a", 1}})});
  REQUIRE(res.has_value());
  CHECK(outputs_verify(*res, Disjointness::t_edge));
  CHECK((*res)[0].lambda_sub.size() == 2);
}

TEST_CASE("two parallel same-time edges feed two branchings") {
  auto g = make_digraph({{"a", {1}}, {"b", {1, 2}}},
                        {{"e1", "a", "b", {{1, 1}}}, {"e2", "a", "b", {{1, 1}}}});
  auto rs = std::vector<RootSet>{roots({{"a", 1}}), roots({{"a", 1}})};
  auto res = solve_tedge_temporal(g, rs);
  REQUIRE(res.has_value());
  CHECK(outputs_verify(*res, Disjointness::t_edge));
  // each branching arrives at (b,1) on its own copy and waits to (b,2)
  CHECK((*res)[0].lambda_sub.begin()->second.size() == 1);
  auto oracle = oracle_enumerate(g, rs, {Spanning::temporal, Disjointness::t_edge});
  CHECK(oracle.has_value());
}

TEST_CASE("one edge with two copies cannot serve two branchings") {
  auto g = make_digraph({{"a", {1}}, {"b", {1, 2}}},
                        {{"e", "a", "b", {{1, 1}, {1, 2}}}});
  auto rs = std::vector<RootSet>{roots({{"a", 1}}), roots({{"a", 1}})};
  CHECK(!solve_tedge_temporal(g, rs).has_value());
  CHECK(!oracle_enumerate(g, rs, {Spanning::temporal, Disjointness::t_edge}).has_value());
}

TEST_CASE("a waitable root makes temporal spanning infeasible") {
  auto g = make_digraph({{"a", {1, 2}}});
  CHECK(!solve_tedge_temporal(g, {roots({{"a", 1}, {"a", 2}})}).has_value());
  CHECK(solve_tedge_temporal(g, {roots({{"a", 1}})}).has_value());
}

TEST_CASE("tedge feasibility matches the waitable-root-guarded expansion condition") {
  for (std::uint64_t seed = 1; seed <= 150; ++seed) {
    auto pi = small_instance(seed, false);
    const auto& g = pi.digraph;
    bool solver = solve_tedge_temporal(g, pi.root_sets).has_value();

    bool waitable_root = false;
    for (const auto& rs : pi.root_sets)
      for (const auto& r : rs.roots)
        if (g.active_at(r.vertex, r.time - 1)) waitable_root = true;
    ExpandedDigraph h = expand(g, static_cast<int>(pi.root_sets.size()));
    StaticDigraph hs;
    for (const auto& tv : h.nodes)
      hs.vertices.push_back(tv.vertex + "@" + std::to_string(tv.time));
    int eid = 0;
    for (const auto& arc : h.temporal_arcs)
      hs.edges.push_back({"e" + std::to_string(eid++),
                          arc.from.vertex + "@" + std::to_string(arc.from.time),
                          arc.to.vertex + "@" + std::to_string(arc.to.time)});
    for (const auto& w : h.waiting_arcs)
      for (int c = 0; c < w.multiplicity; ++c)
        hs.edges.push_back({"w" + std::to_string(eid++),
                            w.vertex + "@" + std::to_string(w.from_time),
                            w.vertex + "@" + std::to_string(w.from_time + 1)});
    std::vector<std::set<std::string>> sroots;
    bool empty_roots = false;
    for (const auto& rs : pi.root_sets) {
      std::set<std::string> r;
      for (const auto& root : rs.roots)
        r.insert(root.vertex + "@" + std::to_string(root.time));
      if (r.empty()) empty_roots = true;
      sroots.push_back(std::move(r));
    }
    bool expansion =
        !empty_roots && !waitable_root && edmonds_feasible(hs, sroots);
    CHECK(solver == expansion);
  }
}

TEST_CASE("eternal static-like digraphs solve through the interval solver") {
  auto g = make_digraph({{"r", {0, 1}}, {"a", {0, 1}}, {"b", {0, 1}}},
                        {{"ra", "r", "a", {{0, 0}, {1, 1}}},
                         {"ab", "a", "b", {{0, 0}, {1, 1}}}});
  auto res = solve_edge_temporal_interval(g, {roots({{"r", 0}})});
  REQUIRE(res.has_value());
  CHECK(outputs_verify(*res, Disjointness::edge));
}

TEST_CASE("interval solver requires interval activity") {
  auto g = make_digraph({{"a", {1, 3}}});
  CHECK_THROWS_WITH_AS(solve_edge_temporal_interval(g, {roots({{"a", 1}})}),
                       doctest::Contains("a"), std::invalid_argument);
}

TEST_CASE("a snapshot failing the cut condition makes the instance infeasible") {
  // both branchings need to reach b at time 1 over a single edge
  auto g = make_digraph({{"a", {1}}, {"b", {1}}}, {{"ab", "a", "b", {{1, 1}}}});
  auto rs = std::vector<RootSet>{roots({{"a", 1}}), roots({{"a", 1}})};
  CHECK(!solve_edge_temporal_interval(g, rs).has_value());
}

TEST_CASE("interval solver verdicts match the oracle on random instances") {
  int feasible = 0;
  for (std::uint64_t seed = 1; seed <= 120; ++seed) {
    auto pi = small_instance(seed, true);
    if (pi.digraph.temporal_edges().size() > 10) continue;
    auto res = solve_edge_temporal_interval(pi.digraph, pi.root_sets);
    auto oracle = oracle_enumerate(pi.digraph, pi.root_sets,
                                   {Spanning::temporal, Disjointness::edge});
    REQUIRE(res.has_value() == oracle.has_value());
    if (res) {
      ++feasible;
      CHECK(outputs_verify(*res, Disjointness::edge));
    }
  }
  CHECK(feasible > 0);
}

TEST_CASE("lifetime-2 instances are always in the interval solver's reach") {
  int feasible = 0;
  for (std::uint64_t seed = 200; seed <= 320; ++seed) {
    auto pi = small_instance(seed, true, 3, 2, 0.5);
    auto res = solve_edge_temporal_interval(pi.digraph, pi.root_sets);
    auto oracle = oracle_enumerate(pi.digraph, pi.root_sets,
                                   {Spanning::temporal, Disjointness::edge});
    REQUIRE(res.has_value() == oracle.has_value());
    if (res) ++feasible;
  }
  CHECK(feasible > 0);
}

TEST_CASE("adding a parallel temporal edge keeps interval instances feasible") {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    auto pi = small_instance(seed, true);
    if (pi.digraph.edges.empty()) continue;
    auto before = solve_edge_temporal_interval(pi.digraph, pi.root_sets);
    if (!before) continue;
    TemporalDigraph g = pi.digraph;
    const auto& first = g.edges.front();
    g.edges.push_back({first.id + "+copy", first.tail, first.head});
    g.lambda[first.id + "+copy"] = g.lambda[first.id];
    CHECK(solve_edge_temporal_interval(g, pi.root_sets).has_value());
  }
}

TEST_CASE("pruned snapshots never lose feasibility against unpruned ones") {
  for (std::uint64_t seed = 1; seed <= 120; ++seed) {
    auto pi = small_instance(seed, true, 4, 4);
    const auto& g = pi.digraph;
    auto dec = build_snapshot_decomposition(g, pi.root_sets);
    for (const auto& snap : dec.snapshots) {
      if (snap.graph.vertices.empty()) continue;
      bool empty_root = false;
      for (const auto& r : snap.root_sets)
        if (r.empty()) empty_root = true;
      if (empty_root) continue;

      // unpruned variant: every arrival row, same roots and past handling
      StaticDigraph full = snap.graph;
      std::set<std::string> present;
      for (const auto& e : full.edges) present.insert(e.id);
      for (const auto& e : g.edges) {
        if (present.count(e.id)) continue;
        bool arrives = false;
        for (const TimePair& tp : g.pairs(e.id))
          if (tp.arr == snap.time) arrives = true;
        if (!arrives) continue;
        if (!full.has_vertex(e.tail)) full.vertices.push_back(e.tail);
        if (!full.has_vertex(e.head)) full.vertices.push_back(e.head);
        full.edges.push_back(e);
      }
      auto lifted_roots = snap.root_sets;
      for (auto& r : lifted_roots)
        for (const auto& v : full.vertices)
          if (!snap.graph.has_vertex(v) && snap.common_wait_roots.count(v) == 0 &&
              !g.active_at(v, snap.time))
            r.insert(v);  // tails outside the snapshot act as free sources
      if (edmonds_feasible(full, lifted_roots))
        CHECK(edmonds_feasible(snap.graph, snap.root_sets));
    }
  }
}

TEST_CASE("snapshot decomposition root sets follow their definition") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    auto pi = small_instance(seed, true, 4, 3);
    auto dec = build_snapshot_decomposition(pi.digraph, pi.root_sets);
    for (const auto& snap : dec.snapshots) {
      for (size_t i = 0; i < snap.root_sets.size(); ++i) {
        std::set<std::string> expect = snap.common_wait_roots;
        for (const auto& r : pi.root_sets[i].roots)
          if (r.time == snap.time) expect.insert(r.vertex);
        for (const auto& p : snap.past_nodes) expect.insert(p);
        CHECK(snap.root_sets[i] == expect);
      }
    }
  }
}

TEST_CASE("delayed copies ride on past sources") {
  auto g = make_digraph({{"a", {1}}, {"c", {2}}}, {{"ac", "a", "c", {{1, 2}}}});
  auto res = solve_edge_temporal_interval(g, {roots({{"a", 1}})});
  REQUIRE(res.has_value());
  CHECK(outputs_verify(*res, Disjointness::edge));

  auto dec = build_snapshot_decomposition(g, {roots({{"a", 1}})});
  REQUIRE(dec.snapshots.size() == 3);
  CHECK(dec.snapshots[2].past_nodes.size() == 1);
}

TEST_CASE("solve routes variants per the capability matrix") {
  auto g = make_digraph({{"a", {1}}, {"b", {1}}}, {{"ab", "a", "b", {{1, 1}}}});
  std::vector<RootSet> rs{roots({{"a", 1}})};

  CHECK(solve(g, rs, {Spanning::temporal, Disjointness::t_edge}).has_value());
  CHECK(solve(g, rs, {Spanning::vertex, Disjointness::edge}).has_value());
  CHECK_THROWS_AS(
      solve(g, rs, {Spanning::vertex, Disjointness::t_edge}, Method::poly),
      CapabilityError);

  auto gap = make_digraph({{"a", {1, 3}}, {"b", {1}}}, {{"ab", "a", "b", {{1, 1}}}});
  std::vector<RootSet> gap_roots{roots({{"a", 1}, {"a", 3}})};
  CHECK_THROWS_AS(
      solve(gap, gap_roots, {Spanning::temporal, Disjointness::edge}, Method::poly),
      CapabilityError);
  // auto mode falls back to the exact solver on the same input
  CHECK(solve(gap, gap_roots, {Spanning::temporal, Disjointness::edge}).has_value());
}

TEST_CASE("poly solver outputs always verify") {
  for (std::uint64_t seed = 400; seed <= 480; ++seed) {
    auto pi = small_instance(seed, false, 4, 3, 0.45);
    auto t = solve_tedge_temporal(pi.digraph, pi.root_sets);
    if (t) CHECK(outputs_verify(*t, Disjointness::t_edge));
    if (pi.digraph.interval_activity()) {
      auto e = solve_edge_temporal_interval(pi.digraph, pi.root_sets);
      if (e) CHECK(outputs_verify(*e, Disjointness::edge));
    }
  }
}
