#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "tbr/io.hpp"
#include "tbr/reach.hpp"

using namespace tbr;
using test::make_digraph;
using test::roots;

namespace {

TemporalBranching full_branching(const TemporalDigraph& g, RootSet rs) {
  TemporalBranching b;
  b.host = &g;
  b.gamma_sub = g.gamma;
  b.lambda_sub = g.lambda;
  b.roots = std::move(rs);
  return b;
}

// Random sub-branching of a generated host, for property tests.
TemporalBranching random_branching(const TemporalDigraph& g, std::mt19937_64& eng) {
  TemporalBranching b;
  b.host = &g;
  b.gamma_sub = g.gamma;
  for (const auto& [id, ps] : g.lambda)
    for (const TimePair& tp : ps)
      if (eng() % 2) b.lambda_sub[id].insert(tp);
  auto vt = g.temporal_vertices();
  int picks = 1 + static_cast<int>(eng() % 2);
  for (int i = 0; i < picks && !vt.empty(); ++i)
    b.roots.roots.insert(vt[eng() % vt.size()]);
  return b;
}

}  // namespace

TEST_CASE("all-roots branchings reach everything") {
  auto g = make_digraph({{"a", {1, 2}}, {"b", {1}}});
  RootSet all;
  for (const auto& tv : g.temporal_vertices()) all.roots.insert(tv);
  auto b = full_branching(g, all);
  CHECK(reachable(b).size() == 3);
}

TEST_CASE("waiting extends reach across consecutive timestamps only") {
  auto g1 = make_digraph({{"a", {1, 2}}});
  auto b1 = full_branching(g1, roots({{"a", 1}}));
  CHECK(reachable(b1) == std::set<TemporalVertex>{{"a", 1}, {"a", 2}});

  auto g2 = make_digraph({{"a", {1, 3}}});
  auto b2 = full_branching(g2, roots({{"a", 1}}));
  CHECK(reachable(b2) == std::set<TemporalVertex>{{"a", 1}});
}

TEST_CASE("walk_count of an isolated root is one") {
  auto g = make_digraph({{"a", {1}}});
  auto b = full_branching(g, roots({{"a", 1}}));
  CHECK(walk_count(b, {"a", 1}) == WalkCount::one);
}

TEST_CASE("two parallel temporal arcs give many walks") {
  auto g = make_digraph({{"a", {1}}, {"b", {1}}},
                        {{"e1", "a", "b", {{1, 1}}}, {"e2", "a", "b", {{1, 1}}}});
  auto b = full_branching(g, roots({{"a", 1}}));
  CHECK(walk_count(b, {"b", 1}) == WalkCount::many);
}

TEST_CASE("unreachable targets count zero walks") {
  auto g = make_digraph({{"a", {1}}, {"b", {1}}});
  auto b = full_branching(g, roots({{"a", 1}}));
  CHECK(walk_count(b, {"b", 1}) == WalkCount::zero);
}

TEST_CASE("a reachable same-time cycle yields many walks") {
  auto g = make_digraph({{"a", {1}}, {"b", {1}}, {"c", {1}}},
                        {{"ab", "a", "b", {{1, 1}}},
                         {"bc", "b", "c", {{1, 1}}},
                         {"cb", "c", "b", {{1, 1}}}});
  auto b = full_branching(g, roots({{"a", 1}}));
  CHECK(walk_count(b, {"b", 1}) == WalkCount::many);
  CHECK(walk_count(b, {"c", 1}) == WalkCount::many);
}

TEST_CASE("figure-3 green branching walk counts") {
  auto phi = test::fig3_formula();
  auto out = reduce_nae3sat_vertex(phi);
  auto bs = test::nae_vertex_witness(out, phi, {true, true, false, false});
  CHECK(walk_count(bs[0], {"a#1", 1}) == WalkCount::one);
  CHECK(walk_count(bs[0], {"c#1", 1}) == WalkCount::one);
}

TEST_CASE("single temporal vertex verifies in both modes") {
  auto g = make_digraph({{"a", {1}}});
  auto b = full_branching(g, roots({{"a", 1}}));
  CHECK(verify_branching(b, Spanning::temporal).ok);
  CHECK(verify_branching(b, Spanning::vertex).ok);
}

TEST_CASE("figure-3 witness verifies vertex-spanning but not temporal-spanning") {
  auto phi = test::fig3_formula();
  auto out = reduce_nae3sat_vertex(phi);
  auto bs = test::nae_vertex_witness(out, phi, {true, true, false, false});
  CHECK(verify_branching(bs[0], Spanning::vertex).ok);
  CHECK(verify_branching(bs[1], Spanning::vertex).ok);
  // e.g. (F#1,1) has no walk in the green branching
  auto res = verify_branching(bs[0], Spanning::temporal);
  CHECK(!res.ok);
  CHECK(walk_count(bs[0], {"F#1", 1}) == WalkCount::zero);
  CHECK(check_disjoint(bs, Disjointness::edge).ok);
  CHECK(check_disjoint(bs, Disjointness::t_edge).ok);
}

TEST_CASE("a root reached from another root violates uniqueness") {
  auto g = make_digraph({{"a", {1}}, {"b", {1}}}, {{"ab", "a", "b", {{1, 1}}}});
  auto b = full_branching(g, roots({{"a", 1}, {"b", 1}}));
  CHECK(!verify_branching(b, Spanning::temporal).ok);
  CHECK(!verify_branching(b, Spanning::vertex).ok);
}

TEST_CASE("invalid branchings are rejected as input") {
  auto g = make_digraph({{"a", {1}}, {"b", {1}}}, {{"ab", "a", "b", {{1, 1}}}});
  TemporalBranching b;
  b.host = &g;
  b.gamma_sub["a"] = {1};
  b.lambda_sub["ab"] = {{1, 1}};  // head (b,1) not selected
  b.roots = roots({{"a", 1}});
  CHECK_THROWS_AS(verify_branching(b, Spanning::temporal), std::invalid_argument);
}

TEST_CASE("check_disjoint for a single branching is vacuous") {
  auto g = make_digraph({{"a", {1}}});
  auto b = full_branching(g, roots({{"a", 1}}));
  CHECK(check_disjoint({b}, Disjointness::edge).ok);
}

TEST_CASE("the two disjointness notions split on shared base edges") {
  auto g = make_digraph({{"a", {1}}, {"b", {1, 2}}},
                        {{"e", "a", "b", {{1, 1}, {1, 2}}}});
  TemporalBranching b1 = full_branching(g, roots({{"a", 1}}));
  b1.lambda_sub = {{"e", {{1, 1}}}};
  TemporalBranching b2 = full_branching(g, roots({{"a", 1}}));
  b2.lambda_sub = {{"e", {{1, 2}}}};
  CHECK(check_disjoint({b1, b2}, Disjointness::t_edge).ok);
  auto res = check_disjoint({b1, b2}, Disjointness::edge);
  CHECK(!res.ok);
  CHECK(res.diagnostic.find("e") != std::string::npos);
}

TEST_CASE("check_disjoint rejects mismatched hosts") {
  auto g1 = make_digraph({{"a", {1}}});
  auto g2 = make_digraph({{"a", {1}}});
  auto b1 = full_branching(g1, roots({{"a", 1}}));
  auto b2 = full_branching(g2, roots({{"a", 1}}));
  CHECK_THROWS_AS(check_disjoint({b1, b2}, Disjointness::edge), std::invalid_argument);
}

TEST_CASE("arrival events separate roots from arc arrivals") {
  auto g = make_digraph({{"a", {1}}, {"b", {1}}}, {{"ab", "a", "b", {{1, 1}}}});
  auto b = full_branching(g, roots({{"a", 1}}));
  auto events = arrival_events(b);
  REQUIRE(events.size() == 2);
  CHECK(events[0].target == TemporalVertex{"a", 1});
  CHECK(events[0].kind == ArrivalEvent::Kind::root);
  CHECK(events[1].target == TemporalVertex{"b", 1});
  CHECK(events[1].kind == ArrivalEvent::Kind::arrival);
}

TEST_CASE("temporal uniqueness is tight under added arrivals") {
  // verified branching + any extra arc into an already-arrived vertex fails
  auto g = make_digraph({{"a", {1}}, {"b", {1}}, {"c", {1}}},
                        {{"ab", "a", "b", {{1, 1}}},
                         {"cb", "c", "b", {{1, 1}}}});
  TemporalBranching b = full_branching(g, roots({{"a", 1}, {"c", 1}}));
  b.lambda_sub = {{"ab", {{1, 1}}}};
  REQUIRE(verify_branching(b, Spanning::temporal).ok);
  b.lambda_sub["cb"] = {{1, 1}};
  CHECK(!verify_branching(b, Spanning::temporal).ok);
}

TEST_CASE("reachable equals the nonzero walk-count set") {
  std::mt19937_64 eng(11);
  for (int iter = 0; iter < 200; ++iter) {
    GenOptions opts;
    opts.vertices = 3;
    opts.lifetime = 3;
    opts.edge_prob = 0.4;
    opts.seed = 1000 + iter;
    auto pi = generate_instance(opts);
    auto b = random_branching(pi.digraph, eng);
    auto reach = reachable(b);
    for (const auto& tv : pi.digraph.temporal_vertices()) {
      bool nonzero = walk_count(b, tv) != WalkCount::zero;
      CHECK(nonzero == (reach.count(tv) > 0));
    }
  }
}

TEST_CASE("edge-disjoint implies t-edge-disjoint") {
  std::mt19937_64 eng(13);
  for (int iter = 0; iter < 200; ++iter) {
    GenOptions opts;
    opts.vertices = 3;
    opts.lifetime = 3;
    opts.edge_prob = 0.5;
    opts.seed = 2000 + iter;
    auto pi = generate_instance(opts);
    auto b1 = random_branching(pi.digraph, eng);
    auto b2 = random_branching(pi.digraph, eng);
    if (check_disjoint({b1, b2}, Disjointness::edge).ok)
      CHECK(check_disjoint({b1, b2}, Disjointness::t_edge).ok);
  }
}

TEST_CASE("unique walks coincide with the out-forest characterization") {
  // walk_count == one on the whole reachable portion iff every reachable node
  // is a root with reachable in-degree 0 or a non-root with in-degree 1, and
  // no reachable cycle exists
  std::mt19937_64 eng(17);
  int forests = 0;
  for (int iter = 0; iter < 1000; ++iter) {
    GenOptions opts;
    opts.vertices = 3;
    opts.lifetime = 3;
    opts.edge_prob = 0.45;
    opts.seed = 3000 + iter;
    auto pi = generate_instance(opts);
    auto b = random_branching(pi.digraph, eng);

    auto reach = reachable(b);
    bool all_one = true;
    bool any_many = false;
    for (const auto& tv : reach) {
      auto wc = walk_count(b, tv);
      if (wc != WalkCount::one) all_one = false;
      if (wc == WalkCount::many) any_many = true;
    }

    // independent in-degree count over the reachable portion
    std::map<TemporalVertex, int> indeg;
    for (const auto& tv : reach) indeg[tv] = 0;
    for (const auto& [id, ps] : b.lambda_sub) {
      const EdgeDecl* e = pi.digraph.find_edge(id);
      for (const TimePair& tp : ps)
        if (reach.count({e->tail, tp.dep}) && reach.count({e->head, tp.arr}))
          ++indeg[{e->head, tp.arr}];
    }
    for (const auto& [v, times] : b.gamma_sub)
      for (Timestamp t : times)
        if (times.count(t + 1) && reach.count({v, t}) && reach.count({v, t + 1}))
          ++indeg[{v, t + 1}];
    bool degrees_fit = true;
    for (const auto& tv : reach) {
      int want = b.roots.roots.count(tv) ? 0 : 1;
      if (indeg[tv] != want) degrees_fit = false;
    }

    if (all_one) {
      CHECK(degrees_fit);
      ++forests;
    }
    if (degrees_fit) CHECK(all_one == !any_many);
  }
  CHECK(forests > 0);
}
