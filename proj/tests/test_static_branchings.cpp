#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "tbr/static_branchings.hpp"

using namespace tbr;

namespace {

StaticDigraph digraph(const std::vector<std::string>& vs,
                      const std::vector<std::pair<std::string, std::string>>& es) {
  StaticDigraph d;
  d.vertices = vs;
  int n = 0;
  for (const auto& [t, h] : es) d.edges.push_back({"e" + std::to_string(++n), t, h});
  return d;
}

// Edmonds' condition checked literally over all nonempty vertex subsets.
bool cut_oracle(const StaticDigraph& d, const std::vector<std::set<std::string>>& roots) {
  int n = static_cast<int>(d.vertices.size());
  for (int mask = 1; mask < (1 << n); ++mask) {
    std::set<std::string> s;
    for (int i = 0; i < n; ++i)
      if (mask & (1 << i)) s.insert(d.vertices[i]);
    int indeg = 0;
    for (const auto& e : d.edges)
      if (s.count(e.head) && !s.count(e.tail)) ++indeg;
    int misses = 0;
    for (const auto& r : roots) {
      bool hit = false;
      for (const auto& v : r)
        if (s.count(v)) hit = true;
      if (!hit) ++misses;
    }
    if (indeg < misses) return false;
  }
  return true;
}

StaticDigraph random_digraph(std::mt19937_64& eng, int n, int m) {
  StaticDigraph d;
  for (int i = 0; i < n; ++i) d.vertices.push_back(std::string(1, char('a' + i)));
  for (int i = 0; i < m; ++i) {
    int t = static_cast<int>(eng() % n), h = static_cast<int>(eng() % n);
    if (t == h) continue;
    d.edges.push_back({"e" + std::to_string(i), d.vertices[t], d.vertices[h]});
  }
  return d;
}

}  // namespace

TEST_CASE("max_flow counts parallel edges") {
  auto d = digraph({"r", "v"}, {{"r", "v"}, {"r", "v"}});
  CHECK(max_flow(d, {"r"}, "v") == 2);
}

TEST_CASE("max_flow is zero without a path") {
  auto d = digraph({"r", "v", "w"}, {{"v", "w"}});
  CHECK(max_flow(d, {"r"}, "w") == 0);
}

TEST_CASE("max_flow finds disjoint paths through intermediates") {
  auto d = digraph({"r", "a", "v"}, {{"r", "a"}, {"a", "v"}, {"r", "v"}});
  CHECK(max_flow(d, {"r"}, "v") == 2);
}

TEST_CASE("max_flow rejects a sink that is a source") {
  auto d = digraph({"r"}, {});
  CHECK_THROWS_AS(max_flow(d, {"r"}, "r"), std::invalid_argument);
}

TEST_CASE("edmonds_feasible on reachable single-root instances") {
  auto d = digraph({"r", "a", "b"}, {{"r", "a"}, {"a", "b"}, {"b", "r"}});
  CHECK(edmonds_feasible(d, {{"r"}}));
}

TEST_CASE("edmonds_feasible spots an undersized cut") {
  auto d = digraph({"r", "v"}, {{"r", "v"}});
  CHECK(!edmonds_feasible(d, {{"r"}, {"r"}}));
}

TEST_CASE("edmonds_feasible accepts two parallel edges for k=2") {
  auto d = digraph({"r", "v"}, {{"r", "v"}, {"r", "v"}});
  CHECK(edmonds_feasible(d, {{"r"}, {"r"}}));
  CHECK(cut_oracle(d, {{"r"}, {"r"}}));
}

TEST_CASE("edmonds_feasible rejects empty root sets") {
  auto d = digraph({"r"}, {});
  CHECK_THROWS_AS(edmonds_feasible(d, {{}}), std::invalid_argument);
}

TEST_CASE("edmonds_construct on a single branching is a reachability tree") {
  auto d = digraph({"r", "a", "b"}, {{"r", "a"}, {"a", "b"}});
  auto bs = edmonds_construct(d, {{"r"}});
  REQUIRE(bs.has_value());
  CHECK(bs->size() == 1);
  CHECK((*bs)[0].edge_set.size() == 2);
  CHECK(verify_static(d, *bs, {{"r"}}));
}

TEST_CASE("edmonds_construct splits parallel edges between branchings") {
  auto d = digraph({"r", "v"}, {{"r", "v"}, {"r", "v"}});
  auto bs = edmonds_construct(d, {{"r"}, {"r"}});
  REQUIRE(bs.has_value());
  CHECK((*bs)[0].edge_set != (*bs)[1].edge_set);
  CHECK(verify_static(d, *bs, {{"r"}, {"r"}}));
}

TEST_CASE("edmonds_construct reports infeasible instances") {
  auto d = digraph({"r", "v"}, {{"r", "v"}});
  CHECK(!edmonds_construct(d, {{"r"}, {"r"}}).has_value());
}

TEST_CASE("verify_static rejects shared edges and double in-degrees") {
  auto d = digraph({"r", "v"}, {{"r", "v"}, {"r", "v"}});
  StaticBranching b1{{"e1"}, {"r"}};
  StaticBranching shared{{"e1"}, {"r"}};
  CHECK(!verify_static(d, {b1, shared}, {{"r"}, {"r"}}));
  StaticBranching doubled{{"e1", "e2"}, {"r"}};
  CHECK(!verify_static(d, {doubled}, {{"r"}}));
  CHECK(verify_static(d, {b1}, {{"r"}}));
}

TEST_CASE("verify_static rejects cycles even with in-degree one") {
  auto d = digraph({"r", "a", "b"}, {{"a", "b"}, {"b", "a"}, {"r", "a"}});
  // a <- b and b <- a with r isolated as root: in-degrees fit, cycle does not
  StaticBranching cyc{{"e1", "e2"}, {"r"}};
  CHECK(!verify_static(d, {cyc}, {{"r"}}));
}

TEST_CASE("flow feasibility agrees with the cut oracle on random digraphs") {
  std::mt19937_64 eng(42);
  for (int iter = 0; iter < 400; ++iter) {
    int n = 2 + static_cast<int>(eng() % 5);  // up to 6 vertices
    int m = static_cast<int>(eng() % 10);
    auto d = random_digraph(eng, n, m);
    int k = 1 + static_cast<int>(eng() % 3);
    std::vector<std::set<std::string>> roots;
    for (int i = 0; i < k; ++i)
      roots.push_back({d.vertices[eng() % d.vertices.size()]});
    bool flow = edmonds_feasible(d, roots);
    CHECK(flow == cut_oracle(d, roots));

    auto built = edmonds_construct(d, roots);
    CHECK(built.has_value() == flow);
    if (built) CHECK(verify_static(d, *built, roots));
  }
}

TEST_CASE("single common root reduces to k-connectivity via max_flow") {
  std::mt19937_64 eng(7);
  for (int iter = 0; iter < 200; ++iter) {
    int n = 2 + static_cast<int>(eng() % 4);
    auto d = random_digraph(eng, n, static_cast<int>(eng() % 9));
    std::string r = d.vertices[eng() % d.vertices.size()];
    int k = 1 + static_cast<int>(eng() % 2);
    std::vector<std::set<std::string>> roots(k, {r});
    bool flow_ok = true;
    for (const auto& v : d.vertices)
      if (v != r && max_flow(d, {r}, v) < k) flow_ok = false;
    CHECK(edmonds_feasible(d, roots) == flow_ok);
  }
}

TEST_CASE("removing branching edges never increases flow values") {
  auto d = digraph({"r", "a", "b"}, {{"r", "a"}, {"r", "a"}, {"a", "b"}, {"r", "b"}});
  auto bs = edmonds_construct(d, {{"r"}});
  REQUIRE(bs.has_value());
  for (const auto& id : (*bs)[0].edge_set) {
    StaticDigraph res = d;
    res.edges.erase(std::remove_if(res.edges.begin(), res.edges.end(),
                                   [&](const EdgeDecl& e) { return e.id == id; }),
                    res.edges.end());
    for (const auto& v : d.vertices)
      if (v != "r") CHECK(max_flow(res, {"r"}, v) <= max_flow(d, {"r"}, v));
  }
}
