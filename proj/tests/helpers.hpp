#pragma once

#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "tbr/reach.hpp"
#include "tbr/reductions.hpp"

namespace tbr::test {

struct EdgeSpec {
  std::string id, tail, head;
  std::vector<std::pair<int, int>> pairs;
};

inline TemporalDigraph make_digraph(
    const std::vector<std::pair<std::string, std::vector<int>>>& verts,
    const std::vector<EdgeSpec>& edges = {}) {
  TemporalDigraph g;
  for (const auto& [v, times] : verts) {
    g.vertices.push_back(v);
    for (int t : times) g.gamma[v].insert(t);
  }
  for (const auto& e : edges) {
    g.edges.push_back({e.id, e.tail, e.head});
    for (auto [d, a] : e.pairs) g.lambda[e.id].insert({d, a});
  }
  return g;
}

inline RootSet roots(std::initializer_list<std::pair<std::string, int>> rs) {
  RootSet out;
  for (const auto& [v, t] : rs) out.roots.insert({v, t});
  return out;
}

// Forward construction of the vertex-spanning reduction's two branchings from
// a NAE assignment, following the green/red scheme: branching 1 hangs off g,
// branching 2 off r, clause vertices are entered through the first true
// (resp. false) literal, and the missed T/F vertices are picked up in the
// second snapshot.
inline std::vector<TemporalBranching> nae_vertex_witness(
    const ReductionOutput& out, const CnfFormula& phi,
    const std::vector<bool>& assignment) {
  std::vector<TemporalBranching> bs(2);
  auto xv = [](int i) { return "x#" + std::to_string(i); };
  auto tv = [](int i) { return "T#" + std::to_string(i); };
  auto fv = [](int i) { return "F#" + std::to_string(i); };
  auto av = [](int i) { return "a#" + std::to_string(i); };
  auto cv = [](int j) { return "c#" + std::to_string(j); };

  for (int b = 0; b < 2; ++b) {
    bs[b].host = &out.instance;
    bs[b].gamma_sub = out.instance.gamma;
    bs[b].roots = out.root_sets[b];
  }
  auto take = [&](int b, const std::string& tail, const std::string& head, int t) {
    bs[b].lambda_sub[tail + ">" + head].insert({t, t});
  };
  int n = phi.num_variables;
  for (int i = 1; i <= n; ++i) {
    bool tru = assignment[i - 1];
    take(0, "g", xv(i), 1);
    take(1, "r", xv(i), 1);
    take(0, xv(i), tru ? tv(i) : fv(i), 1);
    take(1, xv(i), tru ? fv(i) : tv(i), 1);
    take(0, tru ? tv(i) : fv(i), av(i), 1);
    take(1, tru ? fv(i) : tv(i), av(i), 1);
    take(0, "g", tru ? fv(i) : tv(i), 2);
    take(1, "r", tru ? tv(i) : fv(i), 2);
  }
  for (size_t j = 1; j <= phi.clauses.size(); ++j) {
    const auto& c = phi.clauses[j - 1];
    for (int lit : c)
      if (assignment[lit - 1]) {
        take(0, tv(lit), cv(static_cast<int>(j)), 1);
        break;
      }
    for (int lit : c)
      if (!assignment[lit - 1]) {
        take(1, tv(lit), cv(static_cast<int>(j)), 1);
        break;
      }
  }
  return bs;
}

inline CnfFormula fig3_formula() {
  CnfFormula phi;
  phi.num_variables = 4;
  phi.clauses = {{1, 2, 3}, {2, 3, 4}};
  return phi;
}

}  // namespace tbr::test
