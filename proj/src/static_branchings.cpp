#include "tbr/static_branchings.hpp"

#include <algorithm>
#include <map>
#include <queue>

namespace tbr {

namespace {

// Index-based view of a StaticDigraph for the flow routines.
struct Compiled {
  std::vector<std::string> names;
  std::map<std::string, int> index;
  // arcs as (tail, head) index pairs; position i corresponds to d.edges[i]
  std::vector<std::pair<int, int>> arcs;

  explicit Compiled(const StaticDigraph& d) {
    names = d.vertices;
    for (int i = 0; i < static_cast<int>(names.size()); ++i) index[names[i]] = i;
    for (const auto& e : d.edges) {
      auto t = index.find(e.tail);
      auto h = index.find(e.head);
      if (t == index.end() || h == index.end())
        throw std::invalid_argument("edge " + e.id + " references undeclared vertex");
      arcs.push_back({t->second, h->second});
    }
  }

  int at(const std::string& v) const {
    auto it = index.find(v);
    if (it == index.end()) throw std::invalid_argument("unknown vertex " + v);
    return it->second;
  }
};

// Unit-capacity max flow from a source set to one sink, BFS augmentation.
// `alive` masks deleted arcs; `cap` ends holding the residual per arc, so
// callers can read off which arcs carry flow.
int flow_value(const Compiled& c, const std::vector<char>& alive,
               const std::vector<char>& is_source, int sink, int stop_at) {
  int n = static_cast<int>(c.names.size());
  int m = static_cast<int>(c.arcs.size());
  std::vector<char> fwd(m, 1);  // 1 = forward capacity available
  std::vector<std::vector<int>> out(n), in(n);
  for (int i = 0; i < m; ++i) {
    if (!alive[i]) continue;
    out[c.arcs[i].first].push_back(i);
    in[c.arcs[i].second].push_back(i);
  }

  int total = 0;
  std::vector<int> via(n);
  std::vector<char> seen(n);
  while (total < stop_at) {
    std::fill(seen.begin(), seen.end(), 0);
    std::queue<int> q;
    for (int v = 0; v < n; ++v)
      if (is_source[v]) {
        seen[v] = 1;
        via[v] = -1;
        q.push(v);
      }
    bool reached = false;
    while (!q.empty() && !reached) {
      int v = q.front();
      q.pop();
      for (int i : out[v]) {
        int h = c.arcs[i].second;
        if (fwd[i] && !seen[h]) {
          seen[h] = 1;
          via[h] = i;
          if (h == sink) { reached = true; break; }
          q.push(h);
        }
      }
      if (reached) break;
      for (int i : in[v]) {
        int t = c.arcs[i].first;
        if (!fwd[i] && !seen[t]) {  // residual reverse arc
          seen[t] = 1;
          via[t] = ~i;
          q.push(t);
        }
      }
    }
    if (!reached) break;
    int v = sink;
    while (via[v] != -1) {
      int code = via[v];
      if (code >= 0) {
        fwd[code] = 0;
        v = c.arcs[code].first;
      } else {
        fwd[~code] = 1;
        v = c.arcs[~code].second;
      }
      if (via[v] == -1 && !is_source[v]) break;  // unreachable; guards bad state
    }
    ++total;
  }
  return total;
}

bool feasible_compiled(const Compiled& c, const std::vector<char>& alive,
                       const std::vector<std::set<int>>& roots) {
  int k = static_cast<int>(roots.size());
  int n = static_cast<int>(c.names.size());
  for (const auto& r : roots)
    if (r.empty()) throw std::invalid_argument("empty root set");
  for (int mask = 1; mask < (1 << k); ++mask) {
    std::vector<char> src(n, 0);
    int need = 0;
    for (int i = 0; i < k; ++i)
      if (mask & (1 << i)) {
        ++need;
        for (int v : roots[i]) src[v] = 1;
      }
    for (int v = 0; v < n; ++v) {
      if (src[v]) continue;
      if (flow_value(c, alive, src, v, need) < need) return false;
    }
  }
  return true;
}

std::vector<std::set<int>> compile_roots(
    const Compiled& c, const std::vector<std::set<std::string>>& root_sets) {
  std::vector<std::set<int>> out;
  for (const auto& rs : root_sets) {
    std::set<int> r;
    for (const auto& v : rs) r.insert(c.at(v));
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

int max_flow(const StaticDigraph& d, const std::set<std::string>& sources,
             const std::string& sink) {
  if (sources.count(sink))
    throw std::invalid_argument("sink " + sink + " is also a source");
  Compiled c(d);
  std::vector<char> alive(c.arcs.size(), 1);
  std::vector<char> src(c.names.size(), 0);
  for (const auto& s : sources) src[c.at(s)] = 1;
  int t = c.at(sink);
  return flow_value(c, alive, src, t, static_cast<int>(c.arcs.size()) + 1);
}

bool edmonds_feasible(const StaticDigraph& d,
                      const std::vector<std::set<std::string>>& root_sets) {
  if (root_sets.empty()) throw std::invalid_argument("need at least one root set");
  Compiled c(d);
  std::vector<char> alive(c.arcs.size(), 1);
  return feasible_compiled(c, alive, compile_roots(c, root_sets));
}

std::optional<std::vector<StaticBranching>> edmonds_construct(
    const StaticDigraph& d, const std::vector<std::set<std::string>>& root_sets) {
  if (root_sets.empty()) throw std::invalid_argument("need at least one root set");
  Compiled c(d);
  int n = static_cast<int>(c.names.size());
  int k = static_cast<int>(root_sets.size());
  std::vector<char> alive(c.arcs.size(), 1);
  auto roots = compile_roots(c, root_sets);
  if (!feasible_compiled(c, alive, roots)) return std::nullopt;

  // Deterministic candidate order.
  std::vector<int> order(c.arcs.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const auto& ea = d.edges[a];
    const auto& eb = d.edges[b];
    return std::tie(ea.tail, ea.head, ea.id) < std::tie(eb.tail, eb.head, eb.id);
  });

  std::vector<StaticBranching> result;
  for (int i = 0; i < k; ++i) {
    StaticBranching b;
    for (int v : roots[i]) b.root_set.insert(c.names[v]);

    std::set<int> covered = roots[i];
    std::vector<std::set<int>> state;
    state.push_back(covered);
    for (int j = i + 1; j < k; ++j) state.push_back(roots[j]);

    while (static_cast<int>(covered.size()) < n) {
      bool grown = false;
      for (int a : order) {
        if (!alive[a]) continue;
        auto [t, h] = c.arcs[a];
        if (!covered.count(t) || covered.count(h)) continue;
        alive[a] = 0;
        state[0].insert(h);
        if (feasible_compiled(c, alive, state)) {
          covered.insert(h);
          b.edge_set.insert(d.edges[a].id);
          grown = true;
          break;
        }
        alive[a] = 1;
        state[0].erase(h);
      }
      if (!grown) return std::nullopt;  // cannot happen on feasible input
    }
    result.push_back(std::move(b));
  }
  return result;
}

bool verify_static(const StaticDigraph& d,
                   const std::vector<StaticBranching>& branchings,
                   const std::vector<std::set<std::string>>& root_sets) {
  if (branchings.size() != root_sets.size()) return false;
  std::map<std::string, const EdgeDecl*> by_id;
  for (const auto& e : d.edges) by_id[e.id] = &e;

  std::set<std::string> used;
  for (size_t i = 0; i < branchings.size(); ++i) {
    const auto& b = branchings[i];
    if (b.root_set != root_sets[i]) return false;
    for (const auto& r : b.root_set)
      if (!d.has_vertex(r)) return false;

    std::map<std::string, int> indeg;
    for (const auto& v : d.vertices) indeg[v] = 0;
    for (const auto& id : b.edge_set) {
      auto it = by_id.find(id);
      if (it == by_id.end()) return false;
      if (!used.insert(id).second) return false;  // shared across branchings
      ++indeg[it->second->head];
    }
    for (const auto& v : d.vertices) {
      if (b.root_set.count(v)) {
        if (indeg[v] != 0) return false;
      } else if (indeg[v] != 1) {
        return false;
      }
    }
    // Acyclicity: peel vertices of in-degree zero.
    std::map<std::string, std::vector<std::string>> heads;
    for (const auto& id : b.edge_set) heads[by_id[id]->tail].push_back(by_id[id]->head);
    std::queue<std::string> q;
    for (const auto& [v, deg] : indeg)
      if (deg == 0) q.push(v);
    size_t peeled = 0;
    auto deg = indeg;
    while (!q.empty()) {
      auto v = q.front();
      q.pop();
      ++peeled;
      for (const auto& h : heads[v])
        if (--deg[h] == 0) q.push(h);
    }
    if (peeled != d.vertices.size()) return false;
  }
  return true;
}

}  // namespace tbr
