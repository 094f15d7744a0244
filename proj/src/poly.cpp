#include "tbr/poly.hpp"

#include <algorithm>

#include "tbr/exact.hpp"

namespace tbr {

namespace {

std::string encode_tv(const TemporalVertex& tv) {
  return tv.vertex + "@" + std::to_string(tv.time);
}

void require_roots(const TemporalDigraph& g, const std::vector<RootSet>& root_sets) {
  if (root_sets.empty()) throw std::invalid_argument("need at least one root set");
  for (const auto& rs : root_sets)
    for (const auto& r : rs.roots)
      if (!g.has_temporal_vertex(r))
        throw std::invalid_argument("root (" + r.vertex + "," +
                                    std::to_string(r.time) +
                                    ") is not a temporal vertex");
}

// A root active at the previous timestamp is also reached by waiting, which
// would give it a second walk; no temporal-spanning branching can exist.
bool has_waitable_root(const TemporalDigraph& g, const std::vector<RootSet>& root_sets) {
  for (const auto& rs : root_sets)
    for (const auto& r : rs.roots)
      if (g.active_at(r.vertex, r.time - 1)) return true;
  return false;
}

std::vector<TemporalBranching> trivial_branchings(const TemporalDigraph& g, int k) {
  std::vector<TemporalBranching> out(k);
  for (auto& b : out) b.host = &g;
  return out;
}

std::string fresh_name(std::string base, const std::set<std::string>& taken) {
  while (taken.count(base)) base += "~";
  return base;
}

}  // namespace

SnapshotDecomposition build_snapshot_decomposition(
    const TemporalDigraph& g, const std::vector<RootSet>& root_sets) {
  require_valid(g);
  require_roots(g, root_sets);
  int k = static_cast<int>(root_sets.size());

  SnapshotDecomposition out;
  Timestamp horizon = g.lifetime();
  for (Timestamp j = 0; j <= horizon; ++j) {
    SnapshotDecomposition::Snapshot snap;
    snap.time = j;
    for (const auto& v : g.vertices)
      if (g.active_at(v, j - 1) && g.active_at(v, j)) snap.common_wait_roots.insert(v);

    std::set<std::string> active;
    for (const auto& v : g.vertices)
      if (g.active_at(v, j)) active.insert(v);

    // One static row per base edge with a surviving copy arriving at j;
    // copies into common-wait vertices are forbidden everywhere.
    struct Row {
      const EdgeDecl* e;
      TimePair tp;
      bool delayed;
    };
    std::vector<Row> rows;
    for (const auto& e : g.edges) {
      if (snap.common_wait_roots.count(e.head)) continue;
      std::optional<TimePair> same, past;
      for (const TimePair& tp : g.pairs(e.id)) {
        if (tp.arr != j) continue;
        if (tp.dep < j) {
          if (!past || tp.dep < past->dep) past = tp;
        } else {
          same = tp;
        }
      }
      if (past)
        rows.push_back({&e, *past, true});
      else if (same)
        rows.push_back({&e, *same, false});
    }

    std::set<std::string> verts = active;
    std::map<std::string, std::string> past_of;
    for (const auto& row : rows) {
      if (!row.delayed) continue;
      auto it = past_of.find(row.e->tail);
      if (it == past_of.end()) {
        std::string name = fresh_name(row.e->tail + "~past", verts);
        verts.insert(name);
        past_of[row.e->tail] = name;
        snap.past_nodes.insert(name);
      }
    }

    for (const auto& v : g.vertices)
      if (active.count(v)) snap.graph.vertices.push_back(v);
    for (const auto& [orig, name] : past_of) snap.graph.vertices.push_back(name);
    std::sort(snap.graph.vertices.begin(), snap.graph.vertices.end());

    for (const auto& row : rows) {
      std::string tail = row.delayed ? past_of.at(row.e->tail) : row.e->tail;
      snap.graph.edges.push_back({row.e->id, tail, row.e->head});
      snap.chosen_copy[row.e->id] = row.tp;
    }

    for (int i = 0; i < k; ++i) {
      std::set<std::string> r = snap.common_wait_roots;
      for (const auto& root : root_sets[i].roots)
        if (root.time == j) r.insert(root.vertex);
      for (const auto& p : snap.past_nodes) r.insert(p);
      snap.root_sets.push_back(std::move(r));
    }
    out.snapshots.push_back(std::move(snap));
  }
  return out;
}

std::optional<std::vector<TemporalBranching>> solve_tedge_temporal(
    const TemporalDigraph& g, const std::vector<RootSet>& root_sets) {
  require_valid(g);
  require_roots(g, root_sets);
  int k = static_cast<int>(root_sets.size());
  if (g.temporal_vertices().empty()) return trivial_branchings(g, k);
  if (has_waitable_root(g, root_sets)) return std::nullopt;
  for (const auto& rs : root_sets)
    if (rs.roots.empty()) return std::nullopt;

  ExpandedDigraph h = expand(g, k);

  StaticDigraph hs;
  std::map<std::string, TemporalEdge> arc_of;
  for (const auto& tv : h.nodes) hs.vertices.push_back(encode_tv(tv));
  for (const auto& arc : h.temporal_arcs) {
    std::string id = "e:" + arc.edge + "@" + std::to_string(arc.from.time) + "," +
                     std::to_string(arc.to.time);
    arc_of[id] = {arc.edge, arc.from.time, arc.to.time};
    hs.edges.push_back({id, encode_tv(arc.from), encode_tv(arc.to)});
  }
  for (const auto& w : h.waiting_arcs)
    for (int c = 0; c < w.multiplicity; ++c)
      hs.edges.push_back({"w:" + w.vertex + "@" + std::to_string(w.from_time) + "#" +
                              std::to_string(c),
                          encode_tv({w.vertex, w.from_time}),
                          encode_tv({w.vertex, w.from_time + 1})});

  std::vector<std::set<std::string>> static_roots;
  for (const auto& rs : root_sets) {
    std::set<std::string> r;
    for (const auto& root : rs.roots) r.insert(encode_tv(root));
    static_roots.push_back(std::move(r));
  }

  auto packed = edmonds_construct(hs, static_roots);
  if (!packed) return std::nullopt;

  std::vector<TemporalBranching> out;
  for (int i = 0; i < k; ++i) {
    TemporalBranching b;
    b.host = &g;
    b.gamma_sub = g.gamma;
    b.roots = root_sets[i];
    for (const auto& id : (*packed)[i].edge_set) {
      auto it = arc_of.find(id);
      if (it == arc_of.end()) continue;  // waiting copy
      const TemporalEdge& te = it->second;
      const EdgeDecl* e = g.find_edge(te.edge);
      // Waitable non-roots are entered by waiting; keeping an arc into them
      // would give the head a second walk.
      TemporalVertex head{e->head, te.arr};
      if (g.active_at(e->head, te.arr - 1) && !root_sets[i].roots.count(head))
        continue;
      b.lambda_sub[te.edge].insert({te.dep, te.arr});
    }
    out.push_back(std::move(b));
  }
  return out;
}

std::optional<std::vector<TemporalBranching>> solve_edge_temporal_interval(
    const TemporalDigraph& g, const std::vector<RootSet>& root_sets) {
  require_valid(g);
  for (const auto& v : g.vertices) {
    const auto& times = g.activity(v);
    if (times.empty()) continue;
    if (*times.rbegin() - *times.begin() + 1 != static_cast<Timestamp>(times.size()))
      throw std::invalid_argument("activity of " + v +
                                  " is not one interval of consecutive integers");
  }
  require_roots(g, root_sets);
  int k = static_cast<int>(root_sets.size());
  if (g.temporal_vertices().empty()) return trivial_branchings(g, k);
  if (has_waitable_root(g, root_sets)) return std::nullopt;

  SnapshotDecomposition dec = build_snapshot_decomposition(g, root_sets);

  std::vector<TemporalBranching> out;
  for (int i = 0; i < k; ++i) {
    TemporalBranching b;
    b.host = &g;
    b.gamma_sub = g.gamma;
    b.roots = root_sets[i];
    out.push_back(std::move(b));
  }

  for (const auto& snap : dec.snapshots) {
    if (snap.graph.vertices.empty()) continue;
    for (const auto& r : snap.root_sets)
      if (r.empty()) return std::nullopt;
    auto packed = edmonds_construct(snap.graph, snap.root_sets);
    if (!packed) return std::nullopt;
    for (int i = 0; i < k; ++i)
      for (const auto& id : (*packed)[i].edge_set)
        out[i].lambda_sub[id].insert(snap.chosen_copy.at(id));
  }
  return out;
}

std::optional<std::vector<TemporalBranching>> solve(
    const TemporalDigraph& g, const std::vector<RootSet>& root_sets,
    ProblemVariant variant, Method method) {
  require_valid(g);
  require_roots(g, root_sets);
  if (method == Method::exact) return solve_exact(g, root_sets, variant);

  if (variant.spanning == Spanning::temporal &&
      variant.disjointness == Disjointness::t_edge)
    return solve_tedge_temporal(g, root_sets);

  if (variant.spanning == Spanning::temporal &&
      variant.disjointness == Disjointness::edge) {
    if (g.interval_activity()) return solve_edge_temporal_interval(g, root_sets);
    if (method == Method::poly)
      throw CapabilityError(
          "edge-disjoint temporal-spanning is polynomial only under interval "
          "activity; this instance has a gap in some activity set");
    return solve_exact(g, root_sets, variant);
  }

  if (method == Method::poly)
    throw CapabilityError("no polynomial solver for " + to_string(variant.spanning) +
                          "-spanning " + to_string(variant.disjointness) +
                          "-disjoint branchings; only t-edge-disjoint "
                          "temporal-spanning and interval-activity edge-disjoint "
                          "temporal-spanning have polynomial routines");
  return solve_exact(g, root_sets, variant);
}

}  // namespace tbr
