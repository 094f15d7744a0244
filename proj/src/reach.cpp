#include "tbr/reach.hpp"

#include <algorithm>
#include <sstream>

namespace tbr {

namespace {

std::string tv_name(const TemporalVertex& tv) {
  std::ostringstream os;
  os << "(" << tv.vertex << "," << tv.time << ")";
  return os.str();
}

void require_subdigraph(const TemporalBranching& b) {
  if (!b.host) throw std::invalid_argument("branching has no host");
  const TemporalDigraph& g = *b.host;
  for (const auto& [v, times] : b.gamma_sub) {
    const auto& host_times = g.activity(v);
    for (Timestamp t : times)
      if (!host_times.count(t))
        throw std::invalid_argument("gamma_sub of " + v + " is not a subset of the host activity");
  }
  for (const auto& [id, ps] : b.lambda_sub) {
    const EdgeDecl* e = g.find_edge(id);
    if (!e) throw std::invalid_argument("lambda_sub references unknown edge " + id);
    const auto& host_pairs = g.pairs(id);
    for (const TimePair& tp : ps) {
      if (!host_pairs.count(tp))
        throw std::invalid_argument("lambda_sub of " + id + " is not a subset of the host pairs");
      auto tail_it = b.gamma_sub.find(e->tail);
      auto head_it = b.gamma_sub.find(e->head);
      if (tail_it == b.gamma_sub.end() || !tail_it->second.count(tp.dep) ||
          head_it == b.gamma_sub.end() || !head_it->second.count(tp.arr))
        throw std::invalid_argument("selected pair of " + id + " lacks selected endpoints");
    }
  }
  for (const auto& r : b.roots.roots) {
    auto it = b.gamma_sub.find(r.vertex);
    if (it == b.gamma_sub.end() || !it->second.count(r.time))
      throw std::invalid_argument("root " + tv_name(r) + " is not a temporal vertex of the branching");
  }
}

}  // namespace

int CompiledHost::node_of(const TemporalVertex& tv) const {
  auto it = node_id.find(tv);
  return it == node_id.end() ? -1 : it->second;
}

CompiledHost compile(const TemporalDigraph& g) {
  CompiledHost ch;
  ch.host = &g;
  for (size_t i = 0; i < g.vertices.size(); ++i)
    ch.base_index[g.vertices[i]] = static_cast<int>(i);
  for (const auto& v : g.vertices)
    for (Timestamp t : g.activity(v)) ch.nodes.push_back({v, t});
  std::sort(ch.nodes.begin(), ch.nodes.end());
  for (size_t i = 0; i < ch.nodes.size(); ++i)
    ch.node_id[ch.nodes[i]] = static_cast<int>(i);

  int n = static_cast<int>(ch.nodes.size());
  ch.wait_prev.assign(n, -1);
  ch.wait_next.assign(n, -1);
  ch.node_base.assign(n, 0);
  ch.appearances.assign(g.vertices.size(), {});
  for (int i = 0; i < n; ++i) {
    const auto& tv = ch.nodes[i];
    ch.node_base[i] = ch.base_index.at(tv.vertex);
    ch.appearances[ch.node_base[i]].push_back(i);
    int prev = ch.node_of({tv.vertex, tv.time - 1});
    if (prev >= 0) {
      ch.wait_prev[i] = prev;
      ch.wait_next[prev] = i;
    }
  }

  for (size_t e = 0; e < g.edges.size(); ++e) {
    const auto& decl = g.edges[e];
    for (const TimePair& tp : g.pairs(decl.id)) {
      CompiledHost::Arc a;
      a.edge = static_cast<int>(e);
      a.tp = tp;
      a.tail = ch.node_of({decl.tail, tp.dep});
      a.head = ch.node_of({decl.head, tp.arr});
      ch.arcs.push_back(a);
    }
  }
  std::sort(ch.arcs.begin(), ch.arcs.end(),
            [&](const CompiledHost::Arc& a, const CompiledHost::Arc& b) {
              return std::tie(a.tp.arr, a.head, g.edges[a.edge].id, a.tp.dep) <
                     std::tie(b.tp.arr, b.head, g.edges[b.edge].id, b.tp.dep);
            });
  ch.arcs_in.assign(n, {});
  ch.arcs_out.assign(n, {});
  for (size_t i = 0; i < ch.arcs.size(); ++i) {
    ch.arcs_in[ch.arcs[i].head].push_back(static_cast<int>(i));
    ch.arcs_out[ch.arcs[i].tail].push_back(static_cast<int>(i));
  }
  return ch;
}

Selection make_selection(const CompiledHost& ch, const TemporalBranching& b) {
  Selection sel;
  sel.arc_sel.assign(ch.arcs.size(), 0);
  sel.node_sel.assign(ch.nodes.size(), 0);
  sel.root.assign(ch.nodes.size(), 0);
  for (const auto& [v, times] : b.gamma_sub)
    for (Timestamp t : times) {
      int x = ch.node_of({v, t});
      if (x >= 0) sel.node_sel[x] = 1;
    }
  for (size_t i = 0; i < ch.arcs.size(); ++i) {
    const auto& a = ch.arcs[i];
    auto it = b.lambda_sub.find(ch.host->edges[a.edge].id);
    if (it != b.lambda_sub.end() && it->second.count(a.tp)) sel.arc_sel[i] = 1;
  }
  for (const auto& r : b.roots.roots) {
    int x = ch.node_of(r);
    if (x >= 0) sel.root[x] = 1;
  }
  return sel;
}

namespace detail {

namespace {

// Waiting arc into x exists when both (v,t-1) and (v,t) are selected.
inline bool wait_in(const CompiledHost& ch, const Selection& sel, int x) {
  int p = ch.wait_prev[x];
  return p >= 0 && sel.node_sel[p] && sel.node_sel[x];
}

}  // namespace

void forward_reach(const CompiledHost& ch, const Selection& sel, Workspace& ws) {
  int n = static_cast<int>(ch.nodes.size());
  ws.reach.assign(n, 0);
  ws.parent.assign(n, -1);
  ws.queue.clear();
  for (int x = 0; x < n; ++x)
    if (sel.root[x] && sel.node_sel[x]) {
      ws.reach[x] = 1;
      ws.parent[x] = -2;
      ws.queue.push_back(x);
    }
  for (size_t qi = 0; qi < ws.queue.size(); ++qi) {
    int x = ws.queue[qi];
    for (int a : ch.arcs_out[x]) {
      if (!sel.arc_sel[a]) continue;
      int h = ch.arcs[a].head;
      if (!ws.reach[h]) {
        ws.reach[h] = 1;
        ws.parent[h] = a;
        ws.queue.push_back(h);
      }
    }
    int nx = ch.wait_next[x];
    if (nx >= 0 && sel.node_sel[nx] && !ws.reach[nx]) {
      ws.reach[nx] = 1;
      ws.parent[nx] = ~x;
      ws.queue.push_back(nx);
    }
  }
}

namespace {

// Kahn peel of the reachable portion; returns number peeled and leaves the
// peel order in ws.order. Unpeeled reachable nodes lie on or after a cycle.
int peel(const CompiledHost& ch, const Selection& sel, Workspace& ws) {
  int n = static_cast<int>(ch.nodes.size());
  ws.indeg.assign(n, 0);
  for (size_t a = 0; a < ch.arcs.size(); ++a)
    if (sel.arc_sel[a] && ws.reach[ch.arcs[a].tail]) ++ws.indeg[ch.arcs[a].head];
  for (int x = 0; x < n; ++x)
    if (ws.reach[x] && wait_in(ch, sel, x) && ws.reach[ch.wait_prev[x]]) ++ws.indeg[x];

  ws.order.clear();
  for (int x = 0; x < n; ++x)
    if (ws.reach[x] && ws.indeg[x] == 0) ws.order.push_back(x);
  for (size_t qi = 0; qi < ws.order.size(); ++qi) {
    int x = ws.order[qi];
    for (int a : ch.arcs_out[x]) {
      if (!sel.arc_sel[a]) continue;
      int h = ch.arcs[a].head;
      if (ws.reach[h] && --ws.indeg[h] == 0) ws.order.push_back(h);
    }
    int nx = ch.wait_next[x];
    if (nx >= 0 && sel.node_sel[nx] && ws.reach[nx] && --ws.indeg[nx] == 0)
      ws.order.push_back(nx);
  }
  return static_cast<int>(ws.order.size());
}

}  // namespace

void walk_counts(const CompiledHost& ch, const Selection& sel, Workspace& ws) {
  int n = static_cast<int>(ch.nodes.size());
  forward_reach(ch, sel, ws);
  int peeled = peel(ch, sel, ws);

  ws.cnt.assign(n, 0);
  std::vector<char> done(n, 0);
  for (int x : ws.order) done[x] = 1;
  for (int x : ws.order) {
    int c = sel.root[x] ? 1 : 0;
    for (int a : ch.arcs_in[x])
      if (sel.arc_sel[a] && ws.reach[ch.arcs[a].tail]) c += ws.cnt[ch.arcs[a].tail];
    if (wait_in(ch, sel, x) && ws.reach[ch.wait_prev[x]]) c += ws.cnt[ch.wait_prev[x]];
    ws.cnt[x] = static_cast<std::uint8_t>(std::min(c, 2));
  }
  if (peeled < static_cast<int>(ws.queue.size())) {
    // Nodes on or after a reachable cycle admit unboundedly many walks.
    for (int x = 0; x < n; ++x)
      if (ws.reach[x] && !done[x]) ws.cnt[x] = 2;
  }
}

VerifyResult verify_temporal_core(const CompiledHost& ch, const Selection& sel,
                                  Workspace& ws) {
  walk_counts(ch, sel, ws);
  for (size_t x = 0; x < ch.nodes.size(); ++x) {
    if (ws.cnt[x] == 1) continue;
    return {false,
            tv_name(ch.nodes[x]) + (ws.cnt[x] == 0 ? " has no root-to-vertex walk"
                                                   : " has more than one walk")};
  }
  return {true, ""};
}

VerifyResult verify_vertex_core(const CompiledHost& ch, const Selection& sel,
                                Workspace& ws) {
  int n = static_cast<int>(ch.nodes.size());
  forward_reach(ch, sel, ws);
  int reached = static_cast<int>(ws.queue.size());
  int peeled = peel(ch, sel, ws);

  // In-degree over the reachable portion (recompute; peel consumed ws.indeg).
  ws.indeg.assign(n, 0);
  for (size_t a = 0; a < ch.arcs.size(); ++a)
    if (sel.arc_sel[a] && ws.reach[ch.arcs[a].tail]) ++ws.indeg[ch.arcs[a].head];
  for (int x = 0; x < n; ++x)
    if (ws.reach[x] && wait_in(ch, sel, x) && ws.reach[ch.wait_prev[x]]) ++ws.indeg[x];

  for (int x = 0; x < n; ++x) {
    if (!ws.reach[x]) continue;
    if (sel.root[x] && ws.indeg[x] != 0)
      return {false, "root " + tv_name(ch.nodes[x]) + " has an incoming walk"};
    if (!sel.root[x] && ws.indeg[x] != 1)
      return {false, tv_name(ch.nodes[x]) + " has " + std::to_string(ws.indeg[x]) +
                         " incoming reachable arcs"};
  }
  if (peeled < reached) return {false, "reachable portion contains a cycle"};

  ws.events.assign(ch.host->vertices.size(), 0);
  for (int x = 0; x < n; ++x)
    if (ws.reach[x] && sel.root[x]) ++ws.events[ch.node_base[x]];
  for (size_t a = 0; a < ch.arcs.size(); ++a)
    if (sel.arc_sel[a] && ws.reach[ch.arcs[a].tail])
      ++ws.events[ch.node_base[ch.arcs[a].head]];
  for (size_t u = 0; u < ch.host->vertices.size(); ++u) {
    if (ws.events[u] == 1) continue;
    return {false, "vertex " + ch.host->vertices[u] + " collects " +
                       std::to_string(ws.events[u]) + " arrival events"};
  }
  return {true, ""};
}

VerifyResult check_disjoint_core(const CompiledHost& ch,
                                 const std::vector<Selection>& sels,
                                 Disjointness disjointness) {
  for (size_t i = 0; i < sels.size(); ++i)
    for (size_t j = i + 1; j < sels.size(); ++j) {
      if (disjointness == Disjointness::t_edge) {
        for (size_t a = 0; a < ch.arcs.size(); ++a)
          if (sels[i].arc_sel[a] && sels[j].arc_sel[a]) {
            const auto& arc = ch.arcs[a];
            std::ostringstream os;
            os << "branchings " << i + 1 << " and " << j + 1
               << " share the temporal edge " << ch.host->edges[arc.edge].id << " ("
               << arc.tp.dep << "," << arc.tp.arr << ")";
            return {false, os.str()};
          }
      } else {
        std::vector<char> ei(ch.host->edges.size(), 0);
        for (size_t a = 0; a < ch.arcs.size(); ++a)
          if (sels[i].arc_sel[a]) ei[ch.arcs[a].edge] = 1;
        for (size_t a = 0; a < ch.arcs.size(); ++a)
          if (sels[j].arc_sel[a] && ei[ch.arcs[a].edge]) {
            std::ostringstream os;
            os << "branchings " << i + 1 << " and " << j + 1 << " share the edge "
               << ch.host->edges[ch.arcs[a].edge].id;
            return {false, os.str()};
          }
      }
    }
  return {true, ""};
}

}  // namespace detail

std::set<TemporalVertex> reachable(const TemporalBranching& b) {
  require_subdigraph(b);
  CompiledHost ch = compile(*b.host);
  Selection sel = make_selection(ch, b);
  detail::Workspace ws;
  detail::forward_reach(ch, sel, ws);
  std::set<TemporalVertex> out;
  for (size_t x = 0; x < ch.nodes.size(); ++x)
    if (ws.reach[x]) out.insert(ch.nodes[x]);
  return out;
}

WalkCount walk_count(const TemporalBranching& b, const TemporalVertex& target) {
  require_subdigraph(b);
  CompiledHost ch = compile(*b.host);
  Selection sel = make_selection(ch, b);
  detail::Workspace ws;
  detail::walk_counts(ch, sel, ws);
  int x = ch.node_of(target);
  if (x < 0) throw std::invalid_argument("target " + tv_name(target) + " is not a host temporal vertex");
  switch (ws.cnt[x]) {
    case 0: return WalkCount::zero;
    case 1: return WalkCount::one;
    default: return WalkCount::many;
  }
}

VerifyResult verify_branching(const TemporalBranching& b, Spanning spanning) {
  require_subdigraph(b);
  CompiledHost ch = compile(*b.host);
  Selection sel = make_selection(ch, b);
  detail::Workspace ws;
  return spanning == Spanning::temporal ? detail::verify_temporal_core(ch, sel, ws)
                                        : detail::verify_vertex_core(ch, sel, ws);
}

VerifyResult check_disjoint(const std::vector<TemporalBranching>& bs,
                            Disjointness disjointness) {
  if (bs.size() <= 1) return {true, ""};
  for (const auto& b : bs)
    if (b.host != bs.front().host)
      throw std::invalid_argument("branchings do not share a host");
  require_subdigraph(bs.front());
  CompiledHost ch = compile(*bs.front().host);
  std::vector<Selection> sels;
  for (const auto& b : bs) {
    require_subdigraph(b);
    sels.push_back(make_selection(ch, b));
  }
  return detail::check_disjoint_core(ch, sels, disjointness);
}

std::vector<ArrivalEvent> arrival_events(const TemporalBranching& b) {
  require_subdigraph(b);
  CompiledHost ch = compile(*b.host);
  Selection sel = make_selection(ch, b);
  detail::Workspace ws;
  detail::forward_reach(ch, sel, ws);
  std::vector<ArrivalEvent> out;
  for (size_t x = 0; x < ch.nodes.size(); ++x)
    if (ws.reach[x] && sel.root[x])
      out.push_back({ch.nodes[x], ArrivalEvent::Kind::root});
  for (size_t a = 0; a < ch.arcs.size(); ++a)
    if (sel.arc_sel[a] && ws.reach[ch.arcs[a].tail])
      out.push_back({ch.nodes[ch.arcs[a].head], ArrivalEvent::Kind::arrival});
  std::sort(out.begin(), out.end(), [](const ArrivalEvent& l, const ArrivalEvent& r) {
    return std::tie(l.target, l.kind) < std::tie(r.target, r.kind);
  });
  return out;
}

}  // namespace tbr
