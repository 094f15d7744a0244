#include "tbr/exact.hpp"

#include <algorithm>

namespace tbr {

namespace {

void require_roots(const TemporalDigraph& g, const std::vector<RootSet>& root_sets) {
  if (root_sets.empty()) throw std::invalid_argument("need at least one root set");
  for (const auto& rs : root_sets)
    for (const auto& r : rs.roots)
      if (!g.has_temporal_vertex(r))
        throw std::invalid_argument("root (" + r.vertex + "," +
                                    std::to_string(r.time) +
                                    ") is not a temporal vertex");
}

std::vector<TemporalBranching> trivial_branchings(const TemporalDigraph& g, int k) {
  std::vector<TemporalBranching> out(k);
  for (auto& b : out) b.host = &g;
  return out;
}

TemporalBranching build_branching(const TemporalDigraph& g, const CompiledHost& ch,
                                  const Selection& sel, const RootSet& roots) {
  TemporalBranching b;
  b.host = &g;
  b.roots = roots;
  for (size_t x = 0; x < ch.nodes.size(); ++x)
    if (sel.node_sel[x]) b.gamma_sub[ch.nodes[x].vertex].insert(ch.nodes[x].time);
  for (size_t a = 0; a < ch.arcs.size(); ++a)
    if (sel.arc_sel[a])
      b.lambda_sub[g.edges[ch.arcs[a].edge].id].insert(ch.arcs[a].tp);
  return b;
}

// Shrinks a verified full-activity selection to the activity actually used:
// arc endpoints, roots, and the waiting chains on root-to-endpoint walks.
Selection minimal_selection(const CompiledHost& ch, const Selection& sel,
                            const detail::Workspace& ws) {
  Selection out = sel;
  std::fill(out.node_sel.begin(), out.node_sel.end(), 0);
  std::vector<int> stack;
  auto need = [&](int x) {
    if (x >= 0 && !out.node_sel[x]) {
      out.node_sel[x] = 1;
      stack.push_back(x);
    }
  };
  for (size_t x = 0; x < ch.nodes.size(); ++x)
    if (sel.root[x]) need(static_cast<int>(x));
  for (size_t a = 0; a < ch.arcs.size(); ++a)
    if (sel.arc_sel[a]) {
      need(ch.arcs[a].tail);
      need(ch.arcs[a].head);
    }
  while (!stack.empty()) {
    int x = stack.back();
    stack.pop_back();
    int p = ws.parent[x];
    if (p == -1 || p == -2) continue;
    if (p >= 0)
      need(ch.arcs[p].tail);
    else
      need(~p);  // reached by waiting from node ~p
  }
  return out;
}

struct ExactSearch {
  const TemporalDigraph& g;
  const CompiledHost& ch;
  std::vector<RootSet> root_sets;
  ProblemVariant variant;
  int k, n, m, nb;

  std::vector<std::vector<char>> is_root;      // [k][node]
  std::vector<std::vector<char>> base_rooted;  // [k][base]
  std::vector<char> waitable;                  // node: previous appearance exists
  std::vector<int> node_close;                 // node -> index of last in-arc, or -1
  std::vector<int> base_close;                 // base -> index of last in-arc, or -1

  struct Block {
    Timestamp time;
    int arc_begin = 0, arc_end = 0;
    std::vector<int> nodes;
  };
  std::vector<Block> blocks;
  bool symmetric = false;

  std::vector<int> val;                       // per arc: 0 none, 1..k
  std::vector<std::vector<int>> arr_node;     // [k][node]
  std::vector<std::vector<int>> arr_base;     // [k][base]
  std::vector<int> owner;                     // per base edge (edge mode)
  std::vector<int> owner_cnt;
  std::vector<std::vector<char>> reached;     // [k][node]
  long long assigned = 0;

  detail::Workspace ws;
  std::optional<std::vector<TemporalBranching>> found;

  ExactSearch(const TemporalDigraph& g_, const CompiledHost& ch_,
              const std::vector<RootSet>& rs, ProblemVariant v)
      : g(g_), ch(ch_), root_sets(rs), variant(v) {
    k = static_cast<int>(rs.size());
    n = static_cast<int>(ch.nodes.size());
    m = static_cast<int>(ch.arcs.size());
    nb = static_cast<int>(g.vertices.size());

    is_root.assign(k, std::vector<char>(n, 0));
    base_rooted.assign(k, std::vector<char>(nb, 0));
    for (int i = 0; i < k; ++i)
      for (const auto& r : rs[i].roots) {
        int x = ch.node_of(r);
        is_root[i][x] = 1;
        base_rooted[i][ch.node_base[x]] = 1;
      }
    waitable.assign(n, 0);
    for (int x = 0; x < n; ++x) waitable[x] = ch.wait_prev[x] >= 0;

    node_close.assign(n, -1);
    base_close.assign(nb, -1);
    for (int a = 0; a < m; ++a) {
      int h = ch.arcs[a].head;
      node_close[h] = std::max(node_close[h], a);
      base_close[ch.node_base[h]] = std::max(base_close[ch.node_base[h]], a);
    }

    // One block per timestamp carrying vertices; arcs fall into the block of
    // their arrival time.
    std::set<Timestamp> times;
    for (const auto& tv : ch.nodes) times.insert(tv.time);
    int a = 0;
    for (Timestamp t : times) {
      Block blk;
      blk.time = t;
      blk.arc_begin = a;
      while (a < m && ch.arcs[a].tp.arr == t) ++a;
      blk.arc_end = a;
      blocks.push_back(blk);
    }
    for (int x = 0; x < n; ++x)
      for (auto& blk : blocks)
        if (blk.time == ch.nodes[x].time) blk.nodes.push_back(x);

    symmetric = k > 1;
    for (int i = 1; i < k && symmetric; ++i)
      if (rs[i].roots != rs[0].roots) symmetric = false;

    val.assign(m, 0);
    arr_node.assign(k, std::vector<int>(n, 0));
    arr_base.assign(k, std::vector<int>(nb, 0));
    owner.assign(g.edges.size(), 0);
    owner_cnt.assign(g.edges.size(), 0);
    reached.assign(k, std::vector<char>(n, 0));
  }

  bool hopeless() const {
    if (variant.spanning == Spanning::temporal) {
      for (int x = 0; x < n; ++x) {
        if (waitable[x] || !ch.arcs_in[x].empty()) continue;
        for (int i = 0; i < k; ++i)
          if (!is_root[i][x]) return true;
      }
      // A waitable root collects both its zero-length walk and a waiting walk.
      for (int i = 0; i < k; ++i)
        for (int x = 0; x < n; ++x)
          if (is_root[i][x] && waitable[x]) return true;
    } else {
      for (int u = 0; u < nb; ++u) {
        bool has_arrival = base_close[u] >= 0;
        bool has_node = !ch.appearances[u].empty();
        for (int i = 0; i < k; ++i) {
          int designations = 0;
          for (int x : ch.appearances[u])
            if (is_root[i][x]) ++designations;
          if (designations >= 2) return true;
          if (designations == 0 && (!has_node || !has_arrival)) return true;
        }
      }
    }
    return false;
  }

  bool legal(int a, int v) const {
    if (v == 0) return true;
    if (symmetric && assigned == 0 && v >= 2) return false;
    int i = v - 1;
    int h = ch.arcs[a].head;
    if (variant.spanning == Spanning::temporal) {
      if (is_root[i][h] || waitable[h]) return false;
      if (arr_node[i][h] >= 1) return false;
    } else {
      if (base_rooted[i][ch.node_base[h]]) return false;
      if (arr_base[i][ch.node_base[h]] >= 1) return false;
      if (arr_node[i][h] >= 1) return false;
    }
    if (variant.disjointness == Disjointness::edge) {
      int e = ch.arcs[a].edge;
      if (owner[e] != 0 && owner[e] != v) return false;
    }
    return true;
  }

  void apply(int a, int v) {
    val[a] = v;
    if (v == 0) return;
    int i = v - 1;
    ++arr_node[i][ch.arcs[a].head];
    ++arr_base[i][ch.node_base[ch.arcs[a].head]];
    if (variant.disjointness == Disjointness::edge) {
      owner[ch.arcs[a].edge] = v;
      ++owner_cnt[ch.arcs[a].edge];
    }
    ++assigned;
  }

  void unapply(int a, int v) {
    val[a] = 0;
    if (v == 0) return;
    int i = v - 1;
    --arr_node[i][ch.arcs[a].head];
    --arr_base[i][ch.node_base[ch.arcs[a].head]];
    if (variant.disjointness == Disjointness::edge) {
      if (--owner_cnt[ch.arcs[a].edge] == 0) owner[ch.arcs[a].edge] = 0;
    }
    --assigned;
  }

  // Exact-count requirements once all in-arcs of a node / base vertex are set.
  bool closes_ok(int a) const {
    int h = ch.arcs[a].head;
    if (variant.spanning == Spanning::temporal) {
      if (node_close[h] == a) {
        for (int i = 0; i < k; ++i) {
          int want = (is_root[i][h] || waitable[h]) ? 0 : 1;
          if (arr_node[i][h] != want) return false;
        }
      }
    } else {
      int u = ch.node_base[h];
      if (base_close[u] == a) {
        for (int i = 0; i < k; ++i) {
          int want = base_rooted[i][u] ? 0 : 1;
          if (arr_base[i][u] != want) return false;
        }
      }
    }
    return true;
  }

  // Settles reachability for the block's nodes and validates it: temporal
  // spanning needs every node reached, and chosen arcs need reached tails.
  bool close_block(const Block& blk, std::vector<std::pair<int, int>>& marks) {
    for (int i = 0; i < k; ++i) {
      bool changed = true;
      while (changed) {
        changed = false;
        for (int x : blk.nodes) {
          if (reached[i][x]) continue;
          bool r = is_root[i][x];
          if (!r && ch.wait_prev[x] >= 0 && reached[i][ch.wait_prev[x]]) r = true;
          if (!r)
            for (int a : ch.arcs_in[x])
              if (val[a] == i + 1 && reached[i][ch.arcs[a].tail]) {
                r = true;
                break;
              }
          if (r) {
            reached[i][x] = 1;
            marks.push_back({i, x});
            changed = true;
          }
        }
      }
      if (variant.spanning == Spanning::temporal) {
        for (int x : blk.nodes)
          if (!reached[i][x]) return false;
      }
    }
    for (int a = blk.arc_begin; a < blk.arc_end; ++a)
      if (val[a] != 0 && !reached[val[a] - 1][ch.arcs[a].tail]) return false;
    return true;
  }

  bool leaf() {
    std::vector<Selection> sels(k);
    for (int i = 0; i < k; ++i) {
      sels[i].arc_sel.assign(m, 0);
      sels[i].node_sel.assign(n, 1);
      sels[i].root = is_root[i];
    }
    for (int a = 0; a < m; ++a)
      if (val[a] != 0) sels[val[a] - 1].arc_sel[a] = 1;

    std::vector<Selection> emit;
    for (int i = 0; i < k; ++i) {
      if (variant.spanning == Spanning::temporal) {
        if (!detail::verify_temporal_core(ch, sels[i], ws)) return false;
        emit.push_back(sels[i]);
      } else {
        if (!detail::verify_vertex_core(ch, sels[i], ws)) return false;
        // verify filled ws.parent with the walk forest; shrink activity to it
        Selection small = minimal_selection(ch, sels[i], ws);
        if (detail::verify_vertex_core(ch, small, ws))
          emit.push_back(std::move(small));
        else
          emit.push_back(sels[i]);
      }
    }
    if (!detail::check_disjoint_core(ch, emit, variant.disjointness)) return false;

    std::vector<TemporalBranching> out;
    for (int i = 0; i < k; ++i)
      out.push_back(build_branching(g, ch, emit[i], root_sets[i]));
    found = std::move(out);
    return true;
  }

  bool dfs_block(size_t bi) {
    if (bi == blocks.size()) return leaf();
    return dfs_arc(bi, blocks[bi].arc_begin);
  }

  bool dfs_arc(size_t bi, int a) {
    const Block& blk = blocks[bi];
    if (a == blk.arc_end) {
      std::vector<std::pair<int, int>> marks;
      bool ok = close_block(blk, marks);
      if (ok) ok = dfs_block(bi + 1);
      for (auto [i, x] : marks) reached[i][x] = 0;
      return ok;
    }
    for (int v = 0; v <= k; ++v) {
      if (!legal(a, v)) continue;
      apply(a, v);
      if (closes_ok(a) && dfs_arc(bi, a + 1)) {
        unapply(a, v);
        return true;
      }
      unapply(a, v);
    }
    return false;
  }
};

}  // namespace

std::optional<std::vector<TemporalBranching>> solve_exact(
    const TemporalDigraph& g, const std::vector<RootSet>& root_sets,
    ProblemVariant variant) {
  require_valid(g);
  require_roots(g, root_sets);
  int k = static_cast<int>(root_sets.size());
  if (g.temporal_vertices().empty()) return trivial_branchings(g, k);

  CompiledHost ch = compile(g);
  ExactSearch search(g, ch, root_sets, variant);
  if (search.hopeless()) return std::nullopt;
  if (!search.dfs_block(0)) return std::nullopt;
  return std::move(search.found);
}

std::optional<std::vector<TemporalBranching>> oracle_enumerate(
    const TemporalDigraph& g, const std::vector<RootSet>& root_sets,
    ProblemVariant variant) {
  require_valid(g);
  require_roots(g, root_sets);
  int k = static_cast<int>(root_sets.size());
  if (g.temporal_vertices().empty()) return trivial_branchings(g, k);

  CompiledHost ch = compile(g);
  int m = static_cast<int>(ch.arcs.size());
  if (m > 14)
    throw ScaleError("oracle_enumerate refuses " + std::to_string(m) +
                     " temporal edges (guard: 14)");
  int n = static_cast<int>(ch.nodes.size());

  std::vector<Selection> sels(k);
  for (int i = 0; i < k; ++i) {
    sels[i].arc_sel.assign(m, 0);
    sels[i].node_sel.assign(n, 1);
    sels[i].root.assign(n, 0);
    for (const auto& r : root_sets[i].roots) sels[i].root[ch.node_of(r)] = 1;
  }

  detail::Workspace ws;
  std::vector<int> digits(m, 0);
  std::vector<int> owner(g.edges.size());
  while (true) {
    bool ownership_ok = true;
    if (variant.disjointness == Disjointness::edge) {
      std::fill(owner.begin(), owner.end(), 0);
      for (int a = 0; a < m && ownership_ok; ++a) {
        if (digits[a] == 0) continue;
        int e = ch.arcs[a].edge;
        if (owner[e] == 0)
          owner[e] = digits[a];
        else if (owner[e] != digits[a])
          ownership_ok = false;
      }
    }
    if (ownership_ok) {
      for (int i = 0; i < k; ++i) std::fill(sels[i].arc_sel.begin(), sels[i].arc_sel.end(), 0);
      for (int a = 0; a < m; ++a)
        if (digits[a] != 0) sels[digits[a] - 1].arc_sel[a] = 1;
      bool ok = true;
      for (int i = 0; i < k && ok; ++i)
        ok = variant.spanning == Spanning::temporal
                 ? detail::verify_temporal_core(ch, sels[i], ws).ok
                 : detail::verify_vertex_core(ch, sels[i], ws).ok;
      if (ok) ok = detail::check_disjoint_core(ch, sels, variant.disjointness).ok;
      if (ok) {
        std::vector<TemporalBranching> out;
        for (int i = 0; i < k; ++i)
          out.push_back(build_branching(g, ch, sels[i], root_sets[i]));
        return out;
      }
    }
    int pos = m - 1;
    while (pos >= 0 && digits[pos] == k) digits[pos--] = 0;
    if (pos < 0) break;
    ++digits[pos];
  }
  return std::nullopt;
}

}  // namespace tbr
