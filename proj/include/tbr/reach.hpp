#pragma once

#include <cstdint>

#include "tbr/core.hpp"

namespace tbr {

/// A temporal subdigraph of `host` together with its root set. gamma_sub and
/// lambda_sub must select subsets of the host's gamma/lambda, and every
/// selected time pair needs both endpoints selected.
struct TemporalBranching {
  const TemporalDigraph* host = nullptr;
  std::map<std::string, std::set<Timestamp>> gamma_sub;
  std::map<std::string, std::set<TimePair>> lambda_sub;
  RootSet roots;
};

enum class WalkCount { zero, one, many };

/// Root designations and temporal-arc arrivals; waiting never produces one.
struct ArrivalEvent {
  TemporalVertex target;
  enum class Kind { root, arrival } kind = Kind::root;
};

struct VerifyResult {
  bool ok = false;
  std::string diagnostic;
  explicit operator bool() const { return ok; }
};

/// Temporal vertices of b reachable from its roots by temporal walks (arcs of
/// lambda_sub, waiting across consecutive selected timestamps).
std::set<TemporalVertex> reachable(const TemporalBranching& b);

/// Number of distinct root-to-target walks in b, capped at `many`. A cycle on
/// a root-to-target walk yields many. Targets outside gamma_sub count zero.
WalkCount walk_count(const TemporalBranching& b, const TemporalVertex& target);

/// Temporal mode: every host temporal vertex has exactly one walk.
/// Vertex mode: the reachable portion is an out-forest and every base vertex
/// collects exactly one ArrivalEvent.
VerifyResult verify_branching(const TemporalBranching& b, Spanning spanning);

/// Pairwise disjointness over a family sharing one host. Edge mode compares
/// the sets of edges with nonempty lambda_sub; t-edge mode the time pairs.
VerifyResult check_disjoint(const std::vector<TemporalBranching>& bs,
                            Disjointness disjointness);

/// Events of b in host-vertex order; reachable portion only.
std::vector<ArrivalEvent> arrival_events(const TemporalBranching& b);

// ---------------------------------------------------------------------------
// Indexed internals, shared with the exact solver and the oracle so that every
// feasibility verdict in the toolkit goes through one verifier.

struct CompiledHost {
  const TemporalDigraph* host = nullptr;
  std::vector<TemporalVertex> nodes;  // sorted
  std::map<TemporalVertex, int> node_id;
  std::vector<int> wait_prev;  // node -> node of (v, t-1), or -1
  std::vector<int> wait_next;  // node -> node of (v, t+1), or -1
  std::vector<int> node_base;  // node -> index into host->vertices
  std::map<std::string, int> base_index;

  struct Arc {
    int edge = 0;  // index into host->edges
    TimePair tp;
    int tail = 0;
    int head = 0;
  };
  std::vector<Arc> arcs;  // sorted by (arrival, head, edge id, departure)
  std::vector<std::vector<int>> arcs_in;
  std::vector<std::vector<int>> arcs_out;
  std::vector<std::vector<int>> appearances;  // per base vertex, time order

  int node_of(const TemporalVertex& tv) const;
};

CompiledHost compile(const TemporalDigraph& g);

/// One branching as membership flags over a CompiledHost.
struct Selection {
  std::vector<char> arc_sel;
  std::vector<char> node_sel;
  std::vector<char> root;
};

Selection make_selection(const CompiledHost& ch, const TemporalBranching& b);

namespace detail {

struct Workspace {
  std::vector<char> reach;
  std::vector<int> indeg;
  std::vector<int> order;
  std::vector<int> queue;
  std::vector<std::uint8_t> cnt;
  std::vector<int> events;
  std::vector<int> parent;  // entering arc per node: arc index, ~node for wait, -2 root, -1 none
};

/// Forward search from roots over selected arcs and waiting; fills ws.reach
/// and ws.parent (arc index, ~node for a wait step, -2 root, -1 unreached).
void forward_reach(const CompiledHost& ch, const Selection& sel, Workspace& ws);

/// Walk multiplicities per node: 0, 1, or 2 (= many).
void walk_counts(const CompiledHost& ch, const Selection& sel, Workspace& ws);

VerifyResult verify_temporal_core(const CompiledHost& ch, const Selection& sel,
                                  Workspace& ws);
VerifyResult verify_vertex_core(const CompiledHost& ch, const Selection& sel,
                                Workspace& ws);

VerifyResult check_disjoint_core(const CompiledHost& ch,
                                 const std::vector<Selection>& sels,
                                 Disjointness disjointness);

}  // namespace detail

}  // namespace tbr
