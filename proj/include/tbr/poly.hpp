#pragma once

#include <optional>

#include "tbr/reach.hpp"
#include "tbr/static_branchings.hpp"

namespace tbr {

/// Per-timestamp static view of an interval-activity instance. Snapshot j
/// holds the digraph of edge copies arriving at j (pruned of copies whose head
/// is spanned by waiting), the per-branching root sets, and the lambda pair
/// each static row stands for. Delayed copies depart from synthetic "past"
/// source vertices, which join every root set.
struct SnapshotDecomposition {
  struct Snapshot {
    Timestamp time = 0;
    StaticDigraph graph;
    std::vector<std::set<std::string>> root_sets;
    std::set<std::string> common_wait_roots;
    std::set<std::string> past_nodes;
    std::map<std::string, TimePair> chosen_copy;  // static edge id -> lambda pair
  };
  std::vector<Snapshot> snapshots;
};

SnapshotDecomposition build_snapshot_decomposition(
    const TemporalDigraph& g, const std::vector<RootSet>& root_sets);

/// T-edge-disjoint temporal-spanning solver: reduces to k edge-disjoint
/// spanning branchings on the time-expanded digraph with k waiting copies.
std::optional<std::vector<TemporalBranching>> solve_tedge_temporal(
    const TemporalDigraph& g, const std::vector<RootSet>& root_sets);

/// Edge-disjoint temporal-spanning solver for interval activity: one Edmonds
/// instance per arrival timestamp. Throws std::invalid_argument when some
/// gamma set is not an interval.
std::optional<std::vector<TemporalBranching>> solve_edge_temporal_interval(
    const TemporalDigraph& g, const std::vector<RootSet>& root_sets);

enum class Method { automatic, poly, exact };

/// Routes to the matching solver: (temporal, t-edge) and interval-activity
/// (temporal, edge) run the polynomial solvers; everything else the exact
/// search. Method poly on an unsupported combination raises CapabilityError.
std::optional<std::vector<TemporalBranching>> solve(
    const TemporalDigraph& g, const std::vector<RootSet>& root_sets,
    ProblemVariant variant, Method method = Method::automatic);

}  // namespace tbr
