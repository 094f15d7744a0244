#pragma once

#include <optional>

#include "tbr/core.hpp"

namespace tbr {

/// Edge set plus root set forming a spanning branching: each root has
/// in-degree 0, every other vertex in-degree exactly 1, and the edge set is
/// acyclic.
struct StaticBranching {
  std::set<std::string> edge_set;
  std::set<std::string> root_set;
  bool operator==(const StaticBranching&) const = default;
};

/// Maximum number of pairwise edge-disjoint paths from the source set to
/// sink; unit capacity per parallel edge, vertices uncapacitated.
int max_flow(const StaticDigraph& d, const std::set<std::string>& sources,
             const std::string& sink);

/// Edmonds' condition for k edge-disjoint spanning branchings rooted at the
/// given sets, evaluated through 2^k * |V| unit-capacity flow probes.
bool edmonds_feasible(const StaticDigraph& d,
                      const std::vector<std::set<std::string>>& root_sets);

/// Constructs k pairwise edge-disjoint spanning branchings (Lovasz-style
/// growth), or nullopt when edmonds_feasible is false. Candidate edges are
/// scanned in (tail, head, edge id) order, so outputs are deterministic.
std::optional<std::vector<StaticBranching>> edmonds_construct(
    const StaticDigraph& d, const std::vector<std::set<std::string>>& root_sets);

/// Checks branching invariants, spanning, root sets, and pairwise edge
/// disjointness.
bool verify_static(const StaticDigraph& d,
                   const std::vector<StaticBranching>& branchings,
                   const std::vector<std::set<std::string>>& root_sets);

}  // namespace tbr
