#pragma once

#include <optional>

#include "tbr/reach.hpp"

namespace tbr {

/// Exponential-time exact solver for any variant. Backtracks over assignments
/// of temporal edges to branchings (arrival-time order, values none,1..k) with
/// arrival-count, ownership, and reachability pruning; every accepted leaf is
/// revalidated by the verifier.
std::optional<std::vector<TemporalBranching>> solve_exact(
    const TemporalDigraph& g, const std::vector<RootSet>& root_sets,
    ProblemVariant variant);

/// Brute-force ground truth: tries every assignment of temporal edges to
/// branchings, filtered only by the edge-ownership rule in edge mode, and
/// keeps the first one passing verify_branching + check_disjoint. Refuses
/// instances with more than 14 temporal edges (ScaleError).
std::optional<std::vector<TemporalBranching>> oracle_enumerate(
    const TemporalDigraph& g, const std::vector<RootSet>& root_sets,
    ProblemVariant variant);

}  // namespace tbr
