#pragma once

#include <array>
#include <optional>
#include <utility>

#include "tbr/reach.hpp"

namespace tbr {

/// Positive 3-CNF: every clause is exactly three positive variable indices
/// (repetitions allowed), 1-based.
struct CnfFormula {
  int num_variables = 0;
  std::vector<std::array<int, 3>> clauses;
  bool operator==(const CnfFormula&) const = default;
};

void require_valid(const CnfFormula& phi);

/// Weak-disjoint-paths instance: a digraph plus (source, target) requests.
struct WdpInstance {
  StaticDigraph digraph;
  std::vector<std::pair<std::string, std::string>> requests;
  bool operator==(const WdpInstance&) const = default;
};

/// A generated instance together with the tag and metadata its decoder needs.
struct ReductionOutput {
  TemporalDigraph instance;
  std::vector<RootSet> root_sets;
  std::string decoder;
  std::map<std::string, std::string> info;
};

/// Rewrites a multi-root instance into one rooted at a single fresh temporal
/// vertex (r,0), preserving feasibility for every variant. Adds k parallel
/// r->r_i edges per branching gadget; shifts all times up by one when 0 is
/// already in use (recorded under info["shift"]).
ReductionOutput to_single_source(const TemporalDigraph& g,
                                 const std::vector<RootSet>& root_sets);

/// Appends a (k+1)-th root set that a branching with no temporal edges spans,
/// preserving the feasibility verdict: first appearance of every activity run
/// for temporal spanning, earliest appearance per vertex for vertex spanning.
std::vector<RootSet> lift_roots(const TemporalDigraph& g,
                                const std::vector<RootSet>& root_sets,
                                Spanning spanning);

/// Splices fresh endpoints so sources are sources, sinks are sinks, and the
/// four request endpoints are pairwise distinct. 2-WDP answer is preserved.
WdpInstance normalize_wdp(const WdpInstance& w);

/// Lifetime-3 instance with 2 edge-disjoint temporal-spanning branchings iff
/// the normalized 2-WDP instance is solvable.
ReductionOutput reduce_wdp(const WdpInstance& w);

/// Star-shaped instance (all edges into one center) with lifetime 2(n+m)-1;
/// 2 edge-disjoint temporal-spanning branchings exist iff phi is
/// NAE-satisfiable.
ReductionOutput reduce_nae3sat_star(const CnfFormula& phi);

/// Lifetime-2 DAG with 2 edge-disjoint (equivalently t-edge-disjoint)
/// vertex-spanning branchings iff phi is NAE-satisfiable.
ReductionOutput reduce_nae3sat_vertex(const CnfFormula& phi);

/// Reads a NAE assignment off verified branchings of a star or vertex
/// reduction output: x_i is true iff its designated edge lies in branching 1.
std::vector<bool> decode_assignment(const ReductionOutput& out,
                                    const std::vector<TemporalBranching>& branchings);

/// Extracts the two edge-disjoint source-digraph paths embedded in verified
/// branchings of a reduce_wdp output.
std::pair<std::vector<std::string>, std::vector<std::string>> decode_paths(
    const ReductionOutput& out, const std::vector<TemporalBranching>& branchings);

/// Exhaustive NAE check over 2^n assignments; refuses n > 20.
std::optional<std::vector<bool>> solve_nae3sat_bruteforce(const CnfFormula& phi);

/// Exhaustive edge-disjoint path-pair search; refuses more than 16 edges.
std::optional<std::array<std::vector<std::string>, 2>> solve_wdp_bruteforce(
    const WdpInstance& w);

}  // namespace tbr
