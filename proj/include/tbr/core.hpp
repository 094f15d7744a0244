#pragma once

#include <compare>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace tbr {

using Timestamp = int;

/// Raised when a requested method cannot handle the given problem variant.
struct CapabilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Raised when an exhaustive routine refuses an instance above its scale guard.
struct ScaleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TimePair {
  Timestamp dep = 0;
  Timestamp arr = 0;
  auto operator<=>(const TimePair&) const = default;
};

/// One appearance (v, t) of a vertex.
struct TemporalVertex {
  std::string vertex;
  Timestamp time = 0;
  auto operator<=>(const TemporalVertex&) const = default;
};

/// One appearance of an edge: the copy of `edge` departing at `dep` and
/// arriving at `arr`.
struct TemporalEdge {
  std::string edge;
  Timestamp dep = 0;
  Timestamp arr = 0;
  auto operator<=>(const TemporalEdge&) const = default;
};

struct EdgeDecl {
  std::string id;
  std::string tail;
  std::string head;
  auto operator<=>(const EdgeDecl&) const = default;
};

/// A digraph that exists in time. `gamma` maps each vertex to the timestamps
/// at which it is active, `lambda` maps each edge id to its set of
/// (departure, arrival) pairs. Loops and parallel edges are allowed; parallel
/// edges are distinguished by edge id. Instances are immutable once built:
/// every operation below is const and safe to call concurrently.
struct TemporalDigraph {
  std::vector<std::string> vertices;
  std::vector<EdgeDecl> edges;
  std::map<std::string, std::set<Timestamp>> gamma;
  std::map<std::string, std::set<TimePair>> lambda;

  bool operator==(const TemporalDigraph&) const = default;

  bool has_vertex(const std::string& v) const;
  const EdgeDecl* find_edge(const std::string& id) const;
  const std::set<Timestamp>& activity(const std::string& v) const;
  const std::set<TimePair>& pairs(const std::string& edge_id) const;

  bool active_at(const std::string& v, Timestamp t) const;
  bool has_temporal_vertex(const TemporalVertex& tv) const;

  /// Max timestamp at which any vertex is active; -1 when every gamma is empty.
  Timestamp lifetime() const;

  /// All (v, t) appearances, sorted.
  std::vector<TemporalVertex> temporal_vertices() const;

  /// All edge appearances, in edge-declaration order then (dep, arr) order.
  std::vector<TemporalEdge> temporal_edges() const;

  /// True when every nonempty gamma set is one interval of consecutive integers.
  bool interval_activity() const;
};

struct RootSet {
  std::set<TemporalVertex> roots;
  auto operator<=>(const RootSet&) const = default;
};

enum class Spanning { temporal, vertex };
enum class Disjointness { edge, t_edge };

struct ProblemVariant {
  Spanning spanning = Spanning::temporal;
  Disjointness disjointness = Disjointness::t_edge;
  auto operator<=>(const ProblemVariant&) const = default;
};

std::string to_string(Spanning s);
std::string to_string(Disjointness d);

/// A temporal arc of the time-expanded digraph; one per temporal edge.
struct ExpandedArc {
  TemporalVertex from;
  TemporalVertex to;
  std::string edge;
  auto operator<=>(const ExpandedArc&) const = default;
};

/// A waiting arc (v, t) -> (v, t+1), present with the stated multiplicity.
struct WaitingArc {
  std::string vertex;
  Timestamp from_time = 0;
  int multiplicity = 1;
  auto operator<=>(const WaitingArc&) const = default;
};

/// The (gamma, lambda)-digraph of a temporal digraph, optionally augmented
/// with k copies of each waiting arc between consecutive appearances.
struct ExpandedDigraph {
  std::set<TemporalVertex> nodes;
  std::vector<ExpandedArc> temporal_arcs;
  std::vector<WaitingArc> waiting_arcs;
};

/// Static digraph with parallel edges distinguished by edge id.
struct StaticDigraph {
  std::vector<std::string> vertices;
  std::vector<EdgeDecl> edges;
  bool operator==(const StaticDigraph&) const = default;
  bool has_vertex(const std::string& v) const;
};

/// Collects every invariant violation of g; empty result means valid.
std::vector<std::string> validate(const TemporalDigraph& g);

/// Throws std::invalid_argument listing the violations when g is invalid.
void require_valid(const TemporalDigraph& g);

/// Builds the time-expanded digraph of g with `waiting_multiplicity` copies of
/// each waiting arc (0 yields the plain (gamma, lambda)-digraph).
ExpandedDigraph expand(const TemporalDigraph& g, int waiting_multiplicity);

/// Subdigraph active at time t: vertices with t in gamma, edges with the
/// same-time pair (t, t).
StaticDigraph snapshot(const TemporalDigraph& g, Timestamp t);

struct ArrivalGraph {
  StaticDigraph graph;
  /// Vertices active at both j-1 and j; spanned by waiting in every branching.
  std::set<std::string> common_wait_roots;
};

/// The digraph of edges arriving at time j together with their endpoints and
/// the vertices active at j.
ArrivalGraph arrival_graph(const TemporalDigraph& g, Timestamp j);

}  // namespace tbr
