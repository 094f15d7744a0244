#include "tbr/core.hpp"

#include <algorithm>
#include <sstream>

namespace tbr {

namespace {
const std::set<Timestamp> kNoTimes;
const std::set<TimePair> kNoPairs;
}  // namespace

bool TemporalDigraph::has_vertex(const std::string& v) const {
  return std::find(vertices.begin(), vertices.end(), v) != vertices.end();
}

const EdgeDecl* TemporalDigraph::find_edge(const std::string& id) const {
  for (const auto& e : edges)
    if (e.id == id) return &e;
  return nullptr;
}

const std::set<Timestamp>& TemporalDigraph::activity(const std::string& v) const {
  auto it = gamma.find(v);
  return it == gamma.end() ? kNoTimes : it->second;
}

const std::set<TimePair>& TemporalDigraph::pairs(const std::string& edge_id) const {
  auto it = lambda.find(edge_id);
  return it == lambda.end() ? kNoPairs : it->second;
}

bool TemporalDigraph::active_at(const std::string& v, Timestamp t) const {
  return activity(v).count(t) > 0;
}

bool TemporalDigraph::has_temporal_vertex(const TemporalVertex& tv) const {
  return active_at(tv.vertex, tv.time);
}

Timestamp TemporalDigraph::lifetime() const {
  Timestamp best = -1;
  for (const auto& [v, times] : gamma)
    if (!times.empty()) best = std::max(best, *times.rbegin());
  return best;
}

std::vector<TemporalVertex> TemporalDigraph::temporal_vertices() const {
  std::vector<TemporalVertex> out;
  for (const auto& v : vertices)
    for (Timestamp t : activity(v)) out.push_back({v, t});
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<TemporalEdge> TemporalDigraph::temporal_edges() const {
  std::vector<TemporalEdge> out;
  for (const auto& e : edges)
    for (const TimePair& tp : pairs(e.id)) out.push_back({e.id, tp.dep, tp.arr});
  return out;
}

bool TemporalDigraph::interval_activity() const {
  for (const auto& v : vertices) {
    const auto& times = activity(v);
    if (times.empty()) continue;
    if (*times.rbegin() - *times.begin() + 1 != static_cast<Timestamp>(times.size()))
      return false;
  }
  return true;
}

std::string to_string(Spanning s) {
  return s == Spanning::temporal ? "temporal" : "vertex";
}

std::string to_string(Disjointness d) {
  return d == Disjointness::edge ? "edge" : "t-edge";
}

bool StaticDigraph::has_vertex(const std::string& v) const {
  return std::find(vertices.begin(), vertices.end(), v) != vertices.end();
}

std::vector<std::string> validate(const TemporalDigraph& g) {
  std::vector<std::string> out;
  std::set<std::string> declared(g.vertices.begin(), g.vertices.end());
  if (declared.size() != g.vertices.size())
    out.push_back("duplicate vertex declaration");

  std::set<std::string> edge_ids;
  for (const auto& e : g.edges) {
    if (!edge_ids.insert(e.id).second)
      out.push_back("duplicate edge id " + e.id);
    if (!declared.count(e.tail))
      out.push_back("edge " + e.id + " tail " + e.tail + " is not a declared vertex");
    if (!declared.count(e.head))
      out.push_back("edge " + e.id + " head " + e.head + " is not a declared vertex");
  }

  for (const auto& [v, times] : g.gamma) {
    if (!declared.count(v))
      out.push_back("activity for undeclared vertex " + v);
    for (Timestamp t : times)
      if (t < 0) out.push_back("negative timestamp for vertex " + v);
  }

  for (const auto& [id, ps] : g.lambda) {
    const EdgeDecl* e = g.find_edge(id);
    if (!e) {
      out.push_back("time pairs for undeclared edge " + id);
      continue;
    }
    for (const TimePair& tp : ps) {
      std::ostringstream what;
      what << id << " (" << tp.dep << "," << tp.arr << ")";
      if (tp.dep < 0 || tp.arr < 0)
        out.push_back("negative timestamp on " + what.str());
      if (tp.dep > tp.arr)
        out.push_back("pair-order violation on " + what.str());
      else {
        if (!g.active_at(e->tail, tp.dep))
          out.push_back("tail inactive at departure on " + what.str());
        if (!g.active_at(e->head, tp.arr))
          out.push_back("head inactive at arrival on " + what.str());
      }
    }
  }

  if (!g.vertices.empty() && g.lifetime() < 0)
    out.push_back("no vertex is ever active (lifetime undefined)");
  return out;
}

void require_valid(const TemporalDigraph& g) {
  auto violations = validate(g);
  if (violations.empty()) return;
  std::string msg = "invalid temporal digraph:";
  for (const auto& v : violations) msg += "\n  " + v;
  throw std::invalid_argument(msg);
}

ExpandedDigraph expand(const TemporalDigraph& g, int waiting_multiplicity) {
  require_valid(g);
  if (waiting_multiplicity < 0)
    throw std::invalid_argument("waiting multiplicity must be non-negative");

  ExpandedDigraph out;
  for (const auto& v : g.vertices)
    for (Timestamp t : g.activity(v)) out.nodes.insert({v, t});

  for (const auto& e : g.edges)
    for (const TimePair& tp : g.pairs(e.id))
      out.temporal_arcs.push_back({{e.tail, tp.dep}, {e.head, tp.arr}, e.id});

  if (waiting_multiplicity > 0) {
    for (const auto& v : g.vertices) {
      const auto& times = g.activity(v);
      for (Timestamp t : times)
        if (times.count(t + 1))
          out.waiting_arcs.push_back({v, t, waiting_multiplicity});
    }
  }
  return out;
}

StaticDigraph snapshot(const TemporalDigraph& g, Timestamp t) {
  require_valid(g);
  StaticDigraph out;
  for (const auto& v : g.vertices)
    if (g.active_at(v, t)) out.vertices.push_back(v);
  for (const auto& e : g.edges)
    if (g.pairs(e.id).count({t, t})) out.edges.push_back(e);
  return out;
}

ArrivalGraph arrival_graph(const TemporalDigraph& g, Timestamp j) {
  require_valid(g);
  ArrivalGraph out;

  std::set<std::string> verts;
  for (const auto& v : g.vertices)
    if (g.active_at(v, j)) verts.insert(v);

  for (const auto& e : g.edges) {
    bool arrives = false;
    for (const TimePair& tp : g.pairs(e.id))
      if (tp.arr == j) arrives = true;
    if (arrives) {
      out.graph.edges.push_back(e);
      verts.insert(e.tail);
      verts.insert(e.head);
    }
  }

  for (const auto& v : g.vertices)
    if (verts.count(v)) out.graph.vertices.push_back(v);

  for (const auto& v : g.vertices)
    if (g.active_at(v, j - 1) && g.active_at(v, j))
      out.common_wait_roots.insert(v);
  return out;
}

}  // namespace tbr
