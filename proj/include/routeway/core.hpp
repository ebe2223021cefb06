#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "routeway/error.hpp"

namespace routeway {

/// Trim leading/trailing whitespace and collapse internal runs to one space.
std::string normalize_statement(std::string_view text);

/// A statement or finite tuple of statements; a vertex of the route graph.
/// Two waypoints are equal iff their normalized statement tuples are equal;
/// the symbolic id is a document-level handle, not the identity.
struct Waypoint {
  std::string id;
  std::vector<std::string> statements;  // nonempty
  std::optional<std::string> display;

  std::vector<std::string> normalized() const;
};

using WaypointKey = std::vector<std::string>;
WaypointKey waypoint_key(const Waypoint& w);

bool operator==(const Waypoint& a, const Waypoint& b);
inline bool operator!=(const Waypoint& a, const Waypoint& b) { return !(a == b); }

/// Parameter bindings (param =: term) specializing a parameterized trail.
struct Substitution {
  std::map<std::string, std::string> bindings;
};
bool operator==(const Substitution& a, const Substitution& b);
inline bool operator!=(const Substitution& a, const Substitution& b) { return !(a == b); }

/// Substitute parameter occurrences in `text`. Occurrences are matched on
/// maximal runs of letters/underscores: a run is rewritten only when it
/// decomposes entirely into bound parameter symbols (longest symbol first),
/// so "cx" with params c,x becomes the two bindings concatenated while "cos"
/// with param c is left alone. Substitution is simultaneous: bound terms are
/// never re-scanned.
std::string substitute_params(std::string_view text,
                              const std::map<std::string, std::string>& bindings);

/// A justification usable as a single-step edge label. A trail declared with
/// premise/conclusion templates is itself a general route unit; concrete
/// units are instances of it under parameter substitution.
struct Trail {
  std::string id;
  std::string statement;
  std::vector<std::string> params;
  std::vector<std::string> hypotheses;
  std::optional<std::vector<std::string>> premise;     // template over params
  std::optional<std::vector<std::string>> conclusion;  // present iff premise is

  bool has_templates() const { return premise.has_value() && conclusion.has_value(); }
};
bool operator==(const Trail& a, const Trail& b);
inline bool operator!=(const Trail& a, const Trail& b) { return !(a == b); }

/// One displayed inference step. Defective when the trail is omitted.
/// A two-way unit justifies both directions under the same trail.
struct RouteUnit {
  Waypoint initial;
  Waypoint terminal;
  std::optional<Trail> trail;
  std::optional<Substitution> substitution;
  bool two_way = false;
  std::optional<std::string> compass;  // motivation note; not part of the graph structure
};
bool operator==(const RouteUnit& a, const RouteUnit& b);
inline bool operator!=(const RouteUnit& a, const RouteUnit& b) { return !(a == b); }

/// A finite chain of route units. Construction validates that the terminal
/// waypoint of each unit equals the initial waypoint of the next; the empty
/// routeway at a waypoint has start = end and length 0.
class Routeway {
 public:
  static Routeway empty(Waypoint at);
  static Routeway single(RouteUnit unit);
  /// Throws broken-chain on an empty list or mismatched consecutive waypoints.
  static Routeway make(std::vector<RouteUnit> units);

  const std::vector<RouteUnit>& units() const { return units_; }
  const Waypoint& start() const { return start_; }
  const Waypoint& end() const { return end_; }
  std::size_t length() const { return units_.size(); }

 private:
  Routeway() = default;
  std::vector<RouteUnit> units_;
  Waypoint start_;
  Waypoint end_;
};
bool operator==(const Routeway& a, const Routeway& b);
inline bool operator!=(const Routeway& a, const Routeway& b) { return !(a == b); }

/// The set of trails treated as atomic for an audience. `trails` is the
/// effective set: own declarations plus everything inherited via `extends`.
struct BaseField {
  std::string id;
  std::set<std::string> trails;
  std::optional<std::string> extends;

  bool contains(const std::string& trail_id) const { return trails.count(trail_id) != 0; }
};

bool is_defective(const RouteUnit& u);

/// The single-application check: the unit's waypoints must equal its trail's
/// templates under the unit's substitution (identity when none is given);
/// two-way units may match in either orientation. True when the trail is
/// absent or has no templates — there is nothing to check against.
bool single_application_ok(const RouteUnit& u);

/// Why a unit is not admissible as a single atomic step under `field`,
/// or nullopt when it is. Codes: defective-unit, reducible-unit,
/// template-mismatch.
std::optional<std::string> irreducibility_failure(const RouteUnit& u, const BaseField& field);

bool is_irreducible(const RouteUnit& u, const BaseField& field);
bool is_irreducible_routeway(const Routeway& g, const BaseField& field);

/// Chain g2 after g1. Throws endpoint-mismatch unless g1.end = g2.start.
Routeway concat(const Routeway& g1, const Routeway& g2);

struct GraphEdge {
  std::size_t from = 0;
  std::size_t to = 0;
  Trail trail;
  std::optional<Substitution> substitution;
  bool from_two_way = false;  // edge materialized from a two-way unit
};

/// Labeled directed multigraph (quiver) whose edges are the irreducible
/// route units under one base field. Immutable after build_graph.
struct RouteGraph {
  BaseField basefield;
  std::vector<Waypoint> vertices;  // first-appearance order
  std::vector<GraphEdge> edges;    // admission order; two-way units expand to two edges
  std::vector<std::vector<std::size_t>> out_edges;  // vertex index -> edge indices
  std::vector<std::vector<std::size_t>> in_edges;
  std::map<WaypointKey, std::size_t> vertex_lookup;

  std::optional<std::size_t> vertex_index(const Waypoint& w) const;
  std::size_t vertex_count() const { return vertices.size(); }
  std::size_t edge_count() const { return edges.size(); }
};

struct GraphBuildNote {
  std::size_t unit_index = 0;
  std::string code;  // defective-unit | reducible-unit | template-mismatch
  std::string message;
};

struct GraphBuildResult {
  RouteGraph graph;
  std::vector<GraphBuildNote> rejected;
};

/// Admit every unit passing the irreducibility check as one edge (two for
/// two-way units); everything else is reported in `rejected`, never silently
/// dropped. Throws duplicate-waypoint-id when one id carries two different
/// statement tuples.
GraphBuildResult build_graph(const std::vector<RouteUnit>& units, const BaseField& field);

/// A chosen collection of routeways sharing a start and destination.
struct Roadmap {
  Waypoint start;
  Waypoint destination;
  std::vector<Routeway> routeways;  // nonempty

  /// Throws empty-roadmap / endpoint-mismatch when a member disagrees.
  static Roadmap make(Waypoint start, Waypoint destination, std::vector<Routeway> routeways);
};

/// A collection of roadmaps meant to cover a set of target waypoints;
/// coverage is audited, not enforced at construction.
struct Atlas {
  std::vector<Roadmap> roadmaps;
  std::vector<Waypoint> targets;
};

/// Does `w` appear as a waypoint of `g` (an endpoint of some unit, or the
/// basepoint of an empty routeway)?
bool routeway_visits(const Routeway& g, const Waypoint& w);

struct CoverageEntry {
  Waypoint target;
  std::optional<std::pair<std::size_t, std::size_t>> witness;  // (roadmap, routeway) index
};

struct CoverageReport {
  std::vector<CoverageEntry> entries;
  bool covering = true;
};

CoverageReport atlas_coverage(const Atlas& atlas);

}  // namespace routeway
