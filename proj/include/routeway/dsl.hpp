#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "routeway/core.hpp"

namespace routeway::dsl {

/// 1-based source span, editor convention.
struct SourceSpan {
  int line = 1;
  int column = 1;
  int end_line = 1;
  int end_column = 1;
};

struct Diagnostic {
  enum class Severity { Error, Warning };
  Severity severity = Severity::Error;
  std::string code;
  SourceSpan where;
  std::string message;
};

inline bool is_error(const Diagnostic& d) { return d.severity == Diagnostic::Severity::Error; }
bool has_errors(const std::vector<Diagnostic>& diags);
std::string format(const Diagnostic& d, std::string_view filename = "<input>");

// ---------------------------------------------------------------------------
// Declarations, kept referential (ids, not resolved objects) so the document
// serializes back exactly as written. Source spans never take part in
// equality.
// ---------------------------------------------------------------------------

struct WaypointDecl {
  Waypoint waypoint;
  SourceSpan loc;
};
bool operator==(const WaypointDecl& a, const WaypointDecl& b);

struct TrailDecl {
  Trail trail;
  SourceSpan loc;
};
bool operator==(const TrailDecl& a, const TrailDecl& b);

/// A base field block entry: either a trail declared inline or a bare
/// reference to a trail declared elsewhere.
struct BaseFieldEntry {
  std::string trail_id;
  std::optional<TrailDecl> decl;  // present when declared inline
};
bool operator==(const BaseFieldEntry& a, const BaseFieldEntry& b);

struct BaseFieldDecl {
  std::string id;
  std::optional<std::string> extends;
  std::vector<BaseFieldEntry> entries;
  SourceSpan loc;
};
bool operator==(const BaseFieldDecl& a, const BaseFieldDecl& b);

struct UnitDecl {
  std::string initial;  // waypoint id
  std::string terminal;
  std::optional<std::string> trail;  // absent = defective
  std::optional<Substitution> substitution;
  bool two_way = false;
  std::optional<std::string> compass;
  SourceSpan loc;
};
bool operator==(const UnitDecl& a, const UnitDecl& b);

struct RoutewayDecl {
  std::string name;
  std::string basefield;
  std::string start;  // waypoint ids
  std::string end;
  std::vector<UnitDecl> units;
  SourceSpan loc;
};
bool operator==(const RoutewayDecl& a, const RoutewayDecl& b);

struct RoadmapDecl {
  std::string name;
  std::string start;
  std::string end;
  std::vector<std::string> routeways;
  SourceSpan loc;
};
bool operator==(const RoadmapDecl& a, const RoadmapDecl& b);

struct AtlasDecl {
  std::string name;
  std::vector<std::string> targets;   // waypoint ids
  std::vector<std::string> roadmaps;  // roadmap names
  SourceSpan loc;
};
bool operator==(const AtlasDecl& a, const AtlasDecl& b);

struct FiltrationDecl {
  std::string name;
  std::vector<std::string> stages;  // base field ids, increasing
  SourceSpan loc;
};
bool operator==(const FiltrationDecl& a, const FiltrationDecl& b);

/// Free-text compass note attached to a named routeway.
struct CompassDecl {
  std::string routeway;
  std::string text;
  SourceSpan loc;
};
bool operator==(const CompassDecl& a, const CompassDecl& b);

using Item = std::variant<BaseFieldDecl, WaypointDecl, TrailDecl, RoutewayDecl, RoadmapDecl,
                          AtlasDecl, FiltrationDecl, CompassDecl>;

/// A parsed .rwy document. Items keep declaration order; lookup tables are
/// built once after a successful parse. Immutable afterwards.
class Document {
 public:
  std::vector<Item> items;

  const Waypoint* find_waypoint(const std::string& id) const;
  const Trail* find_trail(const std::string& id) const;
  const BaseField* find_basefield(const std::string& id) const;  // resolved, effective trails
  const RoutewayDecl* find_routeway(const std::string& name) const;
  const RoadmapDecl* find_roadmap(const std::string& name) const;
  const AtlasDecl* find_atlas(const std::string& name) const;
  const FiltrationDecl* find_filtration(const std::string& name) const;

  std::vector<const BaseFieldDecl*> basefields() const;
  std::vector<const WaypointDecl*> waypoints() const;
  std::vector<const RoutewayDecl*> routeways() const;
  std::vector<const RoadmapDecl*> roadmaps() const;
  std::vector<const AtlasDecl*> atlases() const;
  std::vector<const FiltrationDecl*> filtrations() const;
  /// Every trail in the document, top-level and inline, declaration order.
  std::vector<const Trail*> trails() const;

  /// Compass notes keyed by routeway name, plus "name#index" for units
  /// carrying an inline note.
  std::map<std::string, std::string> annotations() const;

  RouteUnit resolve_unit(const UnitDecl& decl) const;  // throws unresolved-reference
  std::vector<RouteUnit> units_of(const RoutewayDecl& decl) const;
  /// All units of all routeways, declaration order. This is the unit pool a
  /// route graph is built from.
  std::vector<RouteUnit> all_units() const;

  /// Validated core objects. Throw unknown-... on a bad name and
  /// broken-chain when the declared units do not chain.
  Routeway build_routeway(const std::string& name) const;
  Roadmap build_roadmap(const std::string& name) const;
  Atlas build_atlas(const std::string& name) const;

  BaseField first_basefield() const;  // throws no-basefield

  /// Rebuild lookup tables from `items`. The parser calls this; call it again
  /// after constructing a Document by hand.
  void finalize();

 private:
  std::map<std::string, Waypoint> waypoint_table_;
  std::map<std::string, Trail> trail_table_;
  std::map<std::string, BaseField> basefield_table_;
  std::map<std::string, std::size_t> routeway_items_;
  std::map<std::string, std::size_t> roadmap_items_;
  std::map<std::string, std::size_t> atlas_items_;
  std::map<std::string, std::size_t> filtration_items_;
};

bool operator==(const Document& a, const Document& b);
inline bool operator!=(const Document& a, const Document& b) { return !(a == b); }

struct ParseResult {
  std::optional<Document> document;  // present iff no error diagnostics
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return document.has_value(); }
};

/// Total parser: every input produces either a document or at least one
/// error diagnostic, never an exception.
ParseResult parse(std::string_view source);

/// Lint a successfully parsed document. Errors: DEFECTIVE_UNIT,
/// REDUCIBLE_UNIT, TEMPLATE_MISMATCH, BROKEN_CHAIN. Warnings:
/// UNVERIFIABLE_SINGLE_APPLICATION, UNUSED_TRAIL. Deterministic order
/// (by location, then code).
std::vector<Diagnostic> lint(const Document& doc);

/// Canonical text form; parse(serialize(doc)) equals doc structurally and
/// declaration order is preserved.
std::string serialize(const Document& doc);

}  // namespace routeway::dsl
