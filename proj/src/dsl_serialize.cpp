#include <cctype>
#include <sstream>
#include <variant>

#include "routeway/dsl.hpp"

namespace routeway::dsl {

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out.push_back(c);
    }
  }
  out.push_back('"');
  return out;
}

std::string tuple_text(const std::vector<std::string>& parts) {
  if (parts.size() == 1) return quote(parts.front());
  std::string out = "(";
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ", ";
    out += quote(parts[i]);
  }
  out += ")";
  return out;
}

bool bare_term_ok(const std::string& term) {
  if (term.empty()) return false;
  for (char c : term) {
    if (std::isspace(static_cast<unsigned char>(c)) || c == ',' || c == ']' || c == '}' ||
        c == '"' || c == '#')
      return false;
  }
  return true;
}

std::string params_text(const std::vector<std::string>& params) {
  if (params.empty()) return "";
  std::string out = "(";
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (i) out += ", ";
    out += params[i];
  }
  out += ")";
  return out;
}

std::string subst_text(const Substitution& subst) {
  std::string out = " with ";
  bool first = true;
  for (const auto& [param, term] : subst.bindings) {
    if (!first) out += ", ";
    first = false;
    out += param + "=:" + (bare_term_ok(term) ? term : quote(term));
  }
  return out;
}

void emit_trail(std::ostringstream& out, const Trail& trail, int indent) {
  std::string pad(indent, ' ');
  bool short_form = trail.hypotheses.empty() && !trail.has_templates();
  out << pad << "trail " << trail.id << params_text(trail.params);
  if (short_form) {
    out << ": " << quote(trail.statement) << "\n";
    return;
  }
  std::string inner(indent + 2, ' ');
  out << " {\n";
  if (!trail.statement.empty()) out << inner << "statement: " << quote(trail.statement) << "\n";
  if (!trail.hypotheses.empty()) {
    out << inner << "requires: ";
    for (std::size_t i = 0; i < trail.hypotheses.size(); ++i) {
      if (i) out << ", ";
      out << quote(trail.hypotheses[i]);
    }
    out << "\n";
  }
  if (trail.premise) out << inner << "premise: " << tuple_text(*trail.premise) << "\n";
  if (trail.conclusion) out << inner << "conclusion: " << tuple_text(*trail.conclusion) << "\n";
  out << pad << "}\n";
}

std::string arrow_text(const UnitDecl& unit) {
  if (!unit.trail) return unit.two_way ? "<=>" : "=>";
  std::string inner = *unit.trail;
  if (unit.substitution) inner += subst_text(*unit.substitution);
  return (unit.two_way ? "<=[" : "=[") + inner + "]=>";
}

struct ItemWriter {
  std::ostringstream& out;

  void operator()(const BaseFieldDecl& decl) const {
    out << "basefield " << decl.id;
    if (decl.extends) out << " extends " << *decl.extends;
    out << " {\n";
    for (const auto& entry : decl.entries) {
      if (entry.decl) {
        emit_trail(out, entry.decl->trail, 2);
      } else {
        out << "  trail " << entry.trail_id << "\n";
      }
    }
    out << "}\n";
  }

  void operator()(const WaypointDecl& decl) const {
    out << "waypoint " << decl.waypoint.id << ": " << tuple_text(decl.waypoint.statements);
    if (decl.waypoint.display) out << " display " << quote(*decl.waypoint.display);
    out << "\n";
  }

  void operator()(const TrailDecl& decl) const { emit_trail(out, decl.trail, 0); }

  void operator()(const RoutewayDecl& decl) const {
    out << "routeway " << decl.name << " in " << decl.basefield << " from " << decl.start
        << " to " << decl.end << " {\n";
    for (const auto& unit : decl.units) {
      out << "  " << unit.initial << " " << arrow_text(unit) << " " << unit.terminal;
      if (unit.compass) out << " @ " << quote(*unit.compass);
      out << "\n";
    }
    out << "}\n";
  }

  void operator()(const RoadmapDecl& decl) const {
    out << "roadmap " << decl.name << " from " << decl.start << " to " << decl.end << " {\n";
    for (const auto& name : decl.routeways) out << "  routeway " << name << "\n";
    out << "}\n";
  }

  void operator()(const AtlasDecl& decl) const {
    out << "atlas " << decl.name << " {\n";
    for (const auto& target : decl.targets) out << "  target " << target << "\n";
    for (const auto& roadmap : decl.roadmaps) out << "  roadmap " << roadmap << "\n";
    out << "}\n";
  }

  void operator()(const FiltrationDecl& decl) const {
    out << "filtration " << decl.name << " { ";
    for (std::size_t i = 0; i < decl.stages.size(); ++i) {
      if (i) out << ", ";
      out << decl.stages[i];
    }
    out << " }\n";
  }

  void operator()(const CompassDecl& decl) const {
    out << "compass " << decl.routeway << ": " << quote(decl.text) << "\n";
  }
};

}  // namespace

std::string serialize(const Document& doc) {
  std::ostringstream out;
  bool first = true;
  for (const auto& item : doc.items) {
    if (!first) out << "\n";
    first = false;
    std::visit(ItemWriter{out}, item);
  }
  return out.str();
}

}  // namespace routeway::dsl
