#include <algorithm>
#include <set>
#include <variant>

#include "routeway/dsl.hpp"

namespace routeway::dsl {

namespace {

Diagnostic make(Diagnostic::Severity sev, std::string code, const SourceSpan& where,
                std::string message) {
  return Diagnostic{sev, std::move(code), where, std::move(message)};
}

}  // namespace

std::vector<Diagnostic> lint(const Document& doc) {
  std::vector<Diagnostic> diags;
  std::set<std::string> used_trails;

  for (const RoutewayDecl* rw : doc.routeways()) {
    const BaseField* field = doc.find_basefield(rw->basefield);

    for (const UnitDecl& decl : rw->units) {
      if (!decl.trail) {
        diags.push_back(make(Diagnostic::Severity::Error, "DEFECTIVE_UNIT", decl.loc,
                             "unit from '" + decl.initial + "' to '" + decl.terminal +
                                 "' omits its trail"));
        continue;
      }
      used_trails.insert(*decl.trail);
      const Trail* trail = doc.find_trail(*decl.trail);
      if (!trail) continue;  // the parser reports unresolved references

      bool in_field = field && field->contains(trail->id);
      if (!in_field) {
        diags.push_back(make(Diagnostic::Severity::Error, "REDUCIBLE_UNIT", decl.loc,
                             "trail '" + trail->id + "' is not in base field '" + rw->basefield +
                                 "'; the unit is not a single atomic step there"));
      }
      bool domain_ok = true;
      if (decl.substitution) {
        const auto& bindings = decl.substitution->bindings;
        domain_ok = bindings.size() == trail->params.size() &&
                    std::all_of(trail->params.begin(), trail->params.end(),
                                [&bindings](const std::string& p) { return bindings.count(p); });
        if (!domain_ok) {
          diags.push_back(make(Diagnostic::Severity::Error, "TEMPLATE_MISMATCH", decl.loc,
                               "substitution does not bind exactly the parameters of trail '" +
                                   trail->id + "'"));
        }
      }
      if (trail->has_templates()) {
        RouteUnit unit = doc.resolve_unit(decl);
        if (domain_ok && !single_application_ok(unit)) {
          diags.push_back(make(Diagnostic::Severity::Error, "TEMPLATE_MISMATCH", decl.loc,
                               "unit does not match the premise/conclusion templates of trail '" +
                                   trail->id + "' under its substitution"));
        }
      } else if (in_field) {
        diags.push_back(make(Diagnostic::Severity::Warning, "UNVERIFIABLE_SINGLE_APPLICATION",
                             decl.loc,
                             "trail '" + trail->id +
                                 "' has no templates; the single-application condition is "
                                 "accepted as declared"));
      }
    }

    // Chain integrity, including the declared endpoints.
    const Waypoint* declared_start = doc.find_waypoint(rw->start);
    const Waypoint* declared_end = doc.find_waypoint(rw->end);
    if (rw->units.empty()) {
      if (declared_start && declared_end && *declared_start != *declared_end) {
        diags.push_back(make(Diagnostic::Severity::Error, "BROKEN_CHAIN", rw->loc,
                             "empty routeway '" + rw->name +
                                 "' must have equal start and destination"));
      }
      continue;
    }
    auto waypoint_of = [&doc](const std::string& id) { return doc.find_waypoint(id); };
    const Waypoint* first = waypoint_of(rw->units.front().initial);
    if (declared_start && first && *first != *declared_start) {
      diags.push_back(make(Diagnostic::Severity::Error, "BROKEN_CHAIN", rw->units.front().loc,
                           "first unit starts at '" + rw->units.front().initial +
                               "', not at the declared start '" + rw->start + "'"));
    }
    for (std::size_t i = 0; i + 1 < rw->units.size(); ++i) {
      const Waypoint* terminal = waypoint_of(rw->units[i].terminal);
      const Waypoint* next_initial = waypoint_of(rw->units[i + 1].initial);
      if (terminal && next_initial && *terminal != *next_initial) {
        diags.push_back(make(Diagnostic::Severity::Error, "BROKEN_CHAIN", rw->units[i + 1].loc,
                             "unit " + std::to_string(i + 1) + " starts at '" +
                                 rw->units[i + 1].initial + "' but the previous unit ends at '" +
                                 rw->units[i].terminal + "'"));
      }
    }
    const Waypoint* last = waypoint_of(rw->units.back().terminal);
    if (declared_end && last && *last != *declared_end) {
      diags.push_back(make(Diagnostic::Severity::Error, "BROKEN_CHAIN", rw->units.back().loc,
                           "last unit ends at '" + rw->units.back().terminal +
                               "', not at the declared destination '" + rw->end + "'"));
    }
  }

  // Trails no unit ever uses.
  for (const auto& item : doc.items) {
    const TrailDecl* decl = std::get_if<TrailDecl>(&item);
    if (decl && used_trails.count(decl->trail.id) == 0) {
      diags.push_back(make(Diagnostic::Severity::Warning, "UNUSED_TRAIL", decl->loc,
                           "trail '" + decl->trail.id + "' is declared but never used by a unit"));
    }
    if (const auto* bf = std::get_if<BaseFieldDecl>(&item)) {
      for (const auto& entry : bf->entries) {
        if (entry.decl && used_trails.count(entry.trail_id) == 0) {
          diags.push_back(make(Diagnostic::Severity::Warning, "UNUSED_TRAIL", entry.decl->loc,
                               "trail '" + entry.trail_id +
                                   "' is declared but never used by a unit"));
        }
      }
    }
  }

  std::stable_sort(diags.begin(), diags.end(), [](const Diagnostic& a, const Diagnostic& b) {
    if (a.where.line != b.where.line) return a.where.line < b.where.line;
    if (a.where.column != b.where.column) return a.where.column < b.where.column;
    return a.code < b.code;
  });
  return diags;
}

}  // namespace routeway::dsl
