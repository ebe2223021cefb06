#include "routeway/core.hpp"

#include <algorithm>
#include <cctype>

namespace routeway {

std::string normalize_statement(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!out.empty()) pending_space = true;
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(c);
  }
  return out;
}

std::vector<std::string> Waypoint::normalized() const {
  std::vector<std::string> out;
  out.reserve(statements.size());
  for (const auto& s : statements) out.push_back(normalize_statement(s));
  return out;
}

WaypointKey waypoint_key(const Waypoint& w) { return w.normalized(); }

bool operator==(const Waypoint& a, const Waypoint& b) {
  return a.normalized() == b.normalized();
}

bool operator==(const Substitution& a, const Substitution& b) {
  return a.bindings == b.bindings;
}

namespace {

bool is_run_char(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

// Can run[pos..] be decomposed into a concatenation of the given symbols?
// Tries longer symbols first so the split is deterministic.
bool decompose_run(std::string_view run, std::size_t pos,
                   const std::vector<std::string_view>& symbols,
                   std::vector<char>& dead, std::vector<std::string_view>& parts) {
  if (pos == run.size()) return true;
  if (dead[pos]) return false;
  for (std::string_view sym : symbols) {
    if (run.compare(pos, sym.size(), sym) != 0) continue;
    parts.push_back(sym);
    if (decompose_run(run, pos + sym.size(), symbols, dead, parts)) return true;
    parts.pop_back();
  }
  dead[pos] = 1;
  return false;
}

}  // namespace

std::string substitute_params(std::string_view text,
                              const std::map<std::string, std::string>& bindings) {
  if (bindings.empty()) return std::string(text);
  std::vector<std::string_view> symbols;
  symbols.reserve(bindings.size());
  for (const auto& [param, term] : bindings) {
    (void)term;
    if (!param.empty()) symbols.push_back(param);
  }
  std::sort(symbols.begin(), symbols.end(), [](std::string_view a, std::string_view b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return a < b;
  });

  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (!is_run_char(text[i])) {
      out.push_back(text[i++]);
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && is_run_char(text[j])) ++j;
    std::string_view run = text.substr(i, j - i);
    std::vector<char> dead(run.size(), 0);
    std::vector<std::string_view> parts;
    if (decompose_run(run, 0, symbols, dead, parts)) {
      for (std::string_view p : parts) out += bindings.at(std::string(p));
    } else {
      out += run;
    }
    i = j;
  }
  return out;
}

bool operator==(const Trail& a, const Trail& b) {
  return a.id == b.id && a.statement == b.statement && a.params == b.params &&
         a.hypotheses == b.hypotheses && a.premise == b.premise &&
         a.conclusion == b.conclusion;
}

bool operator==(const RouteUnit& a, const RouteUnit& b) {
  return a.initial == b.initial && a.terminal == b.terminal && a.trail == b.trail &&
         a.substitution == b.substitution && a.two_way == b.two_way &&
         a.compass == b.compass;
}

Routeway Routeway::empty(Waypoint at) {
  Routeway g;
  g.start_ = at;
  g.end_ = std::move(at);
  return g;
}

Routeway Routeway::single(RouteUnit unit) {
  std::vector<RouteUnit> units;
  units.push_back(std::move(unit));
  return make(std::move(units));
}

Routeway Routeway::make(std::vector<RouteUnit> units) {
  if (units.empty())
    throw Error("broken-chain", "cannot derive endpoints of an empty unit list; use Routeway::empty");
  for (std::size_t i = 0; i + 1 < units.size(); ++i) {
    if (units[i].terminal != units[i + 1].initial)
      throw Error("broken-chain",
                  "unit " + std::to_string(i) + " ends at a waypoint that unit " +
                      std::to_string(i + 1) + " does not start from");
  }
  Routeway g;
  g.start_ = units.front().initial;
  g.end_ = units.back().terminal;
  g.units_ = std::move(units);
  return g;
}

bool operator==(const Routeway& a, const Routeway& b) {
  return a.start() == b.start() && a.end() == b.end() && a.units() == b.units();
}

bool is_defective(const RouteUnit& u) { return !u.trail.has_value(); }

namespace {

bool tuple_matches(const std::vector<std::string>& templ,
                   const std::map<std::string, std::string>& bindings,
                   const Waypoint& w) {
  const std::vector<std::string> got = w.normalized();
  if (templ.size() != got.size()) return false;
  for (std::size_t i = 0; i < templ.size(); ++i) {
    if (normalize_statement(substitute_params(templ[i], bindings)) != got[i]) return false;
  }
  return true;
}

// The single-application check: the unit's waypoints must be the trail's
// templates under its substitution (identity when no substitution is given).
bool single_application_matches(const RouteUnit& u, const Trail& t) {
  std::map<std::string, std::string> bindings;
  if (u.substitution) {
    if (u.substitution->bindings.size() != t.params.size()) return false;
    for (const auto& p : t.params) {
      if (u.substitution->bindings.count(p) == 0) return false;
    }
    bindings = u.substitution->bindings;
  } else {
    for (const auto& p : t.params) bindings[p] = p;
  }
  const bool forward = tuple_matches(*t.premise, bindings, u.initial) &&
                       tuple_matches(*t.conclusion, bindings, u.terminal);
  if (forward) return true;
  if (u.two_way) {
    return tuple_matches(*t.premise, bindings, u.terminal) &&
           tuple_matches(*t.conclusion, bindings, u.initial);
  }
  return false;
}

}  // namespace

bool single_application_ok(const RouteUnit& u) {
  if (!u.trail || !u.trail->has_templates()) return true;
  return single_application_matches(u, *u.trail);
}

std::optional<std::string> irreducibility_failure(const RouteUnit& u, const BaseField& field) {
  if (is_defective(u)) return "defective-unit";
  if (!field.contains(u.trail->id)) return "reducible-unit";
  // A template-less trail gives nothing to check the single application
  // against; the declaration is accepted and the linter warns.
  if (!single_application_ok(u)) return "template-mismatch";
  return std::nullopt;
}

bool is_irreducible(const RouteUnit& u, const BaseField& field) {
  return !irreducibility_failure(u, field).has_value();
}

bool is_irreducible_routeway(const Routeway& g, const BaseField& field) {
  for (const auto& u : g.units()) {
    if (!is_irreducible(u, field)) return false;
  }
  return true;
}

Routeway concat(const Routeway& g1, const Routeway& g2) {
  if (g1.end() != g2.start())
    throw Error("endpoint-mismatch", "left routeway ends where the right one does not start");
  if (g1.length() == 0 && g2.length() == 0) return g1;
  std::vector<RouteUnit> units;
  units.reserve(g1.length() + g2.length());
  units.insert(units.end(), g1.units().begin(), g1.units().end());
  units.insert(units.end(), g2.units().begin(), g2.units().end());
  return Routeway::make(std::move(units));
}

std::optional<std::size_t> RouteGraph::vertex_index(const Waypoint& w) const {
  auto it = vertex_lookup.find(waypoint_key(w));
  if (it == vertex_lookup.end()) return std::nullopt;
  return it->second;
}

GraphBuildResult build_graph(const std::vector<RouteUnit>& units, const BaseField& field) {
  GraphBuildResult result;
  RouteGraph& g = result.graph;
  g.basefield = field;

  // One symbolic id must not name two different statement tuples.
  std::map<std::string, WaypointKey> claimed;
  auto claim = [&claimed](const Waypoint& w) {
    if (w.id.empty()) return;
    auto key = waypoint_key(w);
    auto [it, fresh] = claimed.emplace(w.id, key);
    if (!fresh && it->second != key)
      throw Error("duplicate-waypoint-id",
                  "waypoint id '" + w.id + "' is used for two different statement tuples");
  };
  for (const auto& u : units) {
    claim(u.initial);
    claim(u.terminal);
  }

  auto add_vertex = [&g](const Waypoint& w) {
    auto key = waypoint_key(w);
    auto [it, fresh] = g.vertex_lookup.emplace(key, g.vertices.size());
    if (fresh) {
      g.vertices.push_back(w);
      g.out_edges.emplace_back();
      g.in_edges.emplace_back();
    }
    return it->second;
  };
  auto add_edge = [&g](std::size_t from, std::size_t to, const RouteUnit& u, bool reversed) {
    GraphEdge e;
    e.from = from;
    e.to = to;
    e.trail = *u.trail;
    e.substitution = u.substitution;
    e.from_two_way = u.two_way;
    (void)reversed;
    g.out_edges[from].push_back(g.edges.size());
    g.in_edges[to].push_back(g.edges.size());
    g.edges.push_back(std::move(e));
  };

  for (std::size_t i = 0; i < units.size(); ++i) {
    const RouteUnit& u = units[i];
    if (auto code = irreducibility_failure(u, field)) {
      std::string what;
      if (*code == "defective-unit")
        what = "unit has no trail";
      else if (*code == "reducible-unit")
        what = "trail '" + u.trail->id + "' is not in base field '" + field.id + "'";
      else
        what = "unit does not match the templates of trail '" + u.trail->id + "'";
      result.rejected.push_back({i, *code, what});
      continue;
    }
    std::size_t a = add_vertex(u.initial);
    std::size_t b = add_vertex(u.terminal);
    add_edge(a, b, u, false);
    if (u.two_way) add_edge(b, a, u, true);
  }
  return result;
}

Roadmap Roadmap::make(Waypoint start, Waypoint destination, std::vector<Routeway> routeways) {
  if (routeways.empty()) throw Error("empty-roadmap", "a roadmap needs at least one routeway");
  for (std::size_t i = 0; i < routeways.size(); ++i) {
    if (routeways[i].start() != start || routeways[i].end() != destination)
      throw Error("endpoint-mismatch",
                  "routeway " + std::to_string(i) + " does not run between the roadmap endpoints");
  }
  return Roadmap{std::move(start), std::move(destination), std::move(routeways)};
}

bool routeway_visits(const Routeway& g, const Waypoint& w) {
  if (g.start() == w) return true;
  for (const auto& u : g.units()) {
    if (u.terminal == w) return true;
  }
  return false;
}

CoverageReport atlas_coverage(const Atlas& atlas) {
  CoverageReport report;
  for (const auto& target : atlas.targets) {
    CoverageEntry entry;
    entry.target = target;
    for (std::size_t r = 0; r < atlas.roadmaps.size() && !entry.witness; ++r) {
      const auto& ways = atlas.roadmaps[r].routeways;
      for (std::size_t w = 0; w < ways.size(); ++w) {
        if (routeway_visits(ways[w], target)) {
          entry.witness = std::make_pair(r, w);
          break;
        }
      }
    }
    if (!entry.witness) report.covering = false;
    report.entries.push_back(std::move(entry));
  }
  return report;
}

}  // namespace routeway
