// rwy: parse, lint and analyze .rwy routeway documents.
//
// Exit codes: 0 success (and lint without errors), 1 lint errors,
// 2 parse failure, 3 query error.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "routeway/core.hpp"
#include "routeway/dsl.hpp"
#include "routeway/export.hpp"
#include "routeway/geometry.hpp"
#include "routeway/instantiate.hpp"
#include "routeway/refine.hpp"

namespace d = routeway::dsl;
using json = nlohmann::ordered_json;
using namespace routeway;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitLint = 1;
constexpr int kExitParse = 2;
constexpr int kExitQuery = 3;

int load(const std::string& path, d::Document& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in.good()) {
    std::cerr << "error: cannot read '" << path << "'\n";
    return kExitParse;
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  auto result = d::parse(buffer.str());
  for (const auto& diag : result.diagnostics) std::cerr << d::format(diag, path) << "\n";
  if (!result.ok()) return kExitParse;
  out = std::move(*result.document);
  return kExitOk;
}

BaseField pick_basefield(const d::Document& doc, const std::string& requested) {
  if (requested.empty()) return doc.first_basefield();
  const BaseField* field = doc.find_basefield(requested);
  if (!field) throw Error("unknown-basefield", "no base field named '" + requested + "'");
  return *field;
}

Waypoint pick_waypoint(const d::Document& doc, const std::string& id) {
  const Waypoint* w = doc.find_waypoint(id);
  if (!w) throw Error("unknown-waypoint", "no waypoint named '" + id + "'");
  return *w;
}

RouteGraph graph_for(const d::Document& doc, const std::string& field_id) {
  return build_graph(doc.all_units(), pick_basefield(doc, field_id)).graph;
}

json distance_json(const Distance& dist) {
  json out;
  out["finite"] = dist.is_finite();
  if (dist.is_finite()) out["value"] = dist.value();
  return out;
}

json unit_json(const RouteUnit& u) {
  json out;
  if (!u.initial.id.empty()) out["from"] = u.initial.id;
  out["from_statements"] = u.initial.statements;
  if (!u.terminal.id.empty()) out["to"] = u.terminal.id;
  out["to_statements"] = u.terminal.statements;
  out["trail"] = u.trail ? json(u.trail->id) : json(nullptr);
  out["two_way"] = u.two_way;
  if (u.substitution) {
    json subst = json::object();
    for (const auto& [param, term] : u.substitution->bindings) subst[param] = term;
    out["with"] = subst;
  }
  if (u.compass) out["compass"] = *u.compass;
  return out;
}

std::string unit_text(const RouteUnit& u) {
  auto name = [](const Waypoint& w) {
    return w.id.empty() ? (w.statements.size() == 1 ? w.statements.front() : "(tuple)") : w.id;
  };
  std::string arrow = u.trail
                          ? (u.two_way ? "<=[" + u.trail->id + "]=>" : "=[" + u.trail->id + "]=>")
                          : std::string(u.two_way ? "<=>" : "=>");
  return name(u.initial) + " " + arrow + " " + name(u.terminal);
}

std::vector<std::string> sorted_ids(const std::vector<Waypoint>& ws) {
  std::vector<std::string> ids;
  ids.reserve(ws.size());
  for (const auto& w : ws) ids.push_back(w.id);
  std::sort(ids.begin(), ids.end());
  return ids;
}

void emit(const json& doc, bool as_json, const std::string& human) {
  if (as_json)
    std::cout << doc.dump(2) << "\n";
  else
    std::cout << human;
}

void maybe_write_dot(const std::string& path, const RouteGraph& g,
                     const std::vector<Waypoint>& anchors = {}) {
  if (path.empty()) return;
  std::ofstream out(path, std::ios::binary);
  if (!out.good()) throw Error("io-error", "cannot write '" + path + "'");
  out << export_dot(to_export_graph(g, anchors));
}

struct CommonOpts {
  std::string file;
  std::string basefield;
  bool as_json = false;
  std::string dot_path;
};

int run_lint(const CommonOpts& opts) {
  std::ifstream in(opts.file, std::ios::binary);
  if (!in.good()) {
    std::cerr << "error: cannot read '" << opts.file << "'\n";
    return kExitParse;
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  auto result = d::parse(buffer.str());
  std::vector<d::Diagnostic> diags = result.diagnostics;
  bool parse_failed = !result.ok();
  if (result.ok()) diags = d::lint(*result.document);

  if (opts.as_json) {
    json out;
    out["query"] = "lint";
    out["parse_ok"] = !parse_failed;
    out["diagnostics"] = json::array();
    for (const auto& diag : diags) {
      out["diagnostics"].push_back({{"severity", d::is_error(diag) ? "error" : "warning"},
                                    {"code", diag.code},
                                    {"line", diag.where.line},
                                    {"column", diag.where.column},
                                    {"message", diag.message}});
    }
    std::cout << out.dump(2) << "\n";
  } else {
    for (const auto& diag : diags) std::cout << d::format(diag, opts.file) << "\n";
  }
  if (parse_failed) return kExitParse;
  return d::has_errors(diags) ? kExitLint : kExitOk;
}

int run_dist(const CommonOpts& opts, const std::string& from, const std::string& to) {
  d::Document doc;
  if (int rc = load(opts.file, doc)) return rc;
  RouteGraph g = graph_for(doc, opts.basefield);
  Waypoint a = pick_waypoint(doc, from), b = pick_waypoint(doc, to);
  Distance dist = distance(g, a, b);
  auto geo = geodesic(g, a, b);
  maybe_write_dot(opts.dot_path, g);

  json out;
  out["query"] = "dist";
  out["basefield"] = g.basefield.id;
  out["from"] = from;
  out["to"] = to;
  out["distance"] = distance_json(dist);
  if (geo) {
    out["geodesic"] = json::array();
    for (const auto& u : geo->units()) out["geodesic"].push_back(unit_json(u));
  } else {
    out["geodesic"] = nullptr;
  }

  std::string human = to_string(dist) + "\n";
  if (geo && geo->length() > 0) {
    human += "geodesic:\n";
    for (const auto& u : geo->units()) human += "  " + unit_text(u) + "\n";
  }
  emit(out, opts.as_json, human);
  return kExitOk;
}

int run_interval(const CommonOpts& opts, const std::string& from, const std::string& to) {
  d::Document doc;
  if (int rc = load(opts.file, doc)) return rc;
  RouteGraph g = graph_for(doc, opts.basefield);
  auto members = interval(g, pick_waypoint(doc, from), pick_waypoint(doc, to));
  maybe_write_dot(opts.dot_path, g);

  auto ids = sorted_ids(members);
  json out;
  out["query"] = "interval";
  out["basefield"] = g.basefield.id;
  out["from"] = from;
  out["to"] = to;
  out["waypoints"] = ids;

  std::string human;
  for (const auto& id : ids) human += id + "\n";
  emit(out, opts.as_json, human);
  return kExitOk;
}

int run_excess(const CommonOpts& opts, const std::string& via, const std::string& from,
               const std::string& to) {
  d::Document doc;
  if (int rc = load(opts.file, doc)) return rc;
  RouteGraph g = graph_for(doc, opts.basefield);
  Waypoint f = pick_waypoint(doc, via), a = pick_waypoint(doc, from), b = pick_waypoint(doc, to);
  std::size_t ex = excess(g, f, a, b);
  bool perfect = is_perfect(g, f, a, b);
  bool essential = is_essential(g, f, a, b);
  maybe_write_dot(opts.dot_path, g);

  json out;
  out["query"] = "excess";
  out["basefield"] = g.basefield.id;
  out["via"] = via;
  out["from"] = from;
  out["to"] = to;
  out["excess"] = ex;
  out["perfect"] = perfect;
  out["essential"] = essential;

  std::string human = std::to_string(ex) + "\n";
  human += std::string("perfect: ") + (perfect ? "yes" : "no") + "\n";
  human += std::string("essential: ") + (essential ? "yes" : "no") + "\n";
  emit(out, opts.as_json, human);
  return kExitOk;
}

int run_closure(const CommonOpts& opts, const std::vector<std::string>& anchors,
                const std::string& to) {
  d::Document doc;
  if (int rc = load(opts.file, doc)) return rc;
  RouteGraph g = graph_for(doc, opts.basefield);
  std::vector<Waypoint> anchor_points;
  for (const auto& id : anchors) anchor_points.push_back(pick_waypoint(doc, id));
  auto closed = closure(g, anchor_points);
  maybe_write_dot(opts.dot_path, g, anchor_points);

  auto ids = sorted_ids(closed);
  json out;
  out["query"] = "closure";
  out["basefield"] = g.basefield.id;
  out["anchors"] = anchors;
  out["waypoints"] = ids;

  std::string human;
  for (const auto& id : ids) human += id + "\n";
  if (!to.empty()) {
    Distance dist = anchor_distance(g, anchor_points, pick_waypoint(doc, to));
    out["anchor_distance"] = {{"to", to}, {"distance", distance_json(dist)}};
    human += "anchor distance to " + to + ": " + to_string(dist) + "\n";
  }
  emit(out, opts.as_json, human);
  return kExitOk;
}

int run_refines(const CommonOpts& opts, const std::string& gamma_name,
                const std::string& eta_name) {
  d::Document doc;
  if (int rc = load(opts.file, doc)) return rc;
  Routeway gamma = doc.build_routeway(gamma_name);
  Routeway eta = doc.build_routeway(eta_name);
  auto witness = refines(gamma, eta);

  json out;
  out["query"] = "refines";
  out["gamma"] = gamma_name;
  out["eta"] = eta_name;
  out["refines"] = witness.has_value();
  if (witness) {
    out["witness"] = json::array();
    for (const auto& b : witness->blocks) {
      out["witness"].push_back(
          {{"gamma_unit", b.gamma_index}, {"eta_begin", b.eta_begin}, {"eta_end", b.eta_end}});
    }
  } else {
    out["witness"] = nullptr;
  }
  out["presentation_equivalent"] = witness.has_value() && refines(eta, gamma).has_value();

  std::string human = witness ? "yes\n" : "no\n";
  if (witness) {
    for (const auto& b : witness->blocks) {
      human += "  unit " + std::to_string(b.gamma_index) + " -> eta units [" +
               std::to_string(b.eta_begin) + ", " + std::to_string(b.eta_end) + ")\n";
    }
  }
  emit(out, opts.as_json, human);
  return kExitOk;
}

int run_simulate(const CommonOpts& opts, const std::string& template_name,
                 const std::vector<std::string>& binds, const std::vector<std::string>& assume,
                 const std::vector<std::string>& deny, bool declare_invalid) {
  d::Document doc;
  if (int rc = load(opts.file, doc)) return rc;
  Routeway tmpl = doc.build_routeway(template_name);

  Substitution subst;
  for (const auto& bind : binds) {
    auto eq = bind.find('=');
    if (eq == std::string::npos || eq == 0)
      throw Error("invalid-substitution", "expected param=term, got '" + bind + "'");
    std::string param = bind.substr(0, eq);
    std::string term = bind.substr(eq + 1);
    if (!term.empty() && term.front() == ':') term.erase(0, 1);  // accept x=:a too
    if (term.empty()) throw Error("invalid-substitution", "empty term for '" + param + "'");
    subst.bindings[param] = term;
  }
  std::map<std::string, bool> hypotheses;
  for (const auto& h : assume) hypotheses[h] = true;
  for (const auto& h : deny) hypotheses[h] = false;

  SimulationResult result = instantiate_routeway(tmpl, subst, hypotheses);
  apply_declared_invalidity(result, declare_invalid);

  json out;
  out["query"] = "simulate";
  out["template"] = template_name;
  out["verdict"] = to_string(result.verdict);
  out["hypotheses"] = json::array();
  for (const auto& h : result.hypothesis_status) {
    out["hypotheses"].push_back(
        {{"trail", h.trail_id}, {"hypothesis", h.hypothesis}, {"holds", h.holds}});
  }
  out["routeway"] = json::array();
  for (const auto& u : result.routeway.units()) out["routeway"].push_back(unit_json(u));

  std::string human = "verdict: " + to_string(result.verdict) + "\n";
  for (const auto& h : result.hypothesis_status) {
    human += "  " + h.trail_id + " requires \"" + h.hypothesis + "\": " +
             (h.holds ? "holds" : "fails") + "\n";
  }
  auto tuple = [](const std::vector<std::string>& parts) {
    if (parts.size() == 1) return parts.front();
    std::string s = "(";
    for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? ", " : "") + parts[i];
    return s + ")";
  };
  for (const auto& u : result.routeway.units()) {
    human += "  " + tuple(u.initial.statements) + " " +
             (u.trail ? "=[" + u.trail->id + "]=>" : "=>") + " " + tuple(u.terminal.statements) +
             "\n";
  }
  emit(out, opts.as_json, human);
  return kExitOk;
}

int run_coverage(const CommonOpts& opts, const std::string& atlas_name) {
  d::Document doc;
  if (int rc = load(opts.file, doc)) return rc;
  std::string name = atlas_name;
  if (name.empty()) {
    auto atlases = doc.atlases();
    if (atlases.empty()) throw Error("unknown-atlas", "the document declares no atlas");
    name = atlases.front()->name;
  }
  const d::AtlasDecl* decl = doc.find_atlas(name);
  Atlas atlas = doc.build_atlas(name);  // throws unknown-atlas for bad names
  auto report = atlas_coverage(atlas);

  json out;
  out["query"] = "coverage";
  out["atlas"] = name;
  out["covering"] = report.covering;
  out["targets"] = json::array();
  std::string human;
  for (const auto& entry : report.entries) {
    json t;
    t["waypoint"] = entry.target.id;
    t["covered"] = entry.witness.has_value();
    if (entry.witness) {
      const auto& [ri, wi] = *entry.witness;
      const std::string& roadmap_name = decl->roadmaps[ri];
      const d::RoadmapDecl* roadmap = doc.find_roadmap(roadmap_name);
      t["roadmap"] = roadmap_name;
      t["routeway"] = roadmap->routeways[wi];
      human += entry.target.id + ": covered by roadmap " + roadmap_name + ", routeway " +
               roadmap->routeways[wi] + "\n";
    } else {
      human += entry.target.id + ": uncovered\n";
    }
    out["targets"].push_back(t);
  }
  human += std::string("atlas is ") + (report.covering ? "covering" : "not covering") + "\n";
  emit(out, opts.as_json, human);
  return kExitOk;
}

int run_filtration(const CommonOpts& opts, const std::string& name,
                   const std::vector<std::string>& pair_specs) {
  d::Document doc;
  if (int rc = load(opts.file, doc)) return rc;
  std::string filtration_name = name;
  if (filtration_name.empty()) {
    auto decls = doc.filtrations();
    if (decls.empty()) throw Error("unknown-filtration", "the document declares no filtration");
    filtration_name = decls.front()->name;
  }
  const d::FiltrationDecl* decl = doc.find_filtration(filtration_name);
  if (!decl) throw Error("unknown-filtration", "no filtration named '" + filtration_name + "'");

  std::vector<std::pair<Waypoint, Waypoint>> pairs;
  std::vector<std::pair<std::string, std::string>> pair_names;
  for (const auto& spec : pair_specs) {
    auto colon = spec.find(':');
    if (colon == std::string::npos)
      throw Error("invalid-pair", "expected FROM:TO, got '" + spec + "'");
    std::string from = spec.substr(0, colon), to = spec.substr(colon + 1);
    pairs.emplace_back(pick_waypoint(doc, from), pick_waypoint(doc, to));
    pair_names.emplace_back(from, to);
  }

  auto units = doc.all_units();
  std::vector<RouteGraph> graphs;
  for (const auto& stage : decl->stages) {
    const BaseField* field = doc.find_basefield(stage);
    if (!field) throw Error("unknown-basefield", "no base field named '" + stage + "'");
    graphs.push_back(build_graph(units, *field).graph);
  }
  auto report = filtration_report(graphs, pairs);

  json out;
  out["query"] = "filtration";
  out["name"] = filtration_name;
  out["pairs"] = json::array();
  for (const auto& [pfrom, pto] : pair_names) out["pairs"].push_back({{"from", pfrom}, {"to", pto}});
  out["stages"] = json::array();
  for (const auto& stage : report.stages) {
    json s;
    s["basefield"] = stage.basefield_id;
    s["distances"] = json::array();
    for (const auto& dist : stage.distances) s["distances"].push_back(distance_json(dist));
    out["stages"].push_back(s);
  }
  out["monotone"] = report.monotone();

  std::string human;
  for (std::size_t p = 0; p < pair_names.size(); ++p) {
    human += pair_names[p].first + " -> " + pair_names[p].second + ":";
    for (const auto& stage : report.stages)
      human += " " + stage.basefield_id + "=" + to_string(stage.distances[p]);
    human += "\n";
  }
  human += std::string("monotone: ") + (report.monotone() ? "yes" : "no") + "\n";
  emit(out, opts.as_json, human);
  return kExitOk;
}

int run_export(const CommonOpts& opts, const std::string& fmt,
               const std::vector<std::string>& anchors, const std::string& out_path) {
  d::Document doc;
  if (int rc = load(opts.file, doc)) return rc;
  RouteGraph g = graph_for(doc, opts.basefield);
  std::vector<Waypoint> anchor_points;
  for (const auto& id : anchors) anchor_points.push_back(pick_waypoint(doc, id));
  ExportGraph graph = to_export_graph(g, anchor_points);
  std::string text = fmt == "json" ? export_json(graph) : export_dot(graph);
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out.good()) throw Error("io-error", "cannot write '" + out_path + "'");
    out << text;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"routeway toolkit: lint .rwy documents and query their route geometry"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::string from, to, via, gamma, eta, template_name, atlas_name, filtration_name;
  std::string fmt = "dot", out_path;
  std::vector<std::string> anchors, binds, assume, deny, pair_specs;
  bool declare_invalid = false;

  auto add_common = [&](CLI::App* sub, bool with_field = true) {
    sub->add_option("file", opts.file, "the .rwy document")->required();
    sub->add_flag("--json", opts.as_json, "emit JSON instead of text");
    if (with_field) {
      sub->add_option("--in", opts.basefield,
                      "base field to build the graph in (default: first declared)");
      sub->add_option("--dot", opts.dot_path, "also write the graph as DOT to this path");
    }
  };

  auto* lint = app.add_subcommand("lint", "parse and lint a document");
  add_common(lint, false);

  auto* dist = app.add_subcommand("dist", "route distance and a geodesic between two waypoints");
  add_common(dist);
  dist->add_option("--from", from)->required();
  dist->add_option("--to", to)->required();

  auto* interval_cmd =
      app.add_subcommand("interval", "waypoints on some geodesic between two waypoints");
  add_common(interval_cmd);
  interval_cmd->add_option("--from", from)->required();
  interval_cmd->add_option("--to", to)->required();

  auto* excess_cmd = app.add_subcommand("excess", "detour cost of routing through a waypoint");
  add_common(excess_cmd);
  excess_cmd->add_option("--via", via)->required();
  excess_cmd->add_option("--from", from)->required();
  excess_cmd->add_option("--to", to)->required();

  auto* closure_cmd = app.add_subcommand("closure", "everything reachable from the anchor set");
  add_common(closure_cmd);
  closure_cmd->add_option("--anchors", anchors, "anchor waypoints")->required()->delimiter(',');
  closure_cmd->add_option("--to", to, "also report the anchor distance to this waypoint");

  auto* refines_cmd = app.add_subcommand("refines", "does the second routeway refine the first?");
  add_common(refines_cmd, false);
  refines_cmd->add_option("--gamma", gamma, "the coarser routeway")->required();
  refines_cmd->add_option("--eta", eta, "the candidate refinement")->required();

  auto* simulate = app.add_subcommand("simulate", "specialize a parameterized routeway");
  add_common(simulate, false);
  simulate->add_option("--template", template_name, "the parameterized routeway")->required();
  simulate->add_option("--bind", binds, "parameter binding param=term (repeatable)");
  simulate->add_option("--assume", assume, "declare a hypothesis to hold (repeatable)");
  simulate->add_option("--deny", deny, "declare a hypothesis to fail (repeatable)");
  simulate->add_flag("--declare-invalid", declare_invalid,
                     "declare the specialized statement invalid (counterexample check)");

  auto* coverage = app.add_subcommand("coverage", "audit an atlas against its targets");
  add_common(coverage, false);
  coverage->add_option("--atlas", atlas_name, "atlas name (default: first declared)");

  auto* filtration_cmd =
      app.add_subcommand("filtration", "distances along an increasing base-field sequence");
  add_common(filtration_cmd, false);
  filtration_cmd->add_option("--name", filtration_name, "filtration name (default: first)");
  filtration_cmd->add_option("--pair", pair_specs, "waypoint pair FROM:TO (repeatable)")
      ->required();

  auto* export_cmd = app.add_subcommand("export", "emit the route graph as DOT or JSON");
  add_common(export_cmd);
  export_cmd->add_option("--format", fmt, "dot or json")->check(CLI::IsMember({"dot", "json"}));
  export_cmd->add_option("--anchors", anchors, "mark these waypoints as anchors")->delimiter(',');
  export_cmd->add_option("-o,--output", out_path, "write here instead of stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*lint) return run_lint(opts);
    if (*dist) return run_dist(opts, from, to);
    if (*interval_cmd) return run_interval(opts, from, to);
    if (*excess_cmd) return run_excess(opts, via, from, to);
    if (*closure_cmd) return run_closure(opts, anchors, to);
    if (*refines_cmd) return run_refines(opts, gamma, eta);
    if (*simulate) return run_simulate(opts, template_name, binds, assume, deny, declare_invalid);
    if (*coverage) return run_coverage(opts, atlas_name);
    if (*filtration_cmd) return run_filtration(opts, filtration_name, pair_specs);
    if (*export_cmd) return run_export(opts, fmt, anchors, out_path);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitQuery;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitQuery;
  }
  return kExitOk;
}
