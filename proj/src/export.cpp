#include "routeway/export.hpp"

#include <set>

#include <json.hpp>

namespace routeway {

namespace {

std::string node_label(const Waypoint& w) {
  if (w.display) return *w.display;
  if (w.statements.size() == 1) return w.statements.front();
  std::string out = "(";
  for (std::size_t i = 0; i < w.statements.size(); ++i) {
    if (i) out += ", ";
    out += w.statements[i];
  }
  out += ")";
  return out;
}

std::string dot_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out.push_back(c);
  }
  return out;
}

}  // namespace

ExportGraph to_export_graph(const RouteGraph& g, const std::vector<Waypoint>& anchors) {
  std::set<WaypointKey> anchor_keys;
  for (const auto& a : anchors) anchor_keys.insert(waypoint_key(a));

  ExportGraph out;
  std::vector<std::string> ids(g.vertex_count());
  std::set<std::string> taken;
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    const Waypoint& w = g.vertices[v];
    std::string id = w.id.empty() ? "v" + std::to_string(v) : w.id;
    while (!taken.insert(id).second) id += "_" + std::to_string(v);
    ids[v] = id;
    out.nodes.push_back({id, node_label(w), anchor_keys.count(waypoint_key(w)) != 0});
  }
  for (const auto& e : g.edges) {
    out.edges.push_back({ids[e.from], ids[e.to], e.trail.id, e.from_two_way});
  }
  return out;
}

std::string export_dot(const ExportGraph& g) {
  std::string out = "digraph {\n";
  for (const auto& n : g.nodes) {
    out += "  \"" + dot_escape(n.id) + "\" [label=\"" + dot_escape(n.label) + "\"";
    if (n.anchor) out += ", shape=doublecircle";
    out += "];\n";
  }
  for (const auto& e : g.edges) {
    out += "  \"" + dot_escape(e.from) + "\" -> \"" + dot_escape(e.to) + "\" [label=\"" +
           dot_escape(e.trail) + "\"];\n";
  }
  out += "}\n";
  return out;
}

std::string export_json(const ExportGraph& g) {
  nlohmann::ordered_json doc;
  doc["nodes"] = nlohmann::ordered_json::array();
  for (const auto& n : g.nodes) {
    doc["nodes"].push_back({{"id", n.id}, {"label", n.label}, {"anchor", n.anchor}});
  }
  doc["edges"] = nlohmann::ordered_json::array();
  for (const auto& e : g.edges) {
    doc["edges"].push_back(
        {{"from", e.from}, {"to", e.to}, {"trail", e.trail}, {"two_way_origin", e.two_way_origin}});
  }
  return doc.dump(2) + "\n";
}

}  // namespace routeway
