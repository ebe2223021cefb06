#pragma once

#include <string>
#include <vector>

#include "routeway/core.hpp"

namespace routeway {

/// Flattened, serialization-ready view of a route graph (or a roadmap
/// subgraph). Node ids are unique; edges reference node ids.
struct ExportNode {
  std::string id;
  std::string label;
  bool anchor = false;
};

struct ExportEdge {
  std::string from;
  std::string to;
  std::string trail;
  bool two_way_origin = false;
};

struct ExportGraph {
  std::vector<ExportNode> nodes;
  std::vector<ExportEdge> edges;
};

/// Nodes keep graph order; labels prefer the waypoint's display text.
/// Waypoints listed in `anchors` get the anchor flag.
ExportGraph to_export_graph(const RouteGraph& g, const std::vector<Waypoint>& anchors = {});

/// One digraph; anchors use a distinct node shape. Byte-deterministic.
std::string export_dot(const ExportGraph& g);

/// Schema-stable JSON with deterministic key order. Byte-deterministic.
std::string export_json(const ExportGraph& g);

}  // namespace routeway
