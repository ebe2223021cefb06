#include "routeway/geometry.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <tuple>

namespace routeway {

std::size_t Distance::value() const {
  if (!value_) throw Error("infinite-distance", "no finite value for an infinite distance");
  return *value_;
}

Distance Distance::operator+(const Distance& other) const {
  if (!value_ || !other.value_) return infinite();
  return finite(*value_ + *other.value_);
}

bool operator<(const Distance& a, const Distance& b) {
  if (!a.value_) return false;             // infinity is never below anything
  if (!b.value_) return true;              // finite < infinity
  return *a.value_ < *b.value_;
}

std::string to_string(const Distance& d) {
  return d.is_finite() ? std::to_string(d.value()) : "inf";
}

namespace {

constexpr std::size_t kUnreached = std::numeric_limits<std::size_t>::max();

// Unit-weight BFS over the multigraph. `skip` removes one vertex; `reverse`
// walks in-edges instead of out-edges.
std::vector<std::size_t> bfs(const RouteGraph& g, const std::vector<std::size_t>& sources,
                             bool reverse = false,
                             std::optional<std::size_t> skip = std::nullopt) {
  std::vector<std::size_t> dist(g.vertex_count(), kUnreached);
  std::deque<std::size_t> queue;
  for (std::size_t s : sources) {
    if (skip && *skip == s) continue;
    if (dist[s] == kUnreached) {
      dist[s] = 0;
      queue.push_back(s);
    }
  }
  while (!queue.empty()) {
    std::size_t v = queue.front();
    queue.pop_front();
    const auto& slots = reverse ? g.in_edges[v] : g.out_edges[v];
    for (std::size_t ei : slots) {
      const GraphEdge& e = g.edges[ei];
      std::size_t next = reverse ? e.from : e.to;
      if (skip && *skip == next) continue;
      if (dist[next] == kUnreached) {
        dist[next] = dist[v] + 1;
        queue.push_back(next);
      }
    }
  }
  return dist;
}

RouteUnit unit_from_edge(const RouteGraph& g, const GraphEdge& e) {
  RouteUnit u;
  u.initial = g.vertices[e.from];
  u.terminal = g.vertices[e.to];
  u.trail = e.trail;
  u.substitution = e.substitution;
  u.two_way = e.from_two_way;
  return u;
}

}  // namespace

Distance distance(const RouteGraph& g, const Waypoint& from, const Waypoint& to) {
  if (from == to) return Distance::finite(0);
  auto si = g.vertex_index(from);
  auto ti = g.vertex_index(to);
  if (!si || !ti) return Distance::infinite();
  auto dist = bfs(g, {*si});
  if (dist[*ti] == kUnreached) return Distance::infinite();
  return Distance::finite(dist[*ti]);
}

std::optional<Routeway> geodesic(const RouteGraph& g, const Waypoint& from, const Waypoint& to) {
  if (from == to) return Routeway::empty(from);
  auto si = g.vertex_index(from);
  auto ti = g.vertex_index(to);
  if (!si || !ti) return std::nullopt;
  auto dist = bfs(g, {*si});
  if (dist[*ti] == kUnreached) return std::nullopt;

  std::vector<RouteUnit> units(dist[*ti]);
  std::size_t cursor = *ti;
  for (std::size_t step = dist[*ti]; step >= 1; --step) {
    const GraphEdge* best = nullptr;
    std::size_t best_index = 0;
    for (std::size_t ei : g.in_edges[cursor]) {
      const GraphEdge& e = g.edges[ei];
      if (dist[e.from] != step - 1) continue;
      if (!best || std::make_tuple(e.trail.id, g.vertices[e.from].id, ei) <
                       std::make_tuple(best->trail.id, g.vertices[best->from].id, best_index)) {
        best = &e;
        best_index = ei;
      }
    }
    units[step - 1] = unit_from_edge(g, *best);
    cursor = best->from;
  }
  return Routeway::make(std::move(units));
}

std::vector<Waypoint> interval(const RouteGraph& g, const Waypoint& from, const Waypoint& to) {
  Distance d = distance(g, from, to);
  if (!d.is_finite())
    throw Error("infinite-distance", "no routeway between the interval endpoints");
  auto si = g.vertex_index(from);
  if (!si) return {from};  // isolated endpoint, so from = to
  auto ti = g.vertex_index(to);
  auto forward = bfs(g, {*si});
  auto backward = bfs(g, {*ti}, /*reverse=*/true);
  std::vector<Waypoint> out;
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    if (forward[v] == kUnreached || backward[v] == kUnreached) continue;
    if (forward[v] + backward[v] == d.value()) out.push_back(g.vertices[v]);
  }
  return out;
}

std::size_t excess(const RouteGraph& g, const Waypoint& via, const Waypoint& from,
                   const Waypoint& to) {
  struct Leg {
    const char* name;
    Distance d;
  };
  const Leg legs[] = {{"from->to", distance(g, from, to)},
                      {"from->via", distance(g, from, via)},
                      {"via->to", distance(g, via, to)}};
  for (const Leg& leg : legs) {
    if (!leg.d.is_finite())
      throw Error("infinite-distance", std::string("leg ") + leg.name + " is infinite");
  }
  return legs[1].d.value() + legs[2].d.value() - legs[0].d.value();
}

bool is_perfect(const RouteGraph& g, const Waypoint& via, const Waypoint& from,
                const Waypoint& to) {
  Distance d = distance(g, from, to);
  if (!d.is_finite())
    throw Error("infinite-distance", "no routeway between the queried endpoints");
  Distance through = distance(g, from, via) + distance(g, via, to);
  return through == d;
}

bool is_essential(const RouteGraph& g, const Waypoint& via, const Waypoint& from,
                  const Waypoint& to) {
  Distance d = distance(g, from, to);
  if (!d.is_finite())
    throw Error("infinite-distance", "no routeway between the queried endpoints");
  if (via == from || via == to) return true;
  auto vi = g.vertex_index(via);
  if (!vi) return false;
  auto si = g.vertex_index(from);
  auto ti = g.vertex_index(to);
  // d finite and from != to, so both endpoints are real vertices.
  auto dist = bfs(g, {*si}, /*reverse=*/false, /*skip=*/*vi);
  // A geodesic avoiding `via` exists iff some walk of the same length does.
  return dist[*ti] == kUnreached || dist[*ti] > d.value();
}

Distance anchor_distance(const RouteGraph& g, const std::vector<Waypoint>& anchors,
                         const Waypoint& x) {
  if (anchors.empty()) throw Error("empty-anchor-set", "anchor distance needs a nonempty set");
  std::vector<std::size_t> sources;
  for (const auto& s : anchors) {
    if (s == x) return Distance::finite(0);
    if (auto i = g.vertex_index(s)) sources.push_back(*i);
  }
  auto xi = g.vertex_index(x);
  if (!xi || sources.empty()) return Distance::infinite();
  auto dist = bfs(g, sources);
  if (dist[*xi] == kUnreached) return Distance::infinite();
  return Distance::finite(dist[*xi]);
}

std::vector<Waypoint> closure(const RouteGraph& g, const std::vector<Waypoint>& anchors) {
  std::map<WaypointKey, Waypoint> reached;
  std::vector<std::size_t> sources;
  for (const auto& s : anchors) {
    reached.emplace(waypoint_key(s), s);
    if (auto i = g.vertex_index(s)) sources.push_back(*i);
  }
  auto dist = bfs(g, sources);
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    if (!sources.empty() && dist[v] != kUnreached)
      reached.emplace(waypoint_key(g.vertices[v]), g.vertices[v]);
  }
  std::vector<Waypoint> out;
  out.reserve(reached.size());
  for (auto& [key, w] : reached) {
    (void)key;
    out.push_back(std::move(w));
  }
  return out;
}

FiltrationReport filtration_report(const std::vector<RouteGraph>& stages,
                                   const std::vector<std::pair<Waypoint, Waypoint>>& pairs) {
  for (std::size_t i = 1; i < stages.size(); ++i) {
    const auto& prev = stages[i - 1].basefield.trails;
    const auto& cur = stages[i].basefield.trails;
    if (!std::includes(cur.begin(), cur.end(), prev.begin(), prev.end()))
      throw Error("non-monotone-basefields",
                  "base field '" + stages[i].basefield.id + "' does not contain '" +
                      stages[i - 1].basefield.id + "'");
  }
  FiltrationReport report;
  report.pairs = pairs;
  for (const auto& g : stages) {
    FiltrationStage stage;
    stage.basefield_id = g.basefield.id;
    for (const auto& [a, b] : pairs) stage.distances.push_back(distance(g, a, b));
    report.stages.push_back(std::move(stage));
  }
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    for (std::size_t s = 1; s < report.stages.size(); ++s) {
      if (report.stages[s].distances[p] > report.stages[s - 1].distances[p])
        report.violations.push_back({p, s});
    }
  }
  return report;
}

}  // namespace routeway
