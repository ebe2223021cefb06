#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "routeway/core.hpp"

namespace routeway {

/// Nonnegative count of route units, or +infinity when no routeway exists.
/// Infinity is an explicit state, not a sentinel value.
class Distance {
 public:
  static Distance infinite() { return Distance(); }
  static Distance finite(std::size_t n) {
    Distance d;
    d.value_ = n;
    return d;
  }

  bool is_finite() const { return value_.has_value(); }
  /// Throws infinite-distance when not finite.
  std::size_t value() const;

  /// Infinity-absorbing addition.
  Distance operator+(const Distance& other) const;

  friend bool operator==(const Distance& a, const Distance& b) { return a.value_ == b.value_; }
  friend bool operator!=(const Distance& a, const Distance& b) { return !(a == b); }
  /// Every finite value compares below infinity.
  friend bool operator<(const Distance& a, const Distance& b);
  friend bool operator<=(const Distance& a, const Distance& b) { return a < b || a == b; }
  friend bool operator>(const Distance& a, const Distance& b) { return !(a <= b); }
  friend bool operator>=(const Distance& a, const Distance& b) { return !(a < b); }

 private:
  Distance() = default;
  std::optional<std::size_t> value_;
};

std::string to_string(const Distance& d);

/// Minimal number of edges over all directed walks from -> to; 0 iff the
/// waypoints are equal; infinite iff unreachable. Waypoints absent from the
/// graph are treated as isolated vertices.
Distance distance(const RouteGraph& g, const Waypoint& from, const Waypoint& to);

/// Some routeway realizing distance(g, from, to), or nullopt when that
/// distance is infinite. Tie-breaks are deterministic: walking backwards
/// from the destination, prefer the in-edge with the lexicographically
/// smallest (trail id, source waypoint id, edge index).
std::optional<Routeway> geodesic(const RouteGraph& g, const Waypoint& from, const Waypoint& to);

/// All waypoints F with d(from,F) + d(F,to) = d(from,to); equivalently the
/// waypoints lying on at least one geodesic. Throws infinite-distance when
/// the endpoints are not connected. Result is in vertex order.
std::vector<Waypoint> interval(const RouteGraph& g, const Waypoint& from, const Waypoint& to);

/// The detour cost d(from,via) + d(via,to) - d(from,to). Throws
/// infinite-distance naming the first infinite leg.
std::size_t excess(const RouteGraph& g, const Waypoint& via, const Waypoint& from,
                   const Waypoint& to);

/// `via` lies on some geodesic from -> to. Throws infinite-distance when
/// d(from,to) is infinite.
bool is_perfect(const RouteGraph& g, const Waypoint& via, const Waypoint& from,
                const Waypoint& to);

/// `via` lies on every geodesic from -> to, decided by deleting the vertex
/// and checking whether the distance grows. Throws infinite-distance when
/// d(from,to) is infinite.
bool is_essential(const RouteGraph& g, const Waypoint& via, const Waypoint& from,
                  const Waypoint& to);

/// min over s in anchors of d(s, x). Throws empty-anchor-set.
Distance anchor_distance(const RouteGraph& g, const std::vector<Waypoint>& anchors,
                         const Waypoint& x);

/// Everything reachable from the anchor set, each anchor included via the
/// empty routeway. Result is deduplicated and sorted by statement tuple.
std::vector<Waypoint> closure(const RouteGraph& g, const std::vector<Waypoint>& anchors);

struct FiltrationStage {
  std::string basefield_id;
  std::vector<Distance> distances;  // one per queried pair
};

/// Per-stage distances along an increasing sequence of base fields. A
/// distance that grows from one stage to the next contradicts base-field
/// monotonicity and is flagged as a violation (it would mean the graphs were
/// built inconsistently).
struct FiltrationReport {
  struct Violation {
    std::size_t pair_index = 0;
    std::size_t stage_index = 0;
  };
  std::vector<std::pair<Waypoint, Waypoint>> pairs;
  std::vector<FiltrationStage> stages;
  std::vector<Violation> violations;

  bool monotone() const { return violations.empty(); }
};

/// Throws non-monotone-basefields unless each stage's base field contains
/// the previous one.
FiltrationReport filtration_report(const std::vector<RouteGraph>& stages,
                                   const std::vector<std::pair<Waypoint, Waypoint>>& pairs);

}  // namespace routeway
