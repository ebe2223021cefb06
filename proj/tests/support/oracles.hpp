#pragma once

// Brute-force oracles for small graphs. These enumerate walks directly over
// the edge list and never touch the BFS-based production paths, so they can
// vouch for them. Exponential in walk length; keep inputs small.

#include <cstddef>
#include <optional>
#include <set>
#include <vector>

#include "routeway/core.hpp"

namespace testsupport {

inline std::vector<std::vector<std::size_t>> adjacency(const routeway::RouteGraph& g) {
  std::vector<std::vector<std::size_t>> adj(g.vertex_count());
  for (const auto& e : g.edges) adj[e.from].push_back(e.to);
  return adj;
}

namespace detail {

inline void dfs_walks(const std::vector<std::vector<std::size_t>>& adj, std::size_t cur,
                      std::size_t target, std::size_t remaining, std::vector<std::size_t>& path,
                      std::vector<std::vector<std::size_t>>& out) {
  if (remaining == 0) {
    if (cur == target) out.push_back(path);
    return;
  }
  for (std::size_t next : adj[cur]) {
    path.push_back(next);
    dfs_walks(adj, next, target, remaining - 1, path, out);
    path.pop_back();
  }
}

}  // namespace detail

/// Every walk from s to t using exactly `length` edges, as vertex sequences
/// (including both endpoints). Parallel edges yield duplicate sequences.
inline std::vector<std::vector<std::size_t>> walks_of_length(
    const std::vector<std::vector<std::size_t>>& adj, std::size_t s, std::size_t t,
    std::size_t length) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> path{s};
  detail::dfs_walks(adj, s, t, length, path, out);
  return out;
}

/// Minimal walk length by trying every length from 0 upwards. A shortest walk
/// never repeats a vertex, so vertex_count is a safe cap.
inline std::optional<std::size_t> min_walk_length(const routeway::RouteGraph& g, std::size_t s,
                                                  std::size_t t) {
  auto adj = adjacency(g);
  for (std::size_t len = 0; len <= g.vertex_count(); ++len) {
    if (!walks_of_length(adj, s, t, len).empty()) return len;
  }
  return std::nullopt;
}

/// How many distinct minimal-length walks run from s to t.
inline std::size_t count_minimal_walks(const routeway::RouteGraph& g, std::size_t s,
                                       std::size_t t) {
  auto d = min_walk_length(g, s, t);
  if (!d) return 0;
  return walks_of_length(adjacency(g), s, t, *d).size();
}

/// Vertices lying on at least one minimal-length walk from s to t.
inline std::set<std::size_t> vertices_on_minimal_walks(const routeway::RouteGraph& g,
                                                       std::size_t s, std::size_t t) {
  std::set<std::size_t> out;
  auto d = min_walk_length(g, s, t);
  if (!d) return out;
  for (const auto& walk : walks_of_length(adjacency(g), s, t, *d)) {
    out.insert(walk.begin(), walk.end());
  }
  return out;
}

}  // namespace testsupport
