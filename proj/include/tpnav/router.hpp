#pragma once
// Travel-time routing: Dijkstra and loopless Top-K shortest paths (Yen).
//
// Costs are priced on one speed snapshot (per-road speeds, indexed by the
// graph's road index). Every path cost is the left-to-right sum of its edge
// costs, so identical paths always carry bit-identical costs regardless of
// which algorithm produced them. Ties break on the vertex-id sequence, then
// the edge sequence.

#include <queue>
#include <set>
#include <span>

#include "tpnav/graph.hpp"

namespace tpnav {

struct PathResult {
  std::vector<int> edges;     // edge indices, origin to destination
  std::vector<int> vertices;  // vertex indices, length edges.size()+1
  double cost = 0.0;          // hours
};

inline double edge_cost(const RoadGraph& g, int edge, std::span<const double> speed_by_road) {
  const RoadEdge& e = g.edges[edge];
  const double speed = speed_by_road[e.road];
  if (!(speed > 0.0)) throw DataError("non-positive speed on road " + g.road_ids[e.road]);
  return e.length / speed;
}

inline double path_cost(const RoadGraph& g, std::span<const int> edges,
                        std::span<const double> speeds) {
  double cost = 0.0;
  for (int ei : edges) cost += edge_cost(g, ei, speeds);
  return cost;
}

// Total order: cost, then vertex sequence, then edge sequence. Vertex ids are
// stored sorted, so index order is id order.
inline bool path_less(const PathResult& a, const PathResult& b) {
  if (a.cost != b.cost) return a.cost < b.cost;
  if (a.vertices != b.vertices) return a.vertices < b.vertices;
  return a.edges < b.edges;
}

namespace detail {

struct HeapItem {
  double dist;
  int vertex;
  bool operator>(const HeapItem& o) const {
    return dist != o.dist ? dist > o.dist : vertex > o.vertex;
  }
};

inline std::vector<int> walk_parents(const std::vector<int>& parent_edge, const RoadGraph& g,
                                     int v) {
  std::vector<int> seq{v};
  while (parent_edge[v] >= 0) {
    v = g.edges[parent_edge[v]].from;
    seq.push_back(v);
  }
  std::reverse(seq.begin(), seq.end());
  return seq;
}

// Dijkstra over the graph minus banned vertices/edges. Returns false when the
// destination is unreachable. Lazy-deletion binary heap; on exact cost ties
// the lexicographically smaller vertex sequence wins.
inline bool dijkstra_masked(const RoadGraph& g, int origin, int destination,
                            std::span<const double> speeds, const std::vector<char>& banned_vertex,
                            const std::vector<char>& banned_edge, PathResult& out) {
  const int n = g.n_vertices();
  std::vector<double> dist(n, std::numeric_limits<double>::infinity());
  std::vector<int> parent_edge(n, -1);
  std::vector<char> settled(n, 0);
  std::priority_queue<HeapItem, std::vector<HeapItem>, std::greater<HeapItem>> heap;

  dist[origin] = 0.0;
  heap.push({0.0, origin});
  while (!heap.empty()) {
    const auto [d, u] = heap.top();
    heap.pop();
    if (settled[u] || d != dist[u]) continue;
    settled[u] = 1;
    if (u == destination) break;
    for (int ei : g.out[u]) {
      if (!banned_edge.empty() && banned_edge[ei]) continue;
      const int v = g.edges[ei].to;
      if (settled[v]) continue;
      if (!banned_vertex.empty() && banned_vertex[v]) continue;
      const double nd = d + edge_cost(g, ei, speeds);
      if (nd < dist[v]) {
        dist[v] = nd;
        parent_edge[v] = ei;
        heap.push({nd, v});
      } else if (nd == dist[v] && parent_edge[v] >= 0) {
        auto candidate = walk_parents(parent_edge, g, u);
        candidate.push_back(v);
        const auto incumbent = walk_parents(parent_edge, g, v);
        if (candidate < incumbent) parent_edge[v] = ei;
      }
    }
  }
  if (!settled[destination]) return false;

  out.vertices = walk_parents(parent_edge, g, destination);
  out.edges.clear();
  for (int v = destination; parent_edge[v] >= 0; v = g.edges[parent_edge[v]].from)
    out.edges.push_back(parent_edge[v]);
  std::reverse(out.edges.begin(), out.edges.end());
  out.cost = path_cost(g, out.edges, speeds);
  return true;
}

}  // namespace detail

inline PathResult dijkstra(const RoadGraph& g, int origin, int destination,
                           std::span<const double> speeds) {
  if (origin < 0 || origin >= g.n_vertices() || destination < 0 || destination >= g.n_vertices())
    throw std::invalid_argument("dijkstra endpoint out of range");
  if (origin == destination) throw std::invalid_argument("dijkstra requires origin != destination");
  PathResult out;
  if (!detail::dijkstra_masked(g, origin, destination, speeds, {}, {}, out))
    throw DataError("destination " + g.vertex_ids[destination] + " unreachable from " +
                    g.vertex_ids[origin]);
  return out;
}

inline PathResult dijkstra(const RoadGraph& g, std::string_view origin_id,
                           std::string_view destination_id, std::span<const double> speeds) {
  return dijkstra(g, g.require_vertex(origin_id), g.require_vertex(destination_id), speeds);
}

// Yen's loopless K shortest paths: root-path sharing, removal of previously
// used deviation edges, spur vertices restricted to unused vertices.
inline std::vector<PathResult> yen_top_k(const RoadGraph& g, int origin, int destination, int k,
                                         std::span<const double> speeds) {
  if (k < 1) throw std::invalid_argument("yen_top_k requires K >= 1");
  std::vector<PathResult> accepted;
  accepted.push_back(dijkstra(g, origin, destination, speeds));

  auto order = [](const PathResult& a, const PathResult& b) { return path_less(a, b); };
  std::set<PathResult, decltype(order)> candidates(order);
  std::set<std::vector<int>> seen_edge_seqs;  // dedupe across iterations
  seen_edge_seqs.insert(accepted.front().edges);

  std::vector<char> banned_vertex(g.n_vertices(), 0);
  std::vector<char> banned_edge(g.n_edges(), 0);

  while (static_cast<int>(accepted.size()) < k) {
    const PathResult& prev = accepted.back();
    for (std::size_t j = 0; j < prev.edges.size(); ++j) {
      const int spur_vertex = prev.vertices[j];
      std::span<const int> root_edges(prev.edges.data(), j);

      std::fill(banned_vertex.begin(), banned_vertex.end(), 0);
      std::fill(banned_edge.begin(), banned_edge.end(), 0);
      for (std::size_t i = 0; i < j; ++i) banned_vertex[prev.vertices[i]] = 1;
      for (const PathResult& p : accepted) {
        if (p.edges.size() <= j) continue;
        if (!std::equal(root_edges.begin(), root_edges.end(), p.edges.begin())) continue;
        banned_edge[p.edges[j]] = 1;
      }

      PathResult spur;
      if (!detail::dijkstra_masked(g, spur_vertex, destination, speeds, banned_vertex, banned_edge,
                                   spur))
        continue;

      PathResult candidate;
      candidate.edges.assign(root_edges.begin(), root_edges.end());
      candidate.edges.insert(candidate.edges.end(), spur.edges.begin(), spur.edges.end());
      candidate.vertices.assign(prev.vertices.begin(), prev.vertices.begin() + j);
      candidate.vertices.insert(candidate.vertices.end(), spur.vertices.begin(),
                                spur.vertices.end());
      candidate.cost = path_cost(g, candidate.edges, speeds);
      if (seen_edge_seqs.insert(candidate.edges).second) candidates.insert(std::move(candidate));
    }
    if (candidates.empty()) break;
    accepted.push_back(*candidates.begin());
    candidates.erase(candidates.begin());
  }
  return accepted;
}

inline std::vector<PathResult> yen_top_k(const RoadGraph& g, std::string_view origin_id,
                                         std::string_view destination_id, int k,
                                         std::span<const double> speeds) {
  return yen_top_k(g, g.require_vertex(origin_id), g.require_vertex(destination_id), k, speeds);
}

}  // namespace tpnav
