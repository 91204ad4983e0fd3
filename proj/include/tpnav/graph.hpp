#pragma once
// Road network: strongly connected digraph, per-edge length and road id.

#include <algorithm>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "tpnav/common.hpp"

namespace tpnav {

struct RoadEdge {
  int from = 0;
  int to = 0;
  int road = 0;          // index into RoadGraph::road_ids
  double length = 0.0;   // miles
};

struct RoadGraph {
  std::vector<std::string> vertex_ids;        // sorted ascending, so index order == id order
  std::vector<std::string> road_ids;          // first-appearance order
  std::vector<RoadEdge> edges;
  std::vector<std::vector<int>> out;          // vertex -> outgoing edge indices

  int n_vertices() const { return static_cast<int>(vertex_ids.size()); }
  int n_edges() const { return static_cast<int>(edges.size()); }
  int n_roads() const { return static_cast<int>(road_ids.size()); }

  int vertex_index(std::string_view id) const {
    const auto it = std::lower_bound(vertex_ids.begin(), vertex_ids.end(), id);
    if (it == vertex_ids.end() || *it != id) return -1;
    return static_cast<int>(it - vertex_ids.begin());
  }

  int require_vertex(std::string_view id) const {
    const int i = vertex_index(id);
    if (i < 0) throw DataError("unknown vertex id: " + std::string(id));
    return i;
  }
};

struct GraphEdgeSpec {
  std::string from;
  std::string to;
  std::string road_id;
  double length = 0.0;
};

inline RoadGraph make_road_graph(const std::vector<GraphEdgeSpec>& specs) {
  RoadGraph g;
  for (const auto& e : specs) {
    g.vertex_ids.push_back(e.from);
    g.vertex_ids.push_back(e.to);
  }
  std::sort(g.vertex_ids.begin(), g.vertex_ids.end());
  g.vertex_ids.erase(std::unique(g.vertex_ids.begin(), g.vertex_ids.end()), g.vertex_ids.end());

  for (const auto& e : specs) {
    if (e.from == e.to) throw DataError("self-loop edge at vertex " + e.from);
    if (!(e.length > 0.0)) throw DataError("edge " + e.from + "->" + e.to + " has non-positive length");
    int road = -1;
    for (int i = 0; i < g.n_roads(); ++i)
      if (g.road_ids[i] == e.road_id) { road = i; break; }
    if (road < 0) {
      road = g.n_roads();
      g.road_ids.push_back(e.road_id);
    }
    g.edges.push_back(RoadEdge{g.require_vertex(e.from), g.require_vertex(e.to), road, e.length});
  }

  g.out.assign(g.vertex_ids.size(), {});
  for (int i = 0; i < g.n_edges(); ++i) g.out[g.edges[i].from].push_back(i);
  return g;
}

inline bool strongly_connected(const RoadGraph& g) {
  const int n = g.n_vertices();
  if (n == 0) return false;
  auto reach_count = [&](bool forward) {
    std::vector<char> seen(n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    // reverse adjacency built on the fly; graphs are desk-scale
    std::vector<std::vector<int>> radj;
    if (!forward) {
      radj.assign(n, {});
      for (const auto& e : g.edges) radj[e.to].push_back(e.from);
    }
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      if (forward) {
        for (int ei : g.out[u]) {
          const int v = g.edges[ei].to;
          if (!seen[v]) { seen[v] = 1; ++count; stack.push_back(v); }
        }
      } else {
        for (int v : radj[u])
          if (!seen[v]) { seen[v] = 1; ++count; stack.push_back(v); }
      }
    }
    return count;
  };
  return reach_count(true) == n && reach_count(false) == n;
}

inline void validate_graph(const RoadGraph& g) {
  if (g.n_vertices() < 2) throw DataError("road graph needs at least 2 vertices");
  for (const auto& e : g.edges)
    if (!(e.length > 0.0)) throw DataError("road graph has a non-positive edge length");
  if (!strongly_connected(g)) throw DataError("road graph is not strongly connected");
}

}  // namespace tpnav
