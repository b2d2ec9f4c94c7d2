#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace volta {

using Vertex = std::uint32_t;

// Undirected edge stored canonically with u < v.
struct Edge {
  Vertex u = 0;
  Vertex v = 0;

  auto operator<=>(const Edge&) const = default;
};

constexpr Edge make_edge(Vertex a, Vertex b) noexcept {
  return a < b ? Edge{a, b} : Edge{b, a};
}

// Immutable simple undirected graph. Edges are kept sorted; adjacency is a
// CSR layout with sorted neighbor lists, each neighbor slot also carrying the
// index of the edge it came through so per-edge data can be looked up in O(1).
class Graph {
 public:
  Graph() = default;

  // Throws kArgument on self-loops or duplicate edges, kIndex on endpoints
  // out of range.
  Graph(std::size_t vertex_count, std::vector<Edge> edges);

  std::size_t vertex_count() const noexcept { return vertex_count_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  std::span<const Edge> edges() const noexcept { return edges_; }
  const Edge& edge(std::size_t id) const { return edges_[id]; }

  std::span<const Vertex> neighbors(Vertex v) const;
  std::span<const std::uint32_t> incident_edges(Vertex v) const;

  std::size_t degree(Vertex v) const;
  bool has_edge(Vertex a, Vertex b) const;
  std::optional<std::size_t> edge_index(Vertex a, Vertex b) const;

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.vertex_count_ == b.vertex_count_ && a.edges_ == b.edges_;
  }

 private:
  void check_vertex(Vertex v) const;

  std::size_t vertex_count_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::uint32_t> offsets_;
  std::vector<Vertex> adjacency_;
  std::vector<std::uint32_t> adjacent_edge_;
};

// Throws kIndex when v is out of range.
std::size_t degree(const Graph& g, Vertex v);

struct ComponentLabeling {
  std::vector<std::uint32_t> component_id;
  std::vector<std::size_t> component_sizes;

  std::size_t count() const noexcept { return component_sizes.size(); }
};

// Ids are assigned in order of the smallest vertex of each component.
ComponentLabeling components(const Graph& g);

bool is_connected(const Graph& g);

bool is_bipartite(const Graph& g);

using Cycle = std::vector<Vertex>;

// Every simple cycle of length in [3, max_len], each reported once in
// canonical form: starts at its smallest vertex and proceeds toward the
// smaller of that vertex's two cycle neighbors. Sorted by (length, sequence).
// The search is exhaustive DFS; the count grows roughly like d^max_len, so
// keep max_len small (<= ~10) on anything but sparse graphs.
std::vector<Cycle> cycles_up_to(const Graph& g, std::size_t max_len);

// First cycle of exactly `length` in canonical form, if any.
std::optional<Cycle> find_cycle_of_length(const Graph& g, std::size_t length);

inline constexpr std::uint32_t kUnreachable = UINT32_MAX;

// Multi-source BFS hop distances; kUnreachable for vertices with no path.
std::vector<std::uint32_t> bfs_distances(const Graph& g, std::span<const Vertex> sources);

// Subgraph induced by the vertices with keep[v] set. `original` maps new
// vertex ids back to ids in g; `edge_origin` maps new edge ids to g's.
struct InducedSubgraph {
  Graph graph;
  std::vector<Vertex> original;
  std::vector<std::uint32_t> edge_origin;
};

InducedSubgraph induced_subgraph(const Graph& g, const std::vector<bool>& keep);

}  // namespace volta
