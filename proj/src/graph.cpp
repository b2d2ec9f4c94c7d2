#include "volta/graph.hpp"

#include <algorithm>
#include <deque>
#include <string>

#include "volta/error.hpp"

namespace volta {

Graph::Graph(std::size_t vertex_count, std::vector<Edge> edges)
    : vertex_count_(vertex_count), edges_(std::move(edges)) {
  if (vertex_count_ > UINT32_MAX - 1) {
    throw Error(ErrorCode::kArgument, "vertex count too large");
  }
  for (auto& e : edges_) {
    if (e.u == e.v) {
      throw Error(ErrorCode::kArgument, "self-loop at vertex " + std::to_string(e.u));
    }
    if (e.u >= vertex_count_ || e.v >= vertex_count_) {
      throw Error(ErrorCode::kIndex, "edge endpoint out of range: (" + std::to_string(e.u) +
                                         ", " + std::to_string(e.v) + ")");
    }
    e = make_edge(e.u, e.v);
  }
  std::sort(edges_.begin(), edges_.end());
  auto dup = std::adjacent_find(edges_.begin(), edges_.end());
  if (dup != edges_.end()) {
    throw Error(ErrorCode::kArgument, "duplicate edge (" + std::to_string(dup->u) + ", " +
                                          std::to_string(dup->v) + ")");
  }

  offsets_.assign(vertex_count_ + 1, 0);
  for (const auto& e : edges_) {
    ++offsets_[e.u + 1];
    ++offsets_[e.v + 1];
  }
  for (std::size_t i = 0; i < vertex_count_; ++i) offsets_[i + 1] += offsets_[i];

  adjacency_.resize(2 * edges_.size());
  adjacent_edge_.resize(2 * edges_.size());
  std::vector<std::uint32_t> fill(offsets_.begin(), offsets_.end() - 1);
  // Edges are sorted by (u, v), so appending in edge order leaves every
  // neighbor list sorted: for a vertex x, partners smaller than x arrive
  // (as u of edges (u, x)) in increasing u, before any edge (x, v).
  for (std::uint32_t id = 0; id < edges_.size(); ++id) {
    const auto& e = edges_[id];
    adjacency_[fill[e.u]] = e.v;
    adjacent_edge_[fill[e.u]++] = id;
    adjacency_[fill[e.v]] = e.u;
    adjacent_edge_[fill[e.v]++] = id;
  }
  for (Vertex x = 0; x < vertex_count_; ++x) {
    auto first = adjacency_.begin() + offsets_[x];
    auto last = adjacency_.begin() + offsets_[x + 1];
    if (!std::is_sorted(first, last)) {
      throw Error(ErrorCode::kInternal, "adjacency construction produced unsorted list");
    }
  }
}

void Graph::check_vertex(Vertex v) const {
  if (v >= vertex_count_) {
    throw Error(ErrorCode::kIndex, "vertex " + std::to_string(v) + " out of range [0, " +
                                       std::to_string(vertex_count_) + ")");
  }
}

std::span<const Vertex> Graph::neighbors(Vertex v) const {
  check_vertex(v);
  return {adjacency_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
}

std::span<const std::uint32_t> Graph::incident_edges(Vertex v) const {
  check_vertex(v);
  return {adjacent_edge_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
}

std::size_t Graph::degree(Vertex v) const {
  check_vertex(v);
  return offsets_[v + 1] - offsets_[v];
}

std::optional<std::size_t> Graph::edge_index(Vertex a, Vertex b) const {
  check_vertex(a);
  check_vertex(b);
  auto nb = neighbors(a);
  auto it = std::lower_bound(nb.begin(), nb.end(), b);
  if (it == nb.end() || *it != b) return std::nullopt;
  return adjacent_edge_[offsets_[a] + static_cast<std::size_t>(it - nb.begin())];
}

bool Graph::has_edge(Vertex a, Vertex b) const { return edge_index(a, b).has_value(); }

std::size_t degree(const Graph& g, Vertex v) { return g.degree(v); }

ComponentLabeling components(const Graph& g) {
  const std::size_t n = g.vertex_count();
  ComponentLabeling out;
  out.component_id.assign(n, UINT32_MAX);
  std::vector<Vertex> stack;
  for (Vertex s = 0; s < n; ++s) {
    if (out.component_id[s] != UINT32_MAX) continue;
    const auto id = static_cast<std::uint32_t>(out.component_sizes.size());
    std::size_t size = 0;
    out.component_id[s] = id;
    stack.push_back(s);
    while (!stack.empty()) {
      Vertex x = stack.back();
      stack.pop_back();
      ++size;
      for (Vertex y : g.neighbors(x)) {
        if (out.component_id[y] == UINT32_MAX) {
          out.component_id[y] = id;
          stack.push_back(y);
        }
      }
    }
    out.component_sizes.push_back(size);
  }
  return out;
}

bool is_connected(const Graph& g) { return components(g).count() <= 1; }

bool is_bipartite(const Graph& g) {
  const std::size_t n = g.vertex_count();
  std::vector<int> side(n, -1);
  std::deque<Vertex> queue;
  for (Vertex s = 0; s < n; ++s) {
    if (side[s] >= 0) continue;
    side[s] = 0;
    queue.push_back(s);
    while (!queue.empty()) {
      Vertex x = queue.front();
      queue.pop_front();
      for (Vertex y : g.neighbors(x)) {
        if (side[y] < 0) {
          side[y] = 1 - side[x];
          queue.push_back(y);
        } else if (side[y] == side[x]) {
          return false;
        }
      }
    }
  }
  return true;
}

namespace {

// DFS over simple paths rooted at `start` that only visit vertices greater
// than `start`. Closing a path of length L >= min_len back to `start` gives a
// cycle whose smallest vertex is `start`; requiring path[1] < path.back()
// keeps exactly one of its two orientations.
class CycleSearch {
 public:
  CycleSearch(const Graph& g, std::size_t min_len, std::size_t max_len, bool first_only)
      : g_(g), min_len_(min_len), max_len_(max_len), first_only_(first_only),
        on_path_(g.vertex_count(), false) {}

  void run_from(Vertex start) {
    start_ = start;
    path_.assign(1, start);
    on_path_[start] = true;
    extend();
    on_path_[start] = false;
  }

  bool done() const { return first_only_ && !found_.empty(); }
  std::vector<Cycle>& found() { return found_; }

 private:
  void extend() {
    const Vertex cur = path_.back();
    for (Vertex w : g_.neighbors(cur)) {
      if (done()) return;
      if (w == start_) {
        if (path_.size() >= min_len_ && path_.size() >= 3 && path_[1] < path_.back()) {
          found_.push_back(path_);
        }
        continue;
      }
      if (w < start_ || on_path_[w] || path_.size() >= max_len_) continue;
      on_path_[w] = true;
      path_.push_back(w);
      extend();
      path_.pop_back();
      on_path_[w] = false;
    }
  }

  const Graph& g_;
  std::size_t min_len_;
  std::size_t max_len_;
  bool first_only_;
  std::vector<bool> on_path_;
  Vertex start_ = 0;
  Cycle path_;
  std::vector<Cycle> found_;
};

}  // namespace

std::vector<Cycle> cycles_up_to(const Graph& g, std::size_t max_len) {
  if (max_len < 3) {
    throw Error(ErrorCode::kArgument, "cycle length bound must be at least 3");
  }
  CycleSearch search(g, 3, max_len, false);
  for (Vertex s = 0; s < g.vertex_count(); ++s) search.run_from(s);
  auto cycles = std::move(search.found());
  std::sort(cycles.begin(), cycles.end(), [](const Cycle& a, const Cycle& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  return cycles;
}

std::optional<Cycle> find_cycle_of_length(const Graph& g, std::size_t length) {
  if (length < 3) {
    throw Error(ErrorCode::kArgument, "cycle length must be at least 3");
  }
  CycleSearch search(g, length, length, true);
  for (Vertex s = 0; s < g.vertex_count() && !search.done(); ++s) search.run_from(s);
  if (search.found().empty()) return std::nullopt;
  return search.found().front();
}

std::vector<std::uint32_t> bfs_distances(const Graph& g, std::span<const Vertex> sources) {
  std::vector<std::uint32_t> dist(g.vertex_count(), kUnreachable);
  std::deque<Vertex> queue;
  for (Vertex s : sources) {
    if (s >= g.vertex_count()) {
      throw Error(ErrorCode::kIndex, "BFS source out of range");
    }
    if (dist[s] != 0) {
      dist[s] = 0;
      queue.push_back(s);
    }
  }
  while (!queue.empty()) {
    Vertex x = queue.front();
    queue.pop_front();
    for (Vertex y : g.neighbors(x)) {
      if (dist[y] == kUnreachable) {
        dist[y] = dist[x] + 1;
        queue.push_back(y);
      }
    }
  }
  return dist;
}

InducedSubgraph induced_subgraph(const Graph& g, const std::vector<bool>& keep) {
  if (keep.size() != g.vertex_count()) {
    throw Error(ErrorCode::kArgument, "keep mask size does not match vertex count");
  }
  InducedSubgraph out;
  std::vector<Vertex> relabel(g.vertex_count(), UINT32_MAX);
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    if (keep[v]) {
      relabel[v] = static_cast<Vertex>(out.original.size());
      out.original.push_back(v);
    }
  }
  std::vector<Edge> edges;
  for (std::uint32_t id = 0; id < g.edge_count(); ++id) {
    const auto& e = g.edge(id);
    if (keep[e.u] && keep[e.v]) {
      // Relabeling is monotone, so the order of kept edges is preserved.
      edges.push_back({relabel[e.u], relabel[e.v]});
      out.edge_origin.push_back(id);
    }
  }
  out.graph = Graph(out.original.size(), std::move(edges));
  return out;
}

}  // namespace volta
