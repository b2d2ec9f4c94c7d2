#include <doctest.h>

#include <algorithm>
#include <bit>
#include <numeric>
#include <set>

#include "volta/error.hpp"
#include "volta/generators.hpp"
#include "volta/graph.hpp"

using namespace volta;

namespace {

Graph two_triangles() {
  return Graph(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}});
}

// Brute force: for every vertex subset of size 3..max_len, count the
// Hamiltonian cycles of the induced subgraph by trying all orderings with the
// smallest vertex first. Each undirected cycle is seen twice (two directions).
std::size_t oracle_cycle_count(const Graph& g, std::size_t max_len) {
  const std::size_t n = g.vertex_count();
  std::size_t total = 0;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    const auto k = static_cast<std::size_t>(std::popcount(mask));
    if (k < 3 || k > max_len) continue;
    std::vector<Vertex> vs;
    for (Vertex v = 0; v < n; ++v)
      if (mask & (1u << v)) vs.push_back(v);
    std::size_t directed = 0;
    std::vector<Vertex> rest(vs.begin() + 1, vs.end());
    do {
      bool ok = g.has_edge(vs[0], rest.front()) && g.has_edge(rest.back(), vs[0]);
      for (std::size_t i = 0; ok && i + 1 < rest.size(); ++i) ok = g.has_edge(rest[i], rest[i + 1]);
      if (ok) ++directed;
    } while (std::next_permutation(rest.begin(), rest.end()));
    total += directed / 2;
  }
  return total;
}

bool is_cycle_of(const Graph& g, const Cycle& c) {
  if (c.size() < 3) return false;
  if (std::set<Vertex>(c.begin(), c.end()).size() != c.size()) return false;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (!g.has_edge(c[i], c[(i + 1) % c.size()])) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("construction validates edges") {
  CHECK_THROWS_AS(Graph(3, {{0, 0}}), Error);
  CHECK_THROWS_AS(Graph(3, {{0, 1}, {1, 0}}), Error);
  try {
    Graph(3, {{0, 3}});
    FAIL("expected an index error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kIndex);
  }
  const Graph g(4, {{2, 1}, {0, 3}});
  CHECK(g.edge(0) == Edge{0, 3});
  CHECK(g.edge(1) == Edge{1, 2});
  CHECK(g.has_edge(2, 1));
  CHECK_FALSE(g.has_edge(0, 1));
  CHECK(g.edge_index(3, 0) == std::optional<std::size_t>(0));
}

TEST_CASE("degree examples") {
  CHECK(degree(circle_graph(5), 0) == 2);
  const auto k4 = complete_graph(4);
  for (Vertex v = 0; v < 4; ++v) CHECK(degree(k4, v) == 3);
  CHECK(degree(Graph(3, {}), 1) == 0);
  try {
    degree(Graph(3, {}), 3);
    FAIL("expected an index error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kIndex);
  }
}

TEST_CASE("handshake on generated graphs") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    for (auto kind : {GenKind::kGnp, GenKind::kCircle, GenKind::kSmallWorld}) {
      const auto g = generate({kind, 300, 0.02, seed});
      std::size_t sum = 0;
      for (Vertex v = 0; v < g.vertex_count(); ++v) sum += g.degree(v);
      CHECK(sum == 2 * g.edge_count());
    }
  }
}

TEST_CASE("incident edges line up with neighbors") {
  const auto g = generate({GenKind::kGnp, 80, 0.1, 3});
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    const auto nb = g.neighbors(v);
    const auto ids = g.incident_edges(v);
    REQUIRE(nb.size() == ids.size());
    CHECK(std::is_sorted(nb.begin(), nb.end()));
    for (std::size_t i = 0; i < nb.size(); ++i) CHECK(g.edge(ids[i]) == make_edge(v, nb[i]));
  }
}

TEST_CASE("component examples") {
  const auto c6 = components(circle_graph(6));
  CHECK(c6.count() == 1);
  CHECK(c6.component_sizes[0] == 6);

  const auto tt = components(two_triangles());
  CHECK(tt.count() == 2);
  CHECK(tt.component_sizes == std::vector<std::size_t>{3, 3});
  CHECK(tt.component_id[0] == tt.component_id[2]);
  CHECK(tt.component_id[0] != tt.component_id[3]);

  const auto empty = components(Graph(4, {}));
  CHECK(empty.count() == 4);
  for (auto s : empty.component_sizes) CHECK(s == 1);
}

TEST_CASE("components are idempotent and invariant under relabeling") {
  const auto g = generate({GenKind::kGnp, 200, 0.006, 11});
  const auto a = components(g);
  CHECK(a.component_id == components(g).component_id);

  // Reverse the labels; the partition must be the same up to id renaming.
  const Vertex n = static_cast<Vertex>(g.vertex_count());
  std::vector<Edge> relabeled;
  for (const auto& e : g.edges()) relabeled.push_back(make_edge(n - 1 - e.u, n - 1 - e.v));
  const auto b = components(Graph(n, relabeled));
  CHECK(a.count() == b.count());
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; v += 17) {
      CHECK((a.component_id[u] == a.component_id[v]) ==
            (b.component_id[n - 1 - u] == b.component_id[n - 1 - v]));
    }
  }
  auto sa = a.component_sizes, sb = b.component_sizes;
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  CHECK(sa == sb);
}

TEST_CASE("cycles on K4 match the subset oracle") {
  const auto k4 = complete_graph(4);
  const auto cycles = cycles_up_to(k4, 4);
  CHECK(oracle_cycle_count(k4, 4) == 7);
  REQUIRE(cycles.size() == 7);
  CHECK(std::count_if(cycles.begin(), cycles.end(), [](const Cycle& c) { return c.size() == 3; }) ==
        4);
  CHECK(std::count_if(cycles.begin(), cycles.end(), [](const Cycle& c) { return c.size() == 4; }) ==
        3);
  for (const auto& c : cycles) CHECK(is_cycle_of(k4, c));
}

TEST_CASE("cycle enumeration matches the oracle on random graphs") {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const auto g = generate({GenKind::kGnp, 9, 0.45, seed});
    for (std::size_t len = 3; len <= 6; ++len) {
      const auto cycles = cycles_up_to(g, len);
      CHECK(cycles.size() == oracle_cycle_count(g, len));
      std::set<Cycle> unique(cycles.begin(), cycles.end());
      CHECK(unique.size() == cycles.size());
      for (const auto& c : cycles) {
        CHECK(is_cycle_of(g, c));
        CHECK(c.front() == *std::min_element(c.begin(), c.end()));
        CHECK(c[1] < c.back());
      }
    }
  }
}

TEST_CASE("cycle enumeration examples") {
  CHECK(cycles_up_to(circle_graph(1000), 7).empty());
  const auto tri = cycles_up_to(complete_graph(3), 3);
  REQUIRE(tri.size() == 1);
  CHECK(tri[0] == Cycle{0, 1, 2});
  CHECK_THROWS_AS(cycles_up_to(complete_graph(3), 2), Error);
}

TEST_CASE("cycles are monotone in the length cap") {
  const auto g = generate({GenKind::kGnp, 30, 0.2, 5});
  const auto small = cycles_up_to(g, 4);
  const auto large = cycles_up_to(g, 5);
  std::set<Cycle> big(large.begin(), large.end());
  for (const auto& c : small) CHECK(big.count(c) == 1);
}

TEST_CASE("circle has exactly one cycle, of length n") {
  for (std::size_t n : {5, 8, 11}) {
    const auto g = circle_graph(n);
    CHECK(cycles_up_to(g, n - 1).empty());
    const auto all = cycles_up_to(g, n);
    REQUIRE(all.size() == 1);
    CHECK(all[0].size() == n);
  }
}

TEST_CASE("find_cycle_of_length") {
  const auto k8 = complete_graph(8);
  for (std::size_t len : {3, 5, 7}) {
    const auto c = find_cycle_of_length(k8, len);
    REQUIRE(c.has_value());
    CHECK(c->size() == len);
    CHECK(is_cycle_of(k8, *c));
  }
  CHECK_FALSE(find_cycle_of_length(circle_graph(10), 3).has_value());
  CHECK(find_cycle_of_length(circle_graph(10), 10).has_value());
}

TEST_CASE("bipartiteness") {
  CHECK(is_bipartite(circle_graph(6)));
  CHECK_FALSE(is_bipartite(circle_graph(7)));
  CHECK_FALSE(is_bipartite(complete_graph(3)));
  CHECK(is_bipartite(Graph(3, {})));
}

TEST_CASE("bfs distances") {
  const auto g = circle_graph(10);
  const Vertex src[] = {0};
  const auto d = bfs_distances(g, src);
  CHECK(d[0] == 0);
  CHECK(d[5] == 5);
  CHECK(d[9] == 1);
  const Vertex two[] = {0, 5};
  CHECK(bfs_distances(g, two)[3] == 2);
  const auto tt = two_triangles();
  CHECK(bfs_distances(tt, src)[4] == kUnreachable);
}

TEST_CASE("induced subgraph") {
  const auto g = complete_graph(5);
  std::vector<bool> keep = {true, false, true, true, false};
  const auto sub = induced_subgraph(g, keep);
  CHECK(sub.graph.vertex_count() == 3);
  CHECK(sub.graph.edge_count() == 3);
  CHECK(sub.original == std::vector<Vertex>{0, 2, 3});
  for (std::size_t e = 0; e < sub.graph.edge_count(); ++e) {
    const auto& local = sub.graph.edge(e);
    CHECK(g.edge(sub.edge_origin[e]) == make_edge(sub.original[local.u], sub.original[local.v]));
  }
}
