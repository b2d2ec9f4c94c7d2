#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracle.hpp"
#include "volta/concentration.hpp"
#include "volta/error.hpp"
#include "volta/generators.hpp"
#include "volta/io.hpp"

using namespace volta;

namespace {

Network unit(const Graph& g) { return assign(g, {SchemeKind::kUnit, 0}); }

// Vertex 0 joined to `a` leaves, vertex 1 joined to `b` other leaves, and a
// path through the leaves so the graph is connected.
Network two_hubs(std::size_t a, std::size_t b) {
  const std::size_t n = 2 + a + b;
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < a; ++i) edges.push_back({0, static_cast<Vertex>(2 + i)});
  for (std::size_t i = 0; i < b; ++i) edges.push_back({1, static_cast<Vertex>(2 + a + i)});
  for (Vertex v = 2; v + 1 < n; ++v) edges.push_back({v, v + 1});
  return unit(Graph(n, edges));
}

}  // namespace

TEST_CASE("predicted constant examples") {
  const auto net = unit(generate({GenKind::kGnp, 100, 0.1, 1}));
  CHECK(predicted_constant(net, BoundaryCondition({3, 30, 60}, {0.6, 0.6, 0.6})) ==
        doctest::Approx(0.6));

  const auto hubs = two_hubs(12, 8);
  REQUIRE(hubs.graph().degree(0) == 12);
  REQUIRE(hubs.graph().degree(1) == 8);
  CHECK(predicted_constant(hubs, BoundaryCondition({0, 1}, {1.0, 0.0})) ==
        doctest::Approx(12.0 / 20.0));

  // Four stars with strengths 10, 9, 11, 10 hanging off a shared path.
  std::vector<Edge> edges;
  const std::size_t degrees[] = {10, 9, 11, 10};
  Vertex next = 4;
  std::vector<Vertex> leaves;
  for (Vertex hub = 0; hub < 4; ++hub) {
    for (std::size_t i = 0; i < degrees[hub]; ++i) {
      edges.push_back({hub, next});
      leaves.push_back(next++);
    }
  }
  for (std::size_t i = 0; i + 1 < leaves.size(); ++i) edges.push_back({leaves[i], leaves[i + 1]});
  const auto stars = unit(Graph(next, edges));
  const BoundaryCondition bc({0, 1, 2, 3}, {1.0, 0.3, 0.7, 1.0});
  CHECK(predicted_constant(stars, bc) == doctest::Approx(0.76));
}

TEST_CASE("predicted constant is scale invariant") {
  const auto net = assign(generate({GenKind::kGnp, 300, 0.03, 4}), {SchemeKind::kPowerLaw, 4});
  const auto bc = io::parse_boundary("spread:1,0.3,0.7,1", 300);
  const double base = predicted_constant(net, bc);
  for (double lambda : {0.5, 3.0}) {
    CHECK(predicted_constant(scaled(net, lambda), bc) == doctest::Approx(base).epsilon(1e-14));
  }
}

TEST_CASE("stats of a constant field") {
  const auto net = unit(generate({GenKind::kGnp, 100, 0.1, 2}));
  const BoundaryCondition bc({0, 50}, {0.35, 0.35});
  const auto f = solve_dense(net, bc);
  const auto s = concentration_stats(f, net, bc);
  CHECK(s.v_bar_c == doctest::Approx(0.35));
  CHECK(s.max_dev <= 1e-12);
  CHECK(s.histogram.size() == kDefaultHistogramBins);
  CHECK(std::count_if(s.histogram.begin(), s.histogram.end(), [](auto c) { return c > 0; }) == 1);
  CHECK(s.interior_count == 98);
}

TEST_CASE("stats match a direct computation") {
  const auto inst = oracle::random_instance(11, 50);
  const auto f = solve_dense(inst.net, inst.bc);
  const auto s = concentration_stats(f, inst.net, inst.bc, 10);
  const auto map = inst.bc.index_map(inst.net.vertex_count());
  std::vector<double> vals;
  std::size_t undefined = 0;
  for (Vertex v = 0; v < inst.net.vertex_count(); ++v) {
    if (map[v] >= 0) continue;
    if (!f.defined[v]) {
      ++undefined;
      continue;
    }
    vals.push_back(f.values[v]);
  }
  REQUIRE(!vals.empty());
  const double vbar = oracle::boundary_strength(inst.net, inst.bc) > 0
                          ? predicted_constant(inst.net, inst.bc)
                          : 0.0;
  double max_dev = 0.0, mean_dev = 0.0, mean = 0.0;
  for (double x : vals) {
    max_dev = std::max(max_dev, std::abs(x - vbar));
    mean_dev += std::abs(x - vbar);
    mean += x;
  }
  mean_dev /= static_cast<double>(vals.size());
  mean /= static_cast<double>(vals.size());
  std::sort(vals.begin(), vals.end());
  const std::size_t m = vals.size();
  const double median = m % 2 ? vals[m / 2] : 0.5 * (vals[m / 2 - 1] + vals[m / 2]);
  CHECK(s.interior_count == m);
  CHECK(s.undefined_count == undefined);
  CHECK(s.max_dev == doctest::Approx(max_dev));
  CHECK(s.mean_dev == doctest::Approx(mean_dev));
  CHECK(s.interior_mean == doctest::Approx(mean));
  CHECK(s.interior_median == doctest::Approx(median));
  CHECK(s.interior_min == vals.front());
  CHECK(s.interior_max == vals.back());
  std::size_t total = 0;
  for (auto c : s.histogram) total += c;
  CHECK(total == m);
}

TEST_CASE("stats need a defined interior") {
  const auto net = unit(complete_graph(3));
  const BoundaryCondition bc({0, 1, 2}, {0.0, 0.5, 1.0});
  const auto f = solve_dense(net, bc);
  try {
    concentration_stats(f, net, bc);
    FAIL("expected a definedness error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDefinedness);
  }
}

TEST_CASE("circle does not concentrate, gnp does") {
  const auto bc = io::parse_boundary("1:1.0,251:0.3,501:0.7,751:1.0", 1000);
  const auto circle = unit(circle_graph(1000));
  CHECK(concentration_stats(solve(circle, bc), circle, bc).max_dev >= 0.25);
  const auto gnp = unit(generate({GenKind::kGnp, 1000, 0.01, 3}));
  CHECK(concentration_stats(solve(gnp, bc), gnp, bc).max_dev <= 0.15);
}

TEST_CASE("consensus fixed point") {
  const auto inst = oracle::random_instance(21, 40);
  const auto exact = oracle::dense_potentials(inst.net, inst.bc);
  std::vector<double> start(exact);
  for (double& x : start)
    if (std::isnan(x)) x = 0.0;
  auto state = consensus_init(inst.net, inst.bc, start);
  consensus_step(inst.net, state);
  CHECK(state.t == 1);
  CHECK(state.delta <= 1e-10);
}

TEST_CASE("consensus on a path") {
  const auto net = unit(Graph(3, {{0, 1}, {1, 2}}));
  const auto state = consensus_run(net, BoundaryCondition({0, 2}, {1.0, 0.0}));
  CHECK(state.scores[1] == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("consensus limit equals the solver") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto inst = oracle::random_instance(seed);
    const auto f = solve(inst.net, inst.bc);
    const auto field = to_field(inst.net, consensus_run(inst.net, inst.bc));
    CAPTURE(seed);
    CHECK(oracle::max_abs_diff(field.values, f.values) <= 10 * 1e-10);
    CHECK(field.defined == f.defined);
  }
  const auto net = unit(generate({GenKind::kGnp, 1000, 0.01, 5}));
  const auto bc = io::parse_boundary("1:1.0,251:0.3,501:0.7,751:1.0", 1000);
  const auto field = to_field(net, consensus_run(net, bc));
  CHECK(oracle::max_abs_diff(field.values, solve(net, bc).values) <= 1e-8);
}

TEST_CASE("consensus scores stay inside the boundary hull") {
  const auto net = assign(generate({GenKind::kSmallWorld, 200, 0.01, 6}), {SchemeKind::kUniform01, 6});
  const auto bc = io::parse_boundary("spread:0.9,0.2,0.6", 200);
  std::vector<double> initial(200);
  for (std::size_t i = 0; i < 200; ++i) initial[i] = 0.2 + 0.7 * static_cast<double>(i % 7) / 6.0;
  auto state = consensus_init(net, bc, initial);
  for (int t = 0; t < 2000; ++t) {
    consensus_step(net, state);
    for (Vertex v = 0; v < 200; ++v) {
      REQUIRE(state.scores[v] >= 0.2);
      REQUIRE(state.scores[v] <= 0.9);
    }
  }
}

TEST_CASE("consensus step budget") {
  const auto net = unit(circle_graph(400));
  ConsensusOptions options;
  options.max_steps = 10;
  try {
    consensus_run(net, BoundaryCondition({0, 200}, {1.0, 0.0}), options);
    FAIL("expected a convergence error");
  } catch (const ConvergenceError& e) {
    CHECK(e.iterations() == 10);
  }
}
