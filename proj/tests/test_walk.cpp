#include <doctest.h>

#include <cmath>
#include <numeric>

#include "oracle.hpp"
#include "volta/error.hpp"
#include "volta/generators.hpp"
#include "volta/io.hpp"
#include "volta/walk.hpp"

using namespace volta;

namespace {

const Network& path_net() {
  static const Network net(Graph(3, {{0, 1}, {1, 2}}), {2.0, 1.0});
  return net;
}

ErrorCode code_of(auto&& body) {
  try {
    body();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kInternal;
}

}  // namespace

TEST_CASE("transition rows") {
  const TransitionModel path(path_net());
  const auto probs = path.probabilities(1);
  REQUIRE(probs.size() == 2);
  CHECK(path.targets(1)[0] == 0);
  CHECK(probs[0] == doctest::Approx(2.0 / 3.0));
  CHECK(path.probabilities(0).size() == 1);
  CHECK(path.probabilities(0)[0] == 1.0);
  Rng rng(1);
  for (int i = 0; i < 100; ++i) CHECK(path.step(0, rng) == 1);

  const auto net = assign(generate({GenKind::kGnp, 300, 0.05, 1}), {SchemeKind::kPowerLaw, 2});
  const TransitionModel model(net);
  for (Vertex v = 0; v < 300; ++v) {
    const auto row = model.probabilities(v);
    if (row.empty()) continue;
    CHECK(std::abs(std::accumulate(row.begin(), row.end(), 0.0) - 1.0) <= 1e-12);
    CHECK(model.cumulative(v).back() == 1.0);
  }
}

TEST_CASE("uniform neighbor choice frequency") {
  const auto net = assign(circle_graph(5), {SchemeKind::kUnit, 0});
  const TransitionModel model(net);
  Rng rng(99);
  int left = 0;
  for (int i = 0; i < 100000; ++i) left += model.step(2, rng) == 1;
  const double f = left / 100000.0;
  CHECK(f >= 0.4953);
  CHECK(f <= 0.5047);
}

TEST_CASE("isolated vertex cannot step") {
  const Network net(Graph(3, {{0, 1}}), {1.0});
  const TransitionModel model(net);
  Rng rng(0);
  CHECK(code_of([&] { model.step(2, rng); }) == ErrorCode::kModeling);
}

TEST_CASE("hitting probability examples") {
  const BoundaryCondition ab({0, 2}, {1.0, 0.0});
  HittingOptions options;
  options.walks_per_vertex = 100000;
  options.seed = 5;
  const auto est = hitting_probabilities(path_net(), ab, options);
  // Walks from a boundary vertex stop immediately.
  CHECK(est.probability(0, 0) == 1.0);
  CHECK(est.probability(2, 1) == 1.0);
  const double se = std::sqrt(2.0 / 9.0 / 100000.0);
  CHECK(std::abs(est.probability(1, 0) - 2.0 / 3.0) <= 3 * se);
  CHECK(std::abs(est.potential[1] - oracle::dense_potentials(path_net(), ab)[1]) <= 3 * se);

  const auto tri = assign(complete_graph(3), {SchemeKind::kUnit, 0});
  const auto t = hitting_probabilities(tri, BoundaryCondition({0, 1}, {1.0, 0.0}), options);
  CHECK(std::abs(t.probability(2, 0) - 0.5) <= 3 * std::sqrt(0.25 / 100000.0));
}

TEST_CASE("hit counts partition the walks") {
  const auto inst = oracle::random_instance(4, 60);
  HittingOptions options;
  options.walks_per_vertex = 500;
  const auto est = hitting_probabilities(inst.net, inst.bc, options);
  for (Vertex v = 0; v < est.vertex_count; ++v) {
    if (!est.estimated[v]) continue;
    std::uint64_t total = 0;
    double prob = 0.0;
    for (std::size_t k = 0; k < est.boundary_count; ++k) {
      total += est.hits[v * est.boundary_count + k];
      prob += est.probability(v, k);
    }
    CHECK(total == est.walks[v]);
    CHECK(prob == doctest::Approx(1.0).epsilon(1e-15));
  }
}

TEST_CASE("walk estimates match the solver") {
  for (std::uint64_t seed = 100; seed < 104; ++seed) {
    const auto inst = oracle::random_instance(seed, 120);
    const auto expected = oracle::dense_potentials(inst.net, inst.bc);
    HittingOptions options;
    options.walks_per_vertex = 10000;
    options.seed = seed;
    const auto est = hitting_probabilities(inst.net, inst.bc, options);
    std::size_t inside = 0, counted = 0;
    for (Vertex v = 0; v < est.vertex_count; ++v) {
      if (!est.estimated[v]) {
        CHECK(std::isnan(expected[v]));
        continue;
      }
      ++counted;
      const double se = std::max(est.potential_stderr[v], 1e-12);
      if (std::abs(est.potential[v] - expected[v]) <= 3 * se) ++inside;
    }
    CHECK(inside >= counted * 95 / 100);
  }
}

TEST_CASE("estimates are deterministic and thread-count independent") {
  const auto inst = oracle::random_instance(8, 80);
  HittingOptions options;
  options.walks_per_vertex = 300;
  options.seed = 12;
  const auto a = hitting_probabilities(inst.net, inst.bc, options);
  options.threads = 3;
  const auto b = hitting_probabilities(inst.net, inst.bc, options);
  CHECK(a.hits == b.hits);
  CHECK(a.total_steps == b.total_steps);
  CHECK(io::format_estimates_csv(a, inst.bc) == io::format_estimates_csv(b, inst.bc));
  options.seed = 13;
  CHECK(hitting_probabilities(inst.net, inst.bc, options).hits != a.hits);
}

TEST_CASE("walk errors") {
  const Network net(Graph(6, {{0, 1}, {1, 2}, {3, 4}, {4, 5}}), {1, 1, 1, 1});
  const BoundaryCondition bc({0, 2}, {1.0, 0.0});
  HittingOptions options;
  options.walks_per_vertex = 10;
  const auto est = hitting_probabilities(net, bc, options);
  CHECK_FALSE(est.estimated[4]);
  CHECK(std::isnan(est.potential[4]));
  options.starts = {4};
  CHECK(code_of([&] { hitting_probabilities(net, bc, options); }) == ErrorCode::kDefinedness);

  const auto circle = assign(circle_graph(400), {SchemeKind::kUnit, 0});
  HittingOptions tight;
  tight.walks_per_vertex = 100;
  tight.step_cap = 10000;
  CHECK(code_of([&] {
          hitting_probabilities(circle, BoundaryCondition({0}, {1.0}), tight);
        }) == ErrorCode::kBudget);
  tight.walks_per_vertex = 0;
  CHECK(code_of([&] {
          hitting_probabilities(circle, BoundaryCondition({0}, {1.0}), tight);
        }) == ErrorCode::kArgument);
}

TEST_CASE("long walk occupancy approaches the stationary law") {
  const auto net = assign(generate({GenKind::kGnp, 200, 0.05, 21}), {SchemeKind::kUniform01, 3});
  const auto bc = io::parse_boundary("spread:1,0,1,0", 200);
  std::vector<bool> keep(200, true);
  for (Vertex x : bc.vertices()) keep[x] = false;
  const auto induced = induced_network(net, keep);
  REQUIRE(induced.network.has_value());
  REQUIRE(is_connected(induced.network->graph()));
  REQUIRE_FALSE(is_bipartite(induced.network->graph()));
  const TransitionModel model(*induced.network);
  const auto freq = occupancy(model, 0, 10'000'000, 77);
  const auto pi = stationary_distribution(*induced.network);
  CHECK(total_variation(freq, pi) <= 0.02);
}

TEST_CASE("stationary distribution and total variation") {
  const Network path = path_net();
  const auto pi = stationary_distribution(path);
  CHECK(pi[0] == doctest::Approx(2.0 / 6.0));
  CHECK(pi[1] == doctest::Approx(3.0 / 6.0));
  const std::vector<double> a = {0.5, 0.5, 0.0}, b = {0.0, 0.5, 0.5};
  CHECK(total_variation(a, b) == doctest::Approx(0.5));
  CHECK(total_variation(a, a) == 0.0);
}

TEST_CASE("mixing on K3") {
  const auto k3 = assign(complete_graph(3), {SchemeKind::kUnit, 0});
  MixingOptions options;
  options.samples = 100000;
  options.seed = 3;
  const auto report = mixing_diagnostics(k3, std::span<const Vertex>{}, options);
  CHECK(report.applicable);
  CHECK(report.tv_distance <= 0.01);
  CHECK(report.escape_prob == 1.0);
  CHECK(report.t0 == static_cast<std::size_t>(std::ceil(10 * std::log(3.0))));
  CHECK(report.horizon == 2 * report.t0);
}

TEST_CASE("mixing reports inapplicable induced networks") {
  // Removing vertex 0 from circle(7) leaves a path, which is bipartite.
  const auto net = assign(circle_graph(7), {SchemeKind::kUnit, 0});
  MixingOptions options;
  options.samples = 1000;
  const auto report = mixing_diagnostics(net, BoundaryCondition({0}, {1.0}), options);
  CHECK_FALSE(report.applicable);
  CHECK(std::isnan(report.tv_distance));
  CHECK_FALSE(report.reason.empty());
  CHECK(report.escape_prob >= 0.0);
  CHECK(report.escape_prob < 1.0);

  // Removing two opposite vertices of circle(9) disconnects it.
  const auto circle9 = assign(circle_graph(9), {SchemeKind::kUnit, 0});
  const auto split = mixing_diagnostics(circle9, BoundaryCondition({0, 4}, {1.0, 0.0}), options);
  CHECK_FALSE(split.applicable);
}

TEST_CASE("mixing diagnostics are deterministic") {
  const auto net = assign(generate({GenKind::kGnp, 300, 0.03, 2}), {SchemeKind::kUnit, 0});
  const auto bc = io::parse_boundary("spread:1,0.3,0.7,1", 300);
  MixingOptions options;
  options.samples = 2000;
  options.seed = 4;
  const auto a = mixing_diagnostics(net, bc, options);
  const auto b = mixing_diagnostics(net, bc, options);
  CHECK(a.tv_distance == b.tv_distance);
  CHECK(a.escape_prob == b.escape_prob);
  CHECK(a.start == 1);  // vertex 0 is a boundary vertex
}
