#include <doctest.h>

#include <cmath>
#include <numeric>

#include "volta/error.hpp"
#include "volta/generators.hpp"

using namespace volta;

namespace {

std::size_t non_circle_edges(const Graph& g) {
  const auto n = static_cast<Vertex>(g.vertex_count());
  std::size_t count = 0;
  for (const auto& e : g.edges()) {
    const bool ring = e.v == e.u + 1 || (e.u == 0 && e.v == n - 1);
    if (!ring) ++count;
  }
  return count;
}

}  // namespace

TEST_CASE("gnp extremes") {
  const auto empty = generate({GenKind::kGnp, 5, 0.0, 1});
  CHECK(empty.vertex_count() == 5);
  CHECK(empty.edge_count() == 0);
  const auto full = generate({GenKind::kGnp, 5, 1.0, 1});
  CHECK(full.edge_count() == 10);
  CHECK(full == complete_graph(5));
}

TEST_CASE("gnp edge count follows the binomial law") {
  // m ~ Binomial(499500, 0.01): mean 4995, sd ~70.3; the mean of 100 draws
  // has sd ~7.03.
  double sum = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    sum += static_cast<double>(generate({GenKind::kGnp, 1000, 0.01, seed}).edge_count());
  }
  const double mean = sum / 100.0;
  const double sd = std::sqrt(499500.0 * 0.01 * 0.99) / std::sqrt(100.0);
  CHECK(std::abs(mean - 4995.0) <= 3.0 * sd);
}

TEST_CASE("small world contains the circle plus a sparse random layer") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto g = generate({GenKind::kSmallWorld, 1000, 0.001, seed});
    CHECK(g.edge_count() >= 1000);
    for (Vertex v = 0; v < 1000; ++v) CHECK(g.has_edge(v, (v + 1) % 1000));
    CHECK(is_connected(g));
    // Extra edges ~ Binomial(499500, 0.001) minus the ~1 that land on the ring.
    const double sd = std::sqrt(499500.0 * 0.001 * 0.999);
    CHECK(std::abs(static_cast<double>(non_circle_edges(g)) - 499.5) <= 3.0 * sd);
  }
}

TEST_CASE("circle generator ignores p") {
  const auto g = generate({GenKind::kCircle, 7, 0.9, 3});
  CHECK(g == circle_graph(7));
  CHECK(g.edge_count() == 7);
}

TEST_CASE("edge probability audit") {
  for (const auto& f : edge_probability_audit({GenKind::kGnp, 20, 0.0, 4}, 50)) {
    CHECK(f.frequency == 0.0);
  }
  for (const auto& f : edge_probability_audit({GenKind::kGnp, 20, 1.0, 4}, 50)) {
    CHECK(f.frequency == 1.0);
  }
  const auto half = edge_probability_audit({GenKind::kGnp, 20, 0.5, 4}, 10000);
  CHECK(half.size() == 8);
  for (const auto& f : half) {
    CHECK(f.frequency >= 0.485);
    CHECK(f.frequency <= 0.515);
  }
  CHECK_THROWS_AS(edge_probability_audit({GenKind::kCircle, 20, 0.5, 4}, 10), Error);
}

TEST_CASE("geometric skipping is unbiased for sparse p") {
  // Each pair at p = 0.05 over 20000 trials: sd = sqrt(0.05*0.95/20000) ~ 0.00154.
  for (const auto& f : edge_probability_audit({GenKind::kGnp, 40, 0.05, 9}, 20000)) {
    CHECK(std::abs(f.frequency - 0.05) <= 3.0 * std::sqrt(0.05 * 0.95 / 20000.0));
  }
}

TEST_CASE("determinism and seed sensitivity") {
  const GenSpec spec{GenKind::kGnp, 1000, 0.01, 42};
  CHECK(generate(spec) == generate(spec));
  for (std::uint64_t s = 0; s < 10; ++s) {
    CHECK_FALSE(generate({GenKind::kGnp, 1000, 0.01, 2 * s}) ==
                generate({GenKind::kGnp, 1000, 0.01, 2 * s + 1}));
  }
}

TEST_CASE("gnp degrees look binomial") {
  // Degree ~ Binomial(999, 0.01): mean 9.99, variance 9.89.
  const auto g = generate({GenKind::kGnp, 1000, 0.01, 7});
  double sum = 0.0, sq = 0.0;
  for (Vertex v = 0; v < 1000; ++v) {
    const double d = static_cast<double>(g.degree(v));
    sum += d;
    sq += d * d;
  }
  const double mean = sum / 1000.0;
  const double var = sq / 1000.0 - mean * mean;
  const double sigma = std::sqrt(999 * 0.01 * 0.99);
  CHECK(std::abs(mean - 9.99) <= 3.0 * sigma / std::sqrt(1000.0));
  CHECK(var == doctest::Approx(sigma * sigma).epsilon(0.15));
}

TEST_CASE("alpha conversion") {
  CHECK(alpha_to_p(1.45, 1000) == doctest::Approx(1.45 * std::log(1000.0) / 1000.0));
  CHECK(p_to_alpha(0.01, 1000) == doctest::Approx(10.0 / std::log(1000.0)));
  CHECK(p_to_alpha(alpha_to_p(2.0, 500), 500) == doctest::Approx(2.0));
  CHECK(alpha_to_p(1000.0, 10) == 1.0);
}

TEST_CASE("spec validation") {
  CHECK_THROWS_AS(generate({GenKind::kGnp, 2, 0.5, 0}), Error);
  CHECK_THROWS_AS(generate({GenKind::kGnp, 10, 1.5, 0}), Error);
  CHECK_THROWS_AS(generate({GenKind::kGnp, 10, -0.1, 0}), Error);
  CHECK(parse_gen_kind("small-world") == GenKind::kSmallWorld);
  CHECK(parse_gen_kind("small_world") == GenKind::kSmallWorld);
  CHECK(to_string(GenKind::kSmallWorld) == "small_world");
  CHECK_THROWS_AS(parse_gen_kind("lattice"), Error);
}
