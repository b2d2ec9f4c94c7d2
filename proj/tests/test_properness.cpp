#include <doctest.h>

#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

#include "volta/error.hpp"
#include "volta/generators.hpp"
#include "volta/properness.hpp"

using namespace volta;

namespace {

Network unit(const Graph& g) { return assign(g, {SchemeKind::kUnit, 0}); }

// Smallest cut/volume over every S within V \ L with 1 <= |S| <= n/2, from
// the edge list directly.
double oracle_min_ratio(const Network& net, std::uint32_t excluded_mask) {
  const auto n = static_cast<Vertex>(net.vertex_count());
  double best = std::numeric_limits<double>::infinity();
  for (std::uint32_t s = 1; s < (1u << n); ++s) {
    if (s & excluded_mask) continue;
    if (static_cast<std::size_t>(std::popcount(s)) > n / 2) continue;
    double cut = 0.0, volume = 0.0;
    const auto edges = net.graph().edges();
    for (std::size_t e = 0; e < edges.size(); ++e) {
      const auto [u, v] = edges[e];
      if ((excluded_mask >> u & 1) || (excluded_mask >> v & 1)) continue;
      const bool in_u = s >> u & 1, in_v = s >> v & 1;
      const double c = net.conductance(e);
      if (in_u) volume += c;
      if (in_v) volume += c;
      if (in_u != in_v) cut += c;
    }
    if (volume > 0.0) best = std::min(best, cut / volume);
  }
  return best;
}

}  // namespace

TEST_CASE("thresholds") {
  // ln 1000 ~ 6.908, ln ln 1000 ~ 1.933.
  CHECK(short_cycle_cap(1000) == 0);
  CHECK(cycle_separation(1000) == 4);
  CHECK(short_cycle_cap(6) == 0);
  CHECK(cycle_separation(6) == 4);
}

TEST_CASE("circle(1000): connected, no short cycles, no triangle") {
  const auto report = check_p1_p3(circle_graph(1000));
  CHECK(report.p1.verdict == Verdict::kHolds);
  CHECK(report.p2.verdict == Verdict::kHolds);
  CHECK(report.p3.verdict == Verdict::kFails);
  CHECK(report.p3.missing_cycle_length == std::optional<std::size_t>(3));
  CHECK(witness_reproduces(circle_graph(1000), report.p3, report.parameters));
}

TEST_CASE("K8 has all odd cycles") {
  const auto report = check_p1_p3(complete_graph(8));
  CHECK(report.p3.verdict == Verdict::kHolds);
  REQUIRE(report.p3.cycles.size() == 3);
  CHECK(report.p3.cycles[0].size() == 3);
  CHECK(report.p3.cycles[1].size() == 5);
  CHECK(report.p3.cycles[2].size() == 7);
}

TEST_CASE("two triangles joined by an edge") {
  const Graph g(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}, {2, 3}});
  const auto report = check_p1_p3(g);
  CHECK(report.p1.verdict == Verdict::kHolds);
  CHECK(report.p2.verdict == Verdict::kHolds);
  CHECK(report.parameters.short_cycle_cap == 0);
}

TEST_CASE("disconnected graph fails P1 reproducibly") {
  const Graph g(6, {{0, 1}, {1, 2}, {3, 4}});
  const auto report = check_p1_p3(g);
  CHECK(report.p1.verdict == Verdict::kFails);
  CHECK(witness_reproduces(g, report.p1, report.parameters));
}

TEST_CASE("expansion ratio examples") {
  const auto circle = unit(circle_graph(1000));
  std::vector<Vertex> arc(500);
  std::iota(arc.begin(), arc.end(), 0);
  const auto w = expansion_ratio(circle, {}, arc);
  CHECK(w.cut == 2.0);
  CHECK(w.volume == 1000.0);
  CHECK(w.ratio == doctest::Approx(0.002));

  // A pendant vertex: its one edge is both its cut and its volume.
  std::vector<Edge> edges = {{0, 1}};
  for (Vertex u = 1; u < 6; ++u)
    for (Vertex v = u + 1; v < 6; ++v) edges.push_back({u, v});
  const auto pendant = unit(Graph(6, edges));
  const Vertex s[] = {0};
  CHECK(expansion_ratio(pendant, {}, s).ratio == 1.0);
  const Vertex bad[] = {1};
  CHECK_THROWS_AS(expansion_ratio(pendant, bad, bad), Error);
}

TEST_CASE("P4 on the circle finds a thin cut") {
  const auto net = unit(circle_graph(1000));
  ExpansionAuditOptions options;
  options.samples = 1000;
  options.seed = 1;
  const auto report = check_p4(net, options);
  CHECK(report.p4.verdict == Verdict::kFails);
  REQUIRE(report.p4.expansion.has_value());
  CHECK(report.p4.expansion->ratio < 1.0 / 6.0);
  CHECK(witness_reproduces(net, report.p4, report.parameters));
}

TEST_CASE("P4 exhaustive audit agrees with brute force") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto g = generate({GenKind::kGnp, 12, 0.35, seed});
    if (g.edge_count() == 0) continue;
    const auto net = assign(g, {seed % 2 ? SchemeKind::kUniform01 : SchemeKind::kUnit, seed});
    ExpansionAuditOptions options;
    options.exhaustive_cap = 6;
    options.excluded = {static_cast<Vertex>(seed % 12)};
    const auto report = check_p4(net, options);
    const double threshold = report.parameters.expansion_threshold;
    const double best = oracle_min_ratio(net, 1u << (seed % 12));
    CAPTURE(seed);
    if (best < threshold) {
      CHECK(report.p4.verdict == Verdict::kFails);
      CHECK(witness_reproduces(net, report.p4, report.parameters));
    } else {
      CHECK(report.p4.verdict == Verdict::kHolds);
    }
  }
}

TEST_CASE("P4 on dense gnp reports sampled-holds") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto net = unit(generate({GenKind::kGnp, 300, 0.05, seed}));
    ExpansionAuditOptions options;
    options.samples = 10000;
    options.seed = seed;
    const auto report = check_p4(net, options);
    CHECK(report.p4.verdict == Verdict::kSampledHolds);
  }
}

TEST_CASE("P4 evidence is monotone in the sample count") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const auto net = unit(generate({GenKind::kSmallWorld, 200, 0.004, seed}));
    Verdict previous = Verdict::kNotChecked;
    for (std::size_t samples : {0, 10, 100, 1000}) {
      ExpansionAuditOptions options;
      options.samples = samples;
      options.seed = seed;
      const auto verdict = check_p4(net, options).p4.verdict;
      if (previous == Verdict::kFails) CHECK(verdict == Verdict::kFails);
      previous = verdict;
    }
  }
}

TEST_CASE("P4 declared bounds") {
  const auto net = assign(generate({GenKind::kGnp, 50, 0.2, 1}), {SchemeKind::kUniform01, 1});
  ExpansionAuditOptions options;
  options.c1 = 0.9;
  CHECK(check_p4(net, options).p4.verdict == Verdict::kInapplicable);
  options.c1 = 1e-7;
  options.c2 = 1.0;
  const auto report = check_p4(net, options);
  CHECK(report.p4.verdict != Verdict::kInapplicable);
  CHECK(report.parameters.expansion_threshold == doctest::Approx(1e-7 / 6.0));
}

TEST_CASE("P5 degree band") {
  const auto circle = circle_graph(1000);
  CHECK(check_p5(circle, 1.45, 0.1).p5.verdict == Verdict::kHolds);
  const auto tight = check_p5(circle, 1.45, 0.5);
  CHECK(tight.p5.verdict == Verdict::kFails);
  CHECK(tight.parameters.degree_lower == doctest::Approx(0.5 * 1.45 * std::log(1000.0)));
  CHECK(witness_reproduces(circle, tight.p5, tight.parameters));

  const auto kn = complete_graph(200);
  const auto dense = check_p5(kn, 1.45, 0.1);
  CHECK(dense.p5.verdict == Verdict::kFails);
  CHECK(dense.p5.vertex_degree == std::optional<std::size_t>(199));
  CHECK(witness_reproduces(kn, dense.p5, dense.parameters));
}

TEST_CASE("P5 on gnp(1000, 0.01) matches the degree band computed directly") {
  // With alpha taken from the edge density the lower end of the band is close
  // to 1, so a single vertex of degree <= 1 fails the property. Such a vertex
  // exists with probability ~ 1 - exp(-0.48) ~ 0.38 per draw.
  std::size_t holds = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto net = unit(generate({GenKind::kGnp, 1000, 0.01, seed}));
    CheckOptions options;
    options.expansion.samples = 0;
    const auto report = check_all(net, options);
    const double lower = report.parameters.degree_lower;
    const double upper = report.parameters.degree_upper;
    bool inside = true;
    for (Vertex v = 0; v < 1000; ++v) {
      const double d = static_cast<double>(net.graph().degree(v));
      inside = inside && lower < d && d < upper;
    }
    CHECK((report.p5.verdict == Verdict::kHolds) == inside);
    if (inside) ++holds;
  }
  CHECK(holds >= 3);
}

TEST_CASE("properness of gnp(1000, 0.01) across 20 draws") {
  std::size_t p1 = 0, p3 = 0, p5 = 0, p2_fail = 0, p4_fail = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto net = unit(generate({GenKind::kGnp, 1000, 0.01, 1000 + seed}));
    CheckOptions options;
    options.expansion.samples = 2000;
    options.expansion.seed = seed;
    const auto r = check_all(net, options);
    p1 += r.p1.verdict == Verdict::kHolds;
    p3 += r.p3.verdict == Verdict::kHolds;
    p5 += r.p5.verdict == Verdict::kHolds;
    p2_fail += r.p2.verdict == Verdict::kFails;
    p4_fail += r.p4.verdict == Verdict::kFails;
  }
  CHECK(p1 >= 18);
  CHECK(p3 >= 18);
  CHECK(p2_fail == 0);
  CHECK(p4_fail == 0);
  // Binomial(20, ~0.62): mean 12.4, sd 2.2.
  CHECK(p5 >= 8);
}

TEST_CASE("check_all derives alpha from the edge density") {
  const auto net = unit(generate({GenKind::kGnp, 500, 0.02, 3}));
  CheckOptions options;
  options.expansion.samples = 100;
  const auto r = check_all(net, options);
  const double density =
      static_cast<double>(net.graph().edge_count()) / (500.0 * 499.0 / 2.0);
  CHECK(r.parameters.alpha == doctest::Approx(density * 500.0 / std::log(500.0)));
  options.alpha = 2.0;
  CHECK(check_all(net, options).parameters.alpha == 2.0);
}

TEST_CASE("verdict names") {
  CHECK(to_string(Verdict::kSampledHolds) == "sampled-holds");
  CHECK(to_string(Verdict::kFails) == "fails");
  CHECK(to_string(Verdict::kInapplicable) == "inapplicable");
}
