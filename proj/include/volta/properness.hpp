#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "volta/graph.hpp"
#include "volta/network.hpp"

namespace volta {

enum class Verdict { kHolds, kFails, kSampledHolds, kInapplicable, kNotChecked };

std::string_view to_string(Verdict verdict);

// Evidence for the edge-expansion property on one subset S of V \ L.
struct ExpansionWitness {
  std::vector<Vertex> subset;   // S, ascending
  std::vector<Vertex> excluded; // L, ascending
  double cut = 0.0;             // sum of c_ij over G' edges leaving S
  double volume = 0.0;          // sum over S of c'_i (strength inside G')
  double ratio = 0.0;           // cut / volume; 0 when volume == 0
};

struct PropertyResult {
  Verdict verdict = Verdict::kNotChecked;
  std::string detail;                       // human-readable witness / note
  std::vector<Cycle> cycles;                // P2: offending pair; P3: found cycles
  std::optional<std::size_t> missing_cycle_length;   // P3
  std::optional<ExpansionWitness> expansion;         // P4
  std::optional<Vertex> vertex;                      // P5
  std::optional<std::size_t> vertex_degree;          // P5
};

struct PropernessParameters {
  std::size_t vertex_count = 0;
  // P2
  std::size_t short_cycle_cap = 0;        // floor(ln n / (10 ln ln n))
  std::size_t cycle_separation = 0;       // ceil(ln n / ln ln n)
  // P4
  double c1 = 0.0;
  double c2 = 0.0;
  double expansion_threshold = 0.0;       // C1 / (6 C2)
  std::size_t exhaustive_cap = 0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::size_t subsets_examined = 0;
  // P5
  double alpha = 0.0;
  double delta = 0.0;
  double degree_lower = 0.0;              // delta * alpha * ln n
  double degree_upper = 0.0;              // 4 * alpha * ln n
};

struct PropernessReport {
  PropertyResult p1, p2, p3, p4, p5;
  PropernessParameters parameters;
};

std::size_t short_cycle_cap(std::size_t n);
std::size_t cycle_separation(std::size_t n);

// Connectivity, short-cycle separation and odd-cycle (3, 5, 7) existence.
// Requires n >= 3.
PropernessReport check_p1_p3(const Graph& g);

// Cut / volume of S inside G' = G[V \ L]. Throws kArgument if S meets L.
ExpansionWitness expansion_ratio(const Network& net, std::span<const Vertex> excluded,
                                 std::span<const Vertex> subset);

struct ExpansionAuditOptions {
  std::vector<Vertex> excluded;       // L
  std::size_t exhaustive_cap = 2;     // every S with |S| <= cap is tried
  std::size_t samples = 10'000;       // uniformly sampled larger subsets
  std::uint64_t seed = 0;
  std::optional<double> c1;           // default: min conductance
  std::optional<double> c2;           // default: max conductance
};

// Edge-expansion audit over S subset of V \ L with |S| <= n / 2: exhaustive
// for small S, then uniform random subsets of uniformly drawn size, then the
// BFS balls around every vertex (which expose long thin cuts that uniform
// subsets never hit). Sample i always draws from substream i, so more
// samples only add evidence. Subsets with zero volume satisfy the bound
// trivially. Verdict is kHolds only when the exhaustive pass
// covered every admissible size.
PropernessReport check_p4(const Network& net, const ExpansionAuditOptions& options);

// delta * alpha * ln n < d(i) < 4 * alpha * ln n for every vertex.
PropernessReport check_p5(const Graph& g, double alpha, double delta);

struct CheckOptions {
  double alpha = 0.0;   // <= 0: derive from edge density, alpha = p n / ln n
  double delta = 0.1;
  ExpansionAuditOptions expansion;
};

PropernessReport check_all(const Network& net, const CheckOptions& options);

// Re-evaluates a failing witness from scratch; true when the violation
// reproduces.
bool witness_reproduces(const Graph& g, const PropertyResult& result,
                        const PropernessParameters& parameters);
bool witness_reproduces(const Network& net, const PropertyResult& p4,
                        const PropernessParameters& parameters);

}  // namespace volta
