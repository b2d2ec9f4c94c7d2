#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "volta/graph.hpp"

namespace volta {

enum class SchemeKind { kUnit, kUniform01, kPowerLaw };

std::string_view to_string(SchemeKind kind);
// Accepts "unit", "uniform01", "power_law" and "powerlaw".
SchemeKind parse_scheme_kind(std::string_view text);

struct ConductanceScheme {
  SchemeKind kind = SchemeKind::kUnit;
  std::uint64_t seed = 0;
  double gamma = 2.5;       // power-law density exponent, f(x) ~ x^-gamma on [1, inf)
  double epsilon = 1e-6;    // floor for uniform01 draws
};

// Throws kArgument for gamma <= 1 or epsilon < 0 / epsilon >= 1.
void validate(const ConductanceScheme& scheme);

// Inverse CDF of the Pareto law with scale 1 and tail index gamma - 1.
// u in [0, 1) maps to [1, inf).
double power_law_inverse_cdf(double u, double gamma);

// Graph plus a strictly positive conductance per edge (indexed like
// Graph::edges()) and the cached vertex strengths.
class Network {
 public:
  Network() = default;
  // Throws kDegenerate on an empty edge set, kArgument on a size mismatch or
  // a non-positive / non-finite conductance.
  Network(Graph graph, std::vector<double> conductance);

  const Graph& graph() const noexcept { return graph_; }
  std::size_t vertex_count() const noexcept { return graph_.vertex_count(); }
  std::span<const double> conductances() const noexcept { return conductance_; }
  double conductance(std::size_t edge_id) const { return conductance_[edge_id]; }
  // Throws kArgument when (a, b) is not an edge.
  double conductance(Vertex a, Vertex b) const;

  // Cached c_v; zero for isolated vertices.
  double raw_strength(Vertex v) const { return strength_[v]; }
  std::span<const double> strengths() const noexcept { return strength_; }

  double min_conductance() const noexcept { return min_c_; }
  double max_conductance() const noexcept { return max_c_; }

 private:
  Graph graph_;
  std::vector<double> conductance_;
  std::vector<double> strength_;
  double min_c_ = 0.0;
  double max_c_ = 0.0;
};

// Conductances are drawn in canonical sorted edge order from a single stream
// seeded with scheme.seed. Throws kDegenerate when g has no edges.
Network assign(const Graph& g, const ConductanceScheme& scheme);

// Sum of incident conductances. Throws kModeling for an isolated vertex and
// kIndex when v is out of range.
double strength(const Network& net, Vertex v);

// Strengths recomputed from scratch, independent of the cache.
std::vector<double> recompute_strengths(const Network& net);

// Copy of net with every conductance multiplied by factor > 0.
Network scaled(const Network& net, double factor);

}  // namespace volta
