#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "volta/graph.hpp"

namespace volta {

enum class GenKind { kGnp, kCircle, kSmallWorld };

std::string_view to_string(GenKind kind);
// Accepts "gnp", "circle", "small_world" and "small-world".
GenKind parse_gen_kind(std::string_view text);

struct GenSpec {
  GenKind kind = GenKind::kGnp;
  std::size_t n = 0;
  double p = 0.0;  // ignored for kCircle
  std::uint64_t seed = 0;
};

// p = alpha * ln(n) / n, clamped to [0, 1].
double alpha_to_p(double alpha, std::size_t n);
double p_to_alpha(double p, std::size_t n);

// Throws kArgument when n < 3 or p is outside [0, 1].
void validate(const GenSpec& spec);

// Deterministic in spec. G(n,p) pairs are visited in the order
// (1,0), (2,0), (2,1), (3,0), ... and sampled by geometric skipping, so the
// cost is O(n + m) rather than O(n^2).
Graph generate(const GenSpec& spec);

Graph circle_graph(std::size_t n);
Graph complete_graph(std::size_t n);

struct PairFrequency {
  Edge pair;
  double frequency = 0.0;
};

// Inclusion frequency of a fixed sample of vertex pairs over `trials`
// independent draws of G(n,p), seeds derived from spec.seed. The sampled
// pairs are (0,1), (0,n-1), (n/2-1, n/2) and a handful chosen from a
// separate stream.
std::vector<PairFrequency> edge_probability_audit(const GenSpec& spec, std::size_t trials);

}  // namespace volta
