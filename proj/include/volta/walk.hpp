#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "volta/harmonic.hpp"
#include "volta/network.hpp"
#include "volta/rng.hpp"

namespace volta {

// Weighted walk transition tables: from v, neighbor k of v is chosen with
// probability c_vk / c_v. Sampling is a binary search over the cumulative
// row, O(log deg).
class TransitionModel {
 public:
  explicit TransitionModel(const Network& net);

  std::size_t vertex_count() const noexcept { return offsets_.size() - 1; }
  std::span<const Vertex> targets(Vertex v) const;
  // Row probabilities p_vj, aligned with targets(v).
  std::span<const double> probabilities(Vertex v) const;
  // Cumulative row; the last entry of every non-empty row is exactly 1.
  std::span<const double> cumulative(Vertex v) const;

  // Throws kModeling ("walk error") when v has no neighbors.
  Vertex step(Vertex v, Rng& rng) const;

 private:
  std::vector<std::size_t> offsets_;
  std::vector<Vertex> target_;
  std::vector<double> probability_;
  std::vector<double> cumulative_;
};

inline Vertex step(const TransitionModel& model, Vertex v, Rng& rng) {
  return model.step(v, rng);
}

inline constexpr std::uint64_t kDefaultWalkStepCap = 1'000'000'000ULL;

struct HittingOptions {
  std::size_t walks_per_vertex = 10'000;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  std::uint64_t step_cap = kDefaultWalkStepCap;  // total over all walks
  // Explicit start vertices; empty means every vertex, with vertices in
  // boundary-free components reported as undefined instead of walked.
  std::vector<Vertex> starts;
};

// First-boundary-hit frequencies. Walks from vertex i draw from the
// substream derive_seed(seed, i), so results do not depend on `threads`.
struct HittingEstimate {
  std::size_t vertex_count = 0;
  std::size_t boundary_count = 0;
  std::vector<bool> estimated;             // per vertex
  std::vector<std::uint64_t> walks;        // per vertex
  std::vector<std::uint64_t> hits;         // vertex-major, vertex_count x boundary_count
  std::vector<double> potential;           // sum_k p_k P_i^k, NaN when not estimated
  std::vector<double> potential_stderr;    // sample std of the payoff / sqrt(walks)
  std::uint64_t total_steps = 0;

  double probability(Vertex v, std::size_t k) const;
  double standard_error(Vertex v, std::size_t k) const;
};

// Throws kDefinedness for an explicit start with no path to the boundary and
// kBudget once the total number of steps exceeds options.step_cap.
HittingEstimate hitting_probabilities(const Network& net, const BoundaryCondition& bc,
                                      const HittingOptions& options);

struct MixingOptions {
  double k0 = 10.0;
  std::size_t samples = 100'000;
  std::uint64_t seed = 0;
  std::optional<Vertex> start;  // default: smallest non-excluded vertex
};

struct MixingReport {
  std::size_t t0 = 0;            // ceil(k0 ln n)
  std::size_t horizon = 0;       // 2 t0
  Vertex start = 0;
  bool applicable = true;        // N' connected and non-bipartite
  std::string reason;            // why not applicable
  double tv_distance = 0.0;      // NaN when not applicable
  double escape_prob = 0.0;      // fraction of walks on N avoiding the excluded set
  std::size_t samples = 0;
};

// Walks of length 2 t0 from `start`: on N' = N[V \ excluded] for the
// total-variation distance to pi'(j) = c'_j / sum c'_i, and on N to estimate
// the probability of never touching `excluded`. An inapplicable N' is
// reported, not thrown.
MixingReport mixing_diagnostics(const Network& net, std::span<const Vertex> excluded,
                                const MixingOptions& options);
MixingReport mixing_diagnostics(const Network& net, const BoundaryCondition& excluded,
                                const MixingOptions& options);

// pi(j) = c_j / sum_i c_i.
std::vector<double> stationary_distribution(const Network& net);

// Visit frequencies of a single walk of `steps` steps (the start is not
// counted).
std::vector<double> occupancy(const TransitionModel& model, Vertex start, std::uint64_t steps,
                              std::uint64_t seed);

double total_variation(std::span<const double> a, std::span<const double> b);

// Network induced on the vertices with keep[v] set, conductances carried
// over. `original` maps new ids back.
struct InducedNetwork {
  std::optional<Network> network;  // empty when no edge survives
  std::vector<Vertex> original;
  std::size_t vertex_count = 0;
};

InducedNetwork induced_network(const Network& net, const std::vector<bool>& keep);

}  // namespace volta
