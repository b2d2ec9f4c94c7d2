#pragma once

#include <cstddef>
#include <vector>

#include "volta/harmonic.hpp"
#include "volta/network.hpp"

namespace volta {

// sum_k p_k c_{x_k} / sum_k c_{x_k}. Throws kModeling for an isolated
// boundary vertex.
double predicted_constant(const Network& net, const BoundaryCondition& bc);

struct ConcentrationStats {
  double v_bar_c = 0.0;
  double max_dev = 0.0;         // max |V_i - v_bar_c| over defined interior vertices
  double mean_dev = 0.0;        // mean |V_i - v_bar_c|
  double std_dev = 0.0;         // population standard deviation of V_i
  double interior_mean = 0.0;
  double interior_median = 0.0;
  double interior_min = 0.0;
  double interior_max = 0.0;
  std::size_t interior_count = 0;
  std::size_t undefined_count = 0;
  std::vector<std::size_t> histogram;  // equal-width bins over [0, 1]; 1.0 lands in the last
};

inline constexpr std::size_t kDefaultHistogramBins = 50;

// Throws kDefinedness when the field has no defined interior vertex.
ConcentrationStats concentration_stats(const PotentialField& field, const Network& net,
                                       const BoundaryCondition& bc,
                                       std::size_t bins = kDefaultHistogramBins);

// Median of the defined interior values.
double interior_median(const PotentialField& field, const BoundaryCondition& bc);

struct ConsensusState {
  std::vector<double> scores;
  std::vector<bool> defined;  // followers connected to some leader, and the leaders
  BoundaryCondition leaders;
  std::size_t t = 0;
  double delta = 0.0;         // max follower change in the last step
};

// Leaders pinned to their potentials; followers start from `initial`
// (one value per vertex, leader entries ignored) or zero when empty.
ConsensusState consensus_init(const Network& net, const BoundaryCondition& leaders,
                              const std::vector<double>& initial = {});

// One synchronous step s(t+1) = P s(t) on the followers.
void consensus_step(const Network& net, ConsensusState& state);

struct ConsensusOptions {
  double tol = 1e-10;
  std::size_t max_steps = 10'000'000;
};

// Iterates until delta <= tol and the geometric error estimate
// delta * q / (1 - q) <= tol (q = observed contraction per step). Throws
// ConvergenceError with the last delta after max_steps.
ConsensusState consensus_run(const Network& net, const BoundaryCondition& leaders,
                             const ConsensusOptions& options = {},
                             const std::vector<double>& initial = {});

// Scores as a field: undefined vertices get NaN and residual is the
// harmonic defect of the final scores.
PotentialField to_field(const Network& net, const ConsensusState& state);

}  // namespace volta
