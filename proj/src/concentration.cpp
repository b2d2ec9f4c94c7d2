#include "volta/concentration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "volta/error.hpp"

namespace volta {

double predicted_constant(const Network& net, const BoundaryCondition& bc) {
  double weighted = 0.0;
  double total = 0.0;
  for (std::size_t k = 0; k < bc.size(); ++k) {
    const double c = strength(net, bc.vertex(k));
    weighted += bc.potential(k) * c;
    total += c;
  }
  return weighted / total;
}

namespace {

std::vector<double> defined_interior_values(const PotentialField& field,
                                            const BoundaryCondition& bc) {
  const auto boundary_index = bc.index_map(field.vertex_count());
  std::vector<double> values;
  for (Vertex v = 0; v < field.vertex_count(); ++v) {
    if (field.defined[v] && boundary_index[v] < 0) values.push_back(field.values[v]);
  }
  return values;
}

double median_of(std::vector<double> values) {
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower =
      *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

}  // namespace

double interior_median(const PotentialField& field, const BoundaryCondition& bc) {
  auto values = defined_interior_values(field, bc);
  if (values.empty()) throw Error(ErrorCode::kDefinedness, "no defined interior vertex");
  return median_of(std::move(values));
}

ConcentrationStats concentration_stats(const PotentialField& field, const Network& net,
                                       const BoundaryCondition& bc, std::size_t bins) {
  if (bins < 1) throw Error(ErrorCode::kArgument, "histogram needs at least one bin");
  if (field.vertex_count() != net.vertex_count()) {
    throw Error(ErrorCode::kArgument, "field and network sizes differ");
  }
  const auto values = defined_interior_values(field, bc);
  if (values.empty()) throw Error(ErrorCode::kDefinedness, "no defined interior vertex");

  ConcentrationStats stats;
  stats.v_bar_c = predicted_constant(net, bc);
  stats.interior_count = values.size();
  stats.undefined_count = static_cast<std::size_t>(
      std::count(field.defined.begin(), field.defined.end(), false));
  stats.histogram.assign(bins, 0);
  stats.interior_min = values.front();
  stats.interior_max = values.front();

  double sum = 0.0;
  double abs_dev = 0.0;
  for (double v : values) {
    const double dev = std::abs(v - stats.v_bar_c);
    stats.max_dev = std::max(stats.max_dev, dev);
    abs_dev += dev;
    sum += v;
    stats.interior_min = std::min(stats.interior_min, v);
    stats.interior_max = std::max(stats.interior_max, v);
    auto bin = static_cast<std::size_t>(std::clamp(v, 0.0, 1.0) * static_cast<double>(bins));
    ++stats.histogram[std::min(bin, bins - 1)];
  }
  const auto count = static_cast<double>(values.size());
  stats.mean_dev = abs_dev / count;
  stats.interior_mean = sum / count;
  double spread = 0.0;
  for (double v : values) spread += (v - stats.interior_mean) * (v - stats.interior_mean);
  stats.std_dev = std::sqrt(spread / count);
  stats.interior_median = median_of(values);
  return stats;
}

ConsensusState consensus_init(const Network& net, const BoundaryCondition& leaders,
                              const std::vector<double>& initial) {
  check_boundary(net, leaders);
  const std::size_t n = net.vertex_count();
  if (!initial.empty() && initial.size() != n) {
    throw Error(ErrorCode::kArgument, "initial scores must cover every vertex");
  }
  ConsensusState state{.scores = initial.empty() ? std::vector<double>(n, 0.0) : initial,
                       .defined = boundary_reachable(net.graph(), leaders),
                       .leaders = leaders};
  for (std::size_t k = 0; k < leaders.size(); ++k) {
    state.scores[leaders.vertex(k)] = leaders.potential(k);
  }
  return state;
}

void consensus_step(const Network& net, ConsensusState& state) {
  const Graph& g = net.graph();
  const auto leader_index = state.leaders.index_map(net.vertex_count());
  std::vector<double> next = state.scores;
  double delta = 0.0;
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    if (leader_index[v] >= 0 || !state.defined[v]) continue;
    auto nb = g.neighbors(v);
    auto ids = g.incident_edges(v);
    double acc = 0.0;
    for (std::size_t k = 0; k < nb.size(); ++k) acc += net.conductance(ids[k]) * state.scores[nb[k]];
    next[v] = acc / net.raw_strength(v);
    delta = std::max(delta, std::abs(next[v] - state.scores[v]));
  }
  state.scores = std::move(next);
  state.delta = delta;
  ++state.t;
}

ConsensusState consensus_run(const Network& net, const BoundaryCondition& leaders,
                             const ConsensusOptions& options, const std::vector<double>& initial) {
  if (!(options.tol > 0.0)) throw Error(ErrorCode::kArgument, "tolerance must be positive");
  constexpr std::size_t kWindow = 32;
  ConsensusState state = consensus_init(net, leaders, initial);
  const double noise_floor = 16.0 * std::numeric_limits<double>::epsilon();
  double window_start = 0.0;
  double rate = -1.0;
  while (state.t < options.max_steps) {
    consensus_step(net, state);
    if (state.t % kWindow == 1) {
      window_start = state.delta;
    } else if (state.t % kWindow == 0 && window_start > 0.0 && state.delta > 0.0) {
      rate = std::pow(state.delta / window_start, 1.0 / (kWindow - 1));
    }
    if (state.delta > options.tol) continue;
    if (state.delta <= noise_floor ||
        (rate > 0.0 && rate < 1.0 && state.delta * rate / (1.0 - rate) <= options.tol)) {
      return state;
    }
  }
  throw ConvergenceError("consensus did not settle within " + std::to_string(options.max_steps) +
                             " steps (last delta " + std::to_string(state.delta) + ")",
                         state.delta, state.t);
}

PotentialField to_field(const Network& net, const ConsensusState& state) {
  PotentialField field;
  field.values = state.scores;
  field.defined = state.defined;
  field.iterations = state.t;
  const auto leader_index = state.leaders.index_map(net.vertex_count());
  const Graph& g = net.graph();
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    if (!field.defined[v]) {
      field.values[v] = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    if (leader_index[v] >= 0) continue;
    auto nb = g.neighbors(v);
    auto ids = g.incident_edges(v);
    double acc = 0.0;
    for (std::size_t k = 0; k < nb.size(); ++k) acc += net.conductance(ids[k]) * state.scores[nb[k]];
    field.residual_norm = std::max(field.residual_norm, std::abs(state.scores[v] - acc / net.raw_strength(v)));
  }
  return field;
}

}  // namespace volta
