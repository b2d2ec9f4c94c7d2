#include "volta/walk.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "volta/error.hpp"

namespace volta {

TransitionModel::TransitionModel(const Network& net) {
  const Graph& g = net.graph();
  offsets_.reserve(g.vertex_count() + 1);
  offsets_.push_back(0);
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    auto nb = g.neighbors(v);
    auto ids = g.incident_edges(v);
    const double cv = net.raw_strength(v);
    double running = 0.0;
    for (std::size_t k = 0; k < nb.size(); ++k) {
      const double c = net.conductance(ids[k]);
      target_.push_back(nb[k]);
      probability_.push_back(c / cv);
      running += c;
      cumulative_.push_back(running / cv);
    }
    if (!nb.empty()) cumulative_.back() = 1.0;
    offsets_.push_back(target_.size());
  }
}

std::span<const Vertex> TransitionModel::targets(Vertex v) const {
  return {target_.data() + offsets_.at(v), offsets_[v + 1] - offsets_[v]};
}

std::span<const double> TransitionModel::probabilities(Vertex v) const {
  return {probability_.data() + offsets_.at(v), offsets_[v + 1] - offsets_[v]};
}

std::span<const double> TransitionModel::cumulative(Vertex v) const {
  return {cumulative_.data() + offsets_.at(v), offsets_[v + 1] - offsets_[v]};
}

Vertex TransitionModel::step(Vertex v, Rng& rng) const {
  const std::size_t begin = offsets_.at(v);
  const std::size_t end = offsets_[v + 1];
  if (begin == end) {
    throw Error(ErrorCode::kModeling, "walk reached isolated vertex " + std::to_string(v));
  }
  const double u = rng.uniform01();
  auto first = cumulative_.begin() + static_cast<std::ptrdiff_t>(begin);
  auto last = cumulative_.begin() + static_cast<std::ptrdiff_t>(end);
  // u < 1 == last cumulative entry, so the search never runs off the row.
  auto it = std::upper_bound(first, last, u);
  return target_[static_cast<std::size_t>(it - cumulative_.begin())];
}

double HittingEstimate::probability(Vertex v, std::size_t k) const {
  if (!estimated.at(v)) return std::numeric_limits<double>::quiet_NaN();
  return static_cast<double>(hits[v * boundary_count + k]) / static_cast<double>(walks[v]);
}

double HittingEstimate::standard_error(Vertex v, std::size_t k) const {
  const double p = probability(v, k);
  return std::sqrt(p * (1.0 - p) / static_cast<double>(walks[v]));
}

HittingEstimate hitting_probabilities(const Network& net, const BoundaryCondition& bc,
                                      const HittingOptions& options) {
  if (options.walks_per_vertex < 1) {
    throw Error(ErrorCode::kArgument, "walks_per_vertex must be positive");
  }
  check_boundary(net, bc);
  const std::size_t n = net.vertex_count();
  const std::size_t K = bc.size();
  const auto boundary_index = bc.index_map(n);
  const auto reachable = boundary_reachable(net.graph(), bc);

  std::vector<Vertex> starts = options.starts;
  if (starts.empty()) {
    for (Vertex v = 0; v < n; ++v)
      if (reachable[v]) starts.push_back(v);
  } else {
    for (Vertex v : starts) {
      if (v >= n) throw Error(ErrorCode::kIndex, "start vertex out of range");
      if (!reachable[v]) {
        throw Error(ErrorCode::kDefinedness,
                    "start vertex " + std::to_string(v) + " has no path to the boundary");
      }
    }
  }

  HittingEstimate est;
  est.vertex_count = n;
  est.boundary_count = K;
  est.estimated.assign(n, false);
  est.walks.assign(n, 0);
  est.hits.assign(n * K, 0);
  est.potential.assign(n, std::numeric_limits<double>::quiet_NaN());
  est.potential_stderr.assign(n, std::numeric_limits<double>::quiet_NaN());

  const TransitionModel model(net);
  std::atomic<std::uint64_t> steps_taken{0};
  std::atomic<bool> over_budget{false};

  auto walk_from = [&](Vertex start) {
    Rng rng(derive_seed(options.seed, start));
    std::uint64_t* hits = est.hits.data() + static_cast<std::size_t>(start) * K;
    std::uint64_t local_steps = 0;
    for (std::size_t w = 0; w < options.walks_per_vertex; ++w) {
      Vertex x = start;
      while (boundary_index[x] < 0) {
        x = model.step(x, rng);
        if (++local_steps == 4096) {
          if (steps_taken.fetch_add(local_steps) + local_steps > options.step_cap) {
            over_budget = true;
          }
          local_steps = 0;
          if (over_budget) return;
        }
      }
      ++hits[boundary_index[x]];
    }
    if (steps_taken.fetch_add(local_steps) + local_steps > options.step_cap) over_budget = true;
    est.walks[start] = options.walks_per_vertex;
  };

  const std::size_t threads = std::max<std::size_t>(1, std::min(options.threads, starts.size()));
  if (threads == 1) {
    for (Vertex v : starts) {
      walk_from(v);
      if (over_budget) break;
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        try {
          for (std::size_t i = next++; i < starts.size() && !over_budget; i = next++) {
            walk_from(starts[i]);
          }
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
  }
  if (over_budget) {
    throw Error(ErrorCode::kBudget, "random walks exceeded the step cap of " +
                                        std::to_string(options.step_cap) +
                                        " (near-disconnected trap?)");
  }
  est.total_steps = steps_taken.load();

  for (Vertex v : starts) {
    est.estimated[v] = true;
    const double walks = static_cast<double>(est.walks[v]);
    double mean = 0.0;
    double second = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
      const double share = static_cast<double>(est.hits[v * K + k]) / walks;
      mean += bc.potential(k) * share;
      second += bc.potential(k) * bc.potential(k) * share;
    }
    est.potential[v] = mean;
    est.potential_stderr[v] = std::sqrt(std::max(0.0, second - mean * mean) / walks);
  }
  return est;
}

std::vector<double> stationary_distribution(const Network& net) {
  std::vector<double> pi(net.strengths().begin(), net.strengths().end());
  double total = 0.0;
  for (double s : pi) total += s;
  for (double& s : pi) s /= total;
  return pi;
}

std::vector<double> occupancy(const TransitionModel& model, Vertex start, std::uint64_t steps,
                              std::uint64_t seed) {
  std::vector<std::uint64_t> visits(model.vertex_count(), 0);
  Rng rng(seed);
  Vertex x = start;
  for (std::uint64_t t = 0; t < steps; ++t) {
    x = model.step(x, rng);
    ++visits[x];
  }
  std::vector<double> freq(visits.size());
  for (std::size_t i = 0; i < visits.size(); ++i) {
    freq[i] = static_cast<double>(visits[i]) / static_cast<double>(steps);
  }
  return freq;
}

double total_variation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::kArgument, "distribution sizes differ");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += std::abs(a[i] - b[i]);
  return std::min(1.0, 0.5 * sum);
}

InducedNetwork induced_network(const Network& net, const std::vector<bool>& keep) {
  auto sub = induced_subgraph(net.graph(), keep);
  InducedNetwork out;
  out.original = std::move(sub.original);
  out.vertex_count = sub.graph.vertex_count();
  if (sub.graph.edge_count() > 0) {
    std::vector<double> c;
    c.reserve(sub.edge_origin.size());
    for (auto id : sub.edge_origin) c.push_back(net.conductance(id));
    out.network.emplace(std::move(sub.graph), std::move(c));
  }
  return out;
}

MixingReport mixing_diagnostics(const Network& net, std::span<const Vertex> excluded,
                                const MixingOptions& options) {
  if (!(options.k0 > 0.0)) throw Error(ErrorCode::kArgument, "K0 must be positive");
  if (options.samples < 1) throw Error(ErrorCode::kArgument, "samples must be positive");
  const std::size_t n = net.vertex_count();
  std::vector<bool> keep(n, true);
  for (Vertex x : excluded) {
    if (x >= n) throw Error(ErrorCode::kIndex, "excluded vertex out of range");
    keep[x] = false;
  }

  MixingReport report;
  report.samples = options.samples;
  report.t0 = static_cast<std::size_t>(std::ceil(options.k0 * std::log(static_cast<double>(n))));
  report.horizon = 2 * report.t0;
  report.tv_distance = std::numeric_limits<double>::quiet_NaN();

  if (options.start) {
    if (*options.start >= n) throw Error(ErrorCode::kIndex, "start vertex out of range");
    if (!keep[*options.start]) {
      throw Error(ErrorCode::kArgument, "start vertex lies in the excluded set");
    }
    report.start = *options.start;
  } else {
    auto it = std::find(keep.begin(), keep.end(), true);
    if (it == keep.end()) {
      report.applicable = false;
      report.reason = "every vertex is excluded";
      report.escape_prob = 0.0;
      return report;
    }
    report.start = static_cast<Vertex>(it - keep.begin());
  }

  // Escape from the excluded set, walking on the full network.
  const TransitionModel full(net);
  if (excluded.empty()) {
    report.escape_prob = 1.0;
  } else if (net.graph().degree(report.start) == 0) {
    report.escape_prob = 1.0;  // an isolated start never moves
  } else {
    std::size_t escaped = 0;
    for (std::size_t s = 0; s < options.samples; ++s) {
      Rng rng(derive_seed(options.seed, 2, s));
      Vertex x = report.start;
      bool hit = false;
      for (std::size_t t = 0; t < report.horizon && !hit; ++t) {
        x = full.step(x, rng);
        hit = !keep[x];
      }
      if (!hit) ++escaped;
    }
    report.escape_prob = static_cast<double>(escaped) / static_cast<double>(options.samples);
  }

  // Distribution at time 2 t0 on the induced subnetwork.
  auto induced = induced_network(net, keep);
  if (!induced.network) {
    report.applicable = false;
    report.reason = "induced subnetwork has no edges";
    return report;
  }
  const Network& sub = *induced.network;
  if (!is_connected(sub.graph())) {
    report.applicable = false;
    report.reason = "induced subnetwork is disconnected";
    return report;
  }
  if (is_bipartite(sub.graph())) {
    report.applicable = false;
    report.reason = "induced subnetwork is bipartite";
    return report;
  }
  const auto start_it =
      std::lower_bound(induced.original.begin(), induced.original.end(), report.start);
  const auto sub_start = static_cast<Vertex>(start_it - induced.original.begin());
  const TransitionModel model(sub);
  std::vector<std::uint64_t> landed(sub.vertex_count(), 0);
  for (std::size_t s = 0; s < options.samples; ++s) {
    Rng rng(derive_seed(options.seed, 1, s));
    Vertex x = sub_start;
    for (std::size_t t = 0; t < report.horizon; ++t) x = model.step(x, rng);
    ++landed[x];
  }
  std::vector<double> empirical(landed.size());
  for (std::size_t i = 0; i < landed.size(); ++i) {
    empirical[i] = static_cast<double>(landed[i]) / static_cast<double>(options.samples);
  }
  report.tv_distance = total_variation(empirical, stationary_distribution(sub));
  return report;
}

MixingReport mixing_diagnostics(const Network& net, const BoundaryCondition& excluded,
                                const MixingOptions& options) {
  return mixing_diagnostics(net, excluded.vertices(), options);
}

}  // namespace volta
