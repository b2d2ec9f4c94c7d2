#include "volta/properness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "volta/error.hpp"
#include "volta/rng.hpp"

namespace volta {

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::kHolds:
      return "holds";
    case Verdict::kFails:
      return "fails";
    case Verdict::kSampledHolds:
      return "sampled-holds";
    case Verdict::kInapplicable:
      return "inapplicable";
    case Verdict::kNotChecked:
      return "not-checked";
  }
  return "?";
}

namespace {

double ln_n(std::size_t n) { return std::log(static_cast<double>(n)); }

void require_order(std::size_t n) {
  if (n < 3) throw Error(ErrorCode::kArgument, "properness checks need n >= 3");
}

std::string format_cycle(const Cycle& c) {
  std::ostringstream out;
  for (std::size_t i = 0; i < c.size(); ++i) out << (i ? "-" : "") << c[i] + 1;
  return out.str();
}

std::uint32_t cycle_distance(const Graph& g, const Cycle& a, const Cycle& b) {
  const auto dist = bfs_distances(g, a);
  std::uint32_t best = kUnreachable;
  for (Vertex v : b) best = std::min(best, dist[v]);
  return best;
}

}  // namespace

std::size_t short_cycle_cap(std::size_t n) {
  require_order(n);
  const double l = ln_n(n);
  return static_cast<std::size_t>(std::floor(l / (10.0 * std::log(l))));
}

std::size_t cycle_separation(std::size_t n) {
  require_order(n);
  const double l = ln_n(n);
  return static_cast<std::size_t>(std::ceil(l / std::log(l)));
}

PropernessReport check_p1_p3(const Graph& g) {
  const std::size_t n = g.vertex_count();
  require_order(n);
  PropernessReport report;
  report.parameters.vertex_count = n;
  report.parameters.short_cycle_cap = short_cycle_cap(n);
  report.parameters.cycle_separation = cycle_separation(n);

  // P1
  const auto labels = components(g);
  if (labels.count() == 1) {
    report.p1.verdict = Verdict::kHolds;
    report.p1.detail = "connected";
  } else {
    report.p1.verdict = Verdict::kFails;
    const auto it = std::find_if(labels.component_id.begin(), labels.component_id.end(),
                                 [](std::uint32_t id) { return id != 0; });
    report.p1.vertex = static_cast<Vertex>(it - labels.component_id.begin());
    report.p1.detail = std::to_string(labels.count()) + " components; vertex " +
                       std::to_string(*report.p1.vertex + 1) + " is unreachable from vertex 1";
  }

  // P2
  const std::size_t cap = report.parameters.short_cycle_cap;
  const std::size_t separation = report.parameters.cycle_separation;
  report.p2.verdict = Verdict::kHolds;
  if (cap < 3) {
    report.p2.detail = "short-cycle length cap " + std::to_string(cap) +
                       " < 3: no cycle is short, holds vacuously";
  } else {
    const auto cycles = cycles_up_to(g, cap);
    report.p2.detail = std::to_string(cycles.size()) + " short cycles, all pairwise at distance >= " +
                       std::to_string(separation);
    for (std::size_t i = 0; i < cycles.size() && report.p2.verdict == Verdict::kHolds; ++i) {
      const auto dist = bfs_distances(g, cycles[i]);
      for (std::size_t j = i + 1; j < cycles.size(); ++j) {
        std::uint32_t d = kUnreachable;
        for (Vertex v : cycles[j]) d = std::min(d, dist[v]);
        if (d < separation) {
          report.p2.verdict = Verdict::kFails;
          report.p2.cycles = {cycles[i], cycles[j]};
          report.p2.detail = "short cycles " + format_cycle(cycles[i]) + " and " +
                             format_cycle(cycles[j]) + " are at distance " + std::to_string(d) +
                             " < " + std::to_string(separation);
          break;
        }
      }
    }
  }

  // P3
  report.p3.verdict = Verdict::kHolds;
  std::ostringstream found;
  for (std::size_t length : {3u, 5u, 7u}) {
    auto cycle = find_cycle_of_length(g, length);
    if (!cycle) {
      report.p3.verdict = Verdict::kFails;
      report.p3.missing_cycle_length = length;
      report.p3.detail = "no " + std::to_string(length) + "-cycle";
      break;
    }
    found << (report.p3.cycles.empty() ? "" : "; ") << format_cycle(*cycle);
    report.p3.cycles.push_back(std::move(*cycle));
  }
  if (report.p3.verdict == Verdict::kHolds) report.p3.detail = "found " + found.str();
  return report;
}

ExpansionWitness expansion_ratio(const Network& net, std::span<const Vertex> excluded,
                                 std::span<const Vertex> subset) {
  const Graph& g = net.graph();
  std::vector<char> role(g.vertex_count(), 0);  // 1 = excluded, 2 = in S
  for (Vertex x : excluded) {
    if (x >= g.vertex_count()) throw Error(ErrorCode::kIndex, "excluded vertex out of range");
    role[x] = 1;
  }
  ExpansionWitness w;
  for (Vertex v : subset) {
    if (v >= g.vertex_count()) throw Error(ErrorCode::kIndex, "subset vertex out of range");
    if (role[v] == 1) throw Error(ErrorCode::kArgument, "subset meets the excluded set");
    role[v] = 2;
  }
  for (Vertex v : subset) {
    auto nb = g.neighbors(v);
    auto ids = g.incident_edges(v);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      if (role[nb[k]] == 1) continue;
      const double c = net.conductance(ids[k]);
      w.volume += c;
      if (role[nb[k]] != 2) w.cut += c;
    }
  }
  w.ratio = w.volume > 0.0 ? w.cut / w.volume : 0.0;
  w.subset.assign(subset.begin(), subset.end());
  std::sort(w.subset.begin(), w.subset.end());
  w.excluded.assign(excluded.begin(), excluded.end());
  std::sort(w.excluded.begin(), w.excluded.end());
  return w;
}

namespace {

// Incremental cut/volume bookkeeping for subsets of V' = V \ L.
class ExpansionAuditor {
 public:
  ExpansionAuditor(const Network& net, std::span<const Vertex> excluded)
      : net_(net), g_(net.graph()), excluded_(g_.vertex_count(), false),
        in_set_(g_.vertex_count(), false), inner_strength_(g_.vertex_count(), 0.0) {
    for (Vertex x : excluded) {
      if (x >= g_.vertex_count()) throw Error(ErrorCode::kIndex, "excluded vertex out of range");
      excluded_[x] = true;
    }
    for (Vertex v = 0; v < g_.vertex_count(); ++v) {
      if (excluded_[v]) continue;
      active_.push_back(v);
      auto nb = g_.neighbors(v);
      auto ids = g_.incident_edges(v);
      for (std::size_t k = 0; k < nb.size(); ++k) {
        if (!excluded_[nb[k]]) inner_strength_[v] += net.conductance(ids[k]);
      }
    }
  }

  const std::vector<Vertex>& active() const { return active_; }
  bool excluded(Vertex v) const { return excluded_[v]; }

  void add(Vertex v) {
    double to_set = 0.0;
    auto nb = g_.neighbors(v);
    auto ids = g_.incident_edges(v);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      if (in_set_[nb[k]]) to_set += net_.conductance(ids[k]);
    }
    in_set_[v] = true;
    members_.push_back(v);
    volume_ += inner_strength_[v];
    cut_ += inner_strength_[v] - 2.0 * to_set;
  }

  void clear() {
    for (Vertex v : members_) in_set_[v] = false;
    members_.clear();
    volume_ = 0.0;
    cut_ = 0.0;
  }

  double ratio() const { return volume_ > 0.0 ? std::max(0.0, cut_) / volume_ : 0.0; }
  double volume() const { return volume_; }
  const std::vector<Vertex>& members() const { return members_; }

 private:
  const Network& net_;
  const Graph& g_;
  std::vector<bool> excluded_;
  std::vector<bool> in_set_;
  std::vector<double> inner_strength_;
  std::vector<Vertex> active_;
  std::vector<Vertex> members_;
  double volume_ = 0.0;
  double cut_ = 0.0;
};

}  // namespace

PropernessReport check_p4(const Network& net, const ExpansionAuditOptions& options) {
  const Graph& g = net.graph();
  const std::size_t n = g.vertex_count();
  PropernessReport report;
  auto& params = report.parameters;
  params.vertex_count = n;
  params.c1 = options.c1.value_or(net.min_conductance());
  params.c2 = options.c2.value_or(net.max_conductance());
  params.exhaustive_cap = options.exhaustive_cap;
  params.samples = options.samples;
  params.seed = options.seed;
  auto& result = report.p4;
  if (!(params.c1 > 0.0) || params.c1 > params.c2 || net.min_conductance() < params.c1 ||
      net.max_conductance() > params.c2) {
    result.verdict = Verdict::kInapplicable;
    result.detail = "conductances do not satisfy the declared bounds C1 <= c_ij <= C2";
    return report;
  }
  params.expansion_threshold = params.c1 / (6.0 * params.c2);
  const double threshold = params.expansion_threshold;

  ExpansionAuditor audit(net, options.excluded);
  const auto& active = audit.active();
  const std::size_t half = std::min(n / 2, active.size());
  double smallest = std::numeric_limits<double>::infinity();
  std::size_t examined = 0;

  auto record = [&](const std::vector<Vertex>& members) {
    ++examined;
    // A subset with no volume satisfies cut >= threshold * volume trivially.
    if (!(audit.volume() > 0.0)) return false;
    const double r = audit.ratio();
    smallest = std::min(smallest, r);
    if (r < threshold) {
      result.verdict = Verdict::kFails;
      result.expansion = expansion_ratio(net, options.excluded, members);
      return true;
    }
    return false;
  };

  // Exhaustive over all subsets of size 1..cap, via lexicographic index
  // combinations.
  const std::size_t exhaustive_top = std::min(options.exhaustive_cap, half);
  bool violated = false;
  for (std::size_t size = 1; size <= exhaustive_top && !violated; ++size) {
    std::vector<std::size_t> pick(size);
    std::iota(pick.begin(), pick.end(), 0);
    while (true) {
      audit.clear();
      for (auto i : pick) audit.add(active[i]);
      if (record(audit.members())) {
        violated = true;
        break;
      }
      std::size_t pos = size;
      while (pos > 0 && pick[pos - 1] == active.size() - size + pos - 1) --pos;
      if (pos == 0) break;
      ++pick[pos - 1];
      for (std::size_t j = pos; j < size; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  const bool exhaustive_complete = exhaustive_top >= half;

  // Uniform random subsets of uniformly drawn size in (cap, half].
  if (!violated && !exhaustive_complete) {
    std::vector<Vertex> pool;
    for (std::size_t s = 0; s < options.samples && !violated; ++s) {
      Rng rng(derive_seed(options.seed, s));
      const std::size_t lo = exhaustive_top + 1;
      const std::size_t size = lo + static_cast<std::size_t>(rng.below(half - lo + 1));
      pool = active;
      audit.clear();
      for (std::size_t i = 0; i < size; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
        std::swap(pool[i], pool[j]);
        audit.add(pool[i]);
      }
      violated = record(audit.members());
    }
  }

  // Every BFS-order prefix (within G') of size up to half around each vertex.
  if (!violated && !exhaustive_complete) {
    std::vector<bool> seen(n, false);
    std::vector<Vertex> queue;
    for (Vertex root : active) {
      if (violated) break;
      audit.clear();
      queue.assign(1, root);
      seen[root] = true;
      for (std::size_t head = 0; head < queue.size() && audit.members().size() < half; ++head) {
        const Vertex x = queue[head];
        audit.add(x);
        if (audit.members().size() > exhaustive_top && record(audit.members())) {
          violated = true;
          break;
        }
        for (Vertex y : g.neighbors(x)) {
          if (!seen[y] && !audit.excluded(y)) {
            seen[y] = true;
            queue.push_back(y);
          }
        }
      }
      for (Vertex v : queue) seen[v] = false;
    }
  }
  params.subsets_examined = examined;

  std::ostringstream detail;
  if (violated) {
    const auto& w = *result.expansion;
    detail << "subset of size " << w.subset.size() << " has cut/volume " << w.cut << "/"
           << w.volume << " = " << w.ratio << " < " << threshold;
  } else {
    result.verdict = exhaustive_complete ? Verdict::kHolds : Verdict::kSampledHolds;
    detail << examined << " subsets examined, smallest ratio " << smallest
           << " >= " << threshold;
  }
  result.detail = detail.str();
  return report;
}

PropernessReport check_p5(const Graph& g, double alpha, double delta) {
  const std::size_t n = g.vertex_count();
  require_order(n);
  if (!(alpha > 0.0) || !(delta > 0.0)) {
    throw Error(ErrorCode::kArgument, "alpha and delta must be positive");
  }
  PropernessReport report;
  auto& params = report.parameters;
  params.vertex_count = n;
  params.alpha = alpha;
  params.delta = delta;
  params.degree_lower = delta * alpha * ln_n(n);
  params.degree_upper = 4.0 * alpha * ln_n(n);
  report.p5.verdict = Verdict::kHolds;
  report.p5.detail = "all degrees inside the band";
  for (Vertex v = 0; v < n; ++v) {
    const auto d = static_cast<double>(g.degree(v));
    if (!(params.degree_lower < d && d < params.degree_upper)) {
      report.p5.verdict = Verdict::kFails;
      report.p5.vertex = v;
      report.p5.vertex_degree = g.degree(v);
      std::ostringstream out;
      out << "vertex " << v + 1 << " has degree " << g.degree(v) << " outside ("
          << params.degree_lower << ", " << params.degree_upper << ")";
      report.p5.detail = out.str();
      break;
    }
  }
  return report;
}

PropernessReport check_all(const Network& net, const CheckOptions& options) {
  const Graph& g = net.graph();
  const std::size_t n = g.vertex_count();
  double alpha = options.alpha;
  if (!(alpha > 0.0)) {
    const double pairs = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
    alpha = (static_cast<double>(g.edge_count()) / pairs) * static_cast<double>(n) / ln_n(n);
  }
  PropernessReport report = check_p1_p3(g);
  PropernessReport p4 = check_p4(net, options.expansion);
  PropernessReport p5 = check_p5(g, alpha, options.delta);
  report.p4 = std::move(p4.p4);
  report.p5 = std::move(p5.p5);
  auto& params = report.parameters;
  params.c1 = p4.parameters.c1;
  params.c2 = p4.parameters.c2;
  params.expansion_threshold = p4.parameters.expansion_threshold;
  params.exhaustive_cap = p4.parameters.exhaustive_cap;
  params.samples = p4.parameters.samples;
  params.seed = p4.parameters.seed;
  params.subsets_examined = p4.parameters.subsets_examined;
  params.alpha = p5.parameters.alpha;
  params.delta = p5.parameters.delta;
  params.degree_lower = p5.parameters.degree_lower;
  params.degree_upper = p5.parameters.degree_upper;
  return report;
}

bool witness_reproduces(const Graph& g, const PropertyResult& result,
                        const PropernessParameters& parameters) {
  if (result.verdict != Verdict::kFails) return false;
  if (result.missing_cycle_length) {
    return !find_cycle_of_length(g, *result.missing_cycle_length).has_value();
  }
  if (result.cycles.size() == 2) {
    for (const auto& c : result.cycles) {
      if (c.size() > parameters.short_cycle_cap || c.size() < 3) return false;
      for (std::size_t i = 0; i < c.size(); ++i) {
        if (!g.has_edge(c[i], c[(i + 1) % c.size()])) return false;
      }
    }
    return cycle_distance(g, result.cycles[0], result.cycles[1]) < parameters.cycle_separation;
  }
  if (result.vertex_degree && result.vertex) {
    const auto d = static_cast<double>(g.degree(*result.vertex));
    return !(parameters.degree_lower < d && d < parameters.degree_upper);
  }
  if (result.vertex) {
    const Vertex origin = 0;
    const auto dist = bfs_distances(g, std::span<const Vertex>(&origin, 1));
    return dist[*result.vertex] == kUnreachable;
  }
  return false;
}

bool witness_reproduces(const Network& net, const PropertyResult& p4,
                        const PropernessParameters& parameters) {
  if (p4.verdict != Verdict::kFails || !p4.expansion) return false;
  const auto& w = *p4.expansion;
  if (w.subset.empty() || w.subset.size() > net.vertex_count() / 2) return false;
  const auto fresh = expansion_ratio(net, w.excluded, w.subset);
  return fresh.volume > 0.0 && fresh.ratio < parameters.c1 / (6.0 * parameters.c2);
}

}  // namespace volta
