#include "volta/harmonic.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "volta/error.hpp"

namespace volta {

BoundaryCondition::BoundaryCondition(std::vector<Vertex> vertices, std::vector<double> potentials)
    : vertices_(std::move(vertices)), potentials_(std::move(potentials)) {
  if (vertices_.empty()) throw Error(ErrorCode::kArgument, "boundary set is empty");
  if (vertices_.size() != potentials_.size()) {
    throw Error(ErrorCode::kArgument, "boundary vertex and potential counts differ");
  }
  std::vector<Vertex> sorted = vertices_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error(ErrorCode::kArgument, "duplicate boundary vertex");
  }
  for (double p : potentials_) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw Error(ErrorCode::kArgument, "boundary potentials must lie in [0, 1]");
    }
  }
}

double BoundaryCondition::min_potential() const {
  return *std::min_element(potentials_.begin(), potentials_.end());
}

double BoundaryCondition::max_potential() const {
  return *std::max_element(potentials_.begin(), potentials_.end());
}

std::vector<int> BoundaryCondition::index_map(std::size_t vertex_count) const {
  std::vector<int> map(vertex_count, -1);
  for (std::size_t k = 0; k < vertices_.size(); ++k) {
    if (vertices_[k] >= vertex_count) {
      throw Error(ErrorCode::kIndex,
                  "boundary vertex " + std::to_string(vertices_[k]) + " out of range");
    }
    map[vertices_[k]] = static_cast<int>(k);
  }
  return map;
}

void check_boundary(const Network& net, const BoundaryCondition& bc) {
  for (Vertex x : bc.vertices()) {
    if (x >= net.vertex_count()) {
      throw Error(ErrorCode::kIndex, "boundary vertex " + std::to_string(x) + " out of range");
    }
    if (net.graph().degree(x) == 0) {
      throw Error(ErrorCode::kModeling, "boundary vertex " + std::to_string(x) + " is isolated");
    }
  }
}

std::vector<bool> boundary_reachable(const Graph& g, const BoundaryCondition& bc) {
  auto labels = components(g);
  std::vector<bool> live_component(labels.count(), false);
  for (Vertex x : bc.vertices()) live_component.at(labels.component_id.at(x)) = true;
  std::vector<bool> reachable(g.vertex_count());
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    reachable[v] = live_component[labels.component_id[v]];
  }
  return reachable;
}

namespace {

struct Layout {
  std::vector<int> boundary_index;
  std::vector<bool> defined;
  std::vector<Vertex> interior;  // defined, non-boundary, ascending
};

Layout make_layout(const Network& net, const BoundaryCondition& bc) {
  check_boundary(net, bc);
  Layout layout;
  layout.boundary_index = bc.index_map(net.vertex_count());
  layout.defined = boundary_reachable(net.graph(), bc);
  for (Vertex v = 0; v < net.vertex_count(); ++v) {
    if (layout.defined[v] && layout.boundary_index[v] < 0) layout.interior.push_back(v);
  }
  return layout;
}

PotentialField initial_field(const Network& net, const BoundaryCondition& bc,
                             const Layout& layout) {
  double weighted = 0.0;
  double total = 0.0;
  for (std::size_t k = 0; k < bc.size(); ++k) {
    weighted += bc.potential(k) * net.raw_strength(bc.vertex(k));
    total += net.raw_strength(bc.vertex(k));
  }
  const double start = std::clamp(weighted / total, bc.min_potential(), bc.max_potential());

  PotentialField field;
  field.values.assign(net.vertex_count(), std::numeric_limits<double>::quiet_NaN());
  field.defined = layout.defined;
  for (std::size_t k = 0; k < bc.size(); ++k) field.values[bc.vertex(k)] = bc.potential(k);
  for (Vertex v : layout.interior) field.values[v] = start;
  return field;
}

double neighbor_average(const Network& net, const std::vector<double>& values, Vertex v) {
  const Graph& g = net.graph();
  auto nb = g.neighbors(v);
  auto ids = g.incident_edges(v);
  double acc = 0.0;
  for (std::size_t k = 0; k < nb.size(); ++k) acc += net.conductance(ids[k]) * values[nb[k]];
  return acc / net.raw_strength(v);
}

double max_defect(const Network& net, const std::vector<double>& values,
                  std::span<const Vertex> interior) {
  double worst = 0.0;
  for (Vertex v : interior) {
    worst = std::max(worst, std::abs(values[v] - neighbor_average(net, values, v)));
  }
  return worst;
}

double boundary_strength(const Network& net, const BoundaryCondition& bc) {
  double total = 0.0;
  for (Vertex x : bc.vertices()) total += net.raw_strength(x);
  return total;
}

constexpr std::size_t kRateWindow = 64;
constexpr double kMaxRelaxation = 1.995;

// Interior rows in CSR form with normalized weights c_ij / c_i.
struct TransitionRows {
  std::vector<std::size_t> offsets{0};
  std::vector<Vertex> column;
  std::vector<double> weight;
};

TransitionRows interior_rows(const Network& net, std::span<const Vertex> interior) {
  const Graph& g = net.graph();
  TransitionRows rows;
  for (Vertex v : interior) {
    auto nb = g.neighbors(v);
    auto ids = g.incident_edges(v);
    const double cv = net.raw_strength(v);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      rows.column.push_back(nb[k]);
      rows.weight.push_back(net.conductance(ids[k]) / cv);
    }
    rows.offsets.push_back(rows.column.size());
  }
  return rows;
}

}  // namespace

PotentialField solve(const Network& net, const BoundaryCondition& bc,
                     const SolveOptions& options) {
  if (!(options.tol > 0.0)) throw Error(ErrorCode::kArgument, "tolerance must be positive");
  if (options.max_iter < 1) throw Error(ErrorCode::kArgument, "max_iter must be positive");
  if (!(options.relaxation > 0.0 && options.relaxation < 2.0)) {
    throw Error(ErrorCode::kArgument, "relaxation factor must lie in (0, 2)");
  }
  const Layout layout = make_layout(net, bc);
  PotentialField field = initial_field(net, bc, layout);
  const TransitionRows rows = interior_rows(net, layout.interior);
  double* values = field.values.data();
  const Vertex* interior = layout.interior.data();
  const std::size_t m = layout.interior.size();
  const double lo = bc.min_potential();
  const double hi = bc.max_potential();
  const double balance_bound = options.tol * boundary_strength(net, bc);
  // Updates this small are rounding noise; the error estimate cannot improve.
  const double noise_floor = 16.0 * std::numeric_limits<double>::epsilon() * std::max(hi, 1.0);

  double omega = options.relaxation;
  bool may_adapt = options.adaptive_relaxation && omega == 1.0;
  double previous_change = std::numeric_limits<double>::infinity();
  double window_start_change = 0.0;
  double window_rate = -1.0;        // per-sweep rate averaged over the last window
  double previous_window_rate = -1.0;
  double best_residual = std::numeric_limits<double>::infinity();

  for (std::size_t sweep = 1; sweep <= options.max_iter; ++sweep) {
    double change = 0.0;
    for (std::size_t r = 0; r < m; ++r) {
      double acc = 0.0;
      for (std::size_t k = rows.offsets[r]; k < rows.offsets[r + 1]; ++k) {
        acc += rows.weight[k] * values[rows.column[k]];
      }
      double& slot = values[interior[r]];
      // The exact solution lies in the boundary hull, so projecting onto it
      // never slows convergence and absorbs round-off.
      const double next = std::clamp(slot + omega * (acc - slot), lo, hi);
      change = std::max(change, std::abs(next - slot));
      slot = next;
    }
    const double step_rate = change / previous_change;
    previous_change = change;

    if (sweep % kRateWindow == 1) {
      window_start_change = change;
    } else if (sweep % kRateWindow == 0 && window_start_change > 0.0 && change > 0.0) {
      previous_window_rate = window_rate;
      window_rate = std::pow(change / window_start_change, 1.0 / (kRateWindow - 1));
      // Switch to Young's over-relaxation once plain sweeps show a steady,
      // slow contraction; for the grounded Laplacian (SPD) any omega in
      // (0, 2) converges.
      if (may_adapt && window_rate > 0.99 && window_rate < 1.0 &&
          std::abs(window_rate - previous_window_rate) < 0.1 * (1.0 - window_rate)) {
        omega = std::min(kMaxRelaxation, 2.0 / (1.0 + std::sqrt(1.0 - window_rate)));
        may_adapt = false;
        window_rate = -1.0;
      }
    }
    if (change > options.tol) continue;

    const double rate = window_rate > 0.0 ? std::max(window_rate, step_rate) : step_rate;
    const bool settled =
        change <= noise_floor || (rate < 1.0 && change * rate / (1.0 - rate) <= options.tol);
    if (!settled) continue;

    const double residual = max_defect(net, field.values, layout.interior);
    best_residual = std::min(best_residual, residual);
    if (residual > options.tol) continue;
    if (std::abs(current_balance(net, field, bc)) > balance_bound) continue;

    field.residual_norm = residual;
    field.iterations = sweep;
    field.relaxation = omega;
    return field;
  }
  if (!std::isfinite(best_residual)) {
    best_residual = max_defect(net, field.values, layout.interior);
  }
  throw ConvergenceError("Gauss-Seidel did not converge within " +
                             std::to_string(options.max_iter) + " sweeps",
                         best_residual, options.max_iter);
}

PotentialField solve_dense(const Network& net, const BoundaryCondition& bc) {
  const Layout layout = make_layout(net, bc);
  const std::size_t m = layout.interior.size();
  if (m > kDenseInteriorLimit) {
    throw Error(ErrorCode::kArgument, "dense solve limited to " +
                                          std::to_string(kDenseInteriorLimit) +
                                          " interior vertices");
  }
  PotentialField field = initial_field(net, bc, layout);
  if (m > 0) {
    std::vector<int> row(net.vertex_count(), -1);
    for (std::size_t r = 0; r < m; ++r) row[layout.interior[r]] = static_cast<int>(r);

    const Graph& g = net.graph();
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(m),
                                                  static_cast<Eigen::Index>(m));
    Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
    for (std::size_t r = 0; r < m; ++r) {
      const Vertex v = layout.interior[r];
      auto nb = g.neighbors(v);
      auto ids = g.incident_edges(v);
      const double cv = net.raw_strength(v);
      for (std::size_t k = 0; k < nb.size(); ++k) {
        const double w = net.conductance(ids[k]) / cv;
        if (row[nb[k]] >= 0) {
          a(static_cast<Eigen::Index>(r), row[nb[k]]) -= w;
        } else {
          b(static_cast<Eigen::Index>(r)) += w * bc.potential(layout.boundary_index[nb[k]]);
        }
      }
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
    if (!(std::abs(lu.determinant()) > 0.0) && m > 0) {
      throw Error(ErrorCode::kInternal, "singular interior system");
    }
    Eigen::VectorXd x = lu.solve(b);
    for (std::size_t r = 0; r < m; ++r) {
      if (!std::isfinite(x(static_cast<Eigen::Index>(r)))) {
        throw Error(ErrorCode::kInternal, "dense solve produced a non-finite value");
      }
      field.values[layout.interior[r]] = x(static_cast<Eigen::Index>(r));
    }
  }
  field.residual_norm = max_defect(net, field.values, layout.interior);
  field.iterations = 0;
  return field;
}

double current_balance(const Network& net, const PotentialField& field,
                       const BoundaryCondition& bc) {
  const Graph& g = net.graph();
  double total = 0.0;
  for (Vertex x : bc.vertices()) {
    auto nb = g.neighbors(x);
    auto ids = g.incident_edges(x);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      total += (field.values[x] - field.values[nb[k]]) * net.conductance(ids[k]);
    }
  }
  return total;
}

FieldAudit audit_field(const Network& net, const BoundaryCondition& bc,
                       const PotentialField& field) {
  constexpr double kRoundoff = 1e-12;
  FieldAudit audit;
  const Graph& g = net.graph();
  const auto boundary_index = bc.index_map(net.vertex_count());

  // Definedness from a fresh BFS rather than the component labeling the
  // solver used.
  std::vector<Vertex> sources(bc.vertices().begin(), bc.vertices().end());
  const auto dist = bfs_distances(g, sources);

  const double lo = bc.min_potential();
  const double hi = bc.max_potential();
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    const bool should_be_defined = dist[v] != kUnreachable;
    if (field.defined.at(v) != should_be_defined) ++audit.definedness_mismatches;
    if (!should_be_defined) continue;
    const double value = field.values.at(v);
    if (boundary_index[v] >= 0) {
      if (value != bc.potential(boundary_index[v])) ++audit.boundary_mismatches;
      continue;
    }
    if (!(value >= lo - kRoundoff && value <= hi + kRoundoff)) ++audit.hull_violations;
    double weighted = 0.0;
    double total = 0.0;
    auto nb = g.neighbors(v);
    for (Vertex u : nb) {
      const double c = net.conductance(v, u);
      weighted += c * field.values.at(u);
      total += c;
    }
    audit.max_defect = std::max(audit.max_defect, std::abs(value - weighted / total));
  }
  return audit;
}

}  // namespace volta
