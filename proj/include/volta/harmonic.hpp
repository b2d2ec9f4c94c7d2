#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "volta/network.hpp"

namespace volta {

// Pinned potentials on a set of distinct boundary vertices.
class BoundaryCondition {
 public:
  BoundaryCondition() = default;
  // Throws kArgument when empty, when sizes differ, on duplicates, or when a
  // potential lies outside [0, 1].
  BoundaryCondition(std::vector<Vertex> vertices, std::vector<double> potentials);

  std::size_t size() const noexcept { return vertices_.size(); }
  std::span<const Vertex> vertices() const noexcept { return vertices_; }
  std::span<const double> potentials() const noexcept { return potentials_; }
  Vertex vertex(std::size_t k) const { return vertices_[k]; }
  double potential(std::size_t k) const { return potentials_[k]; }

  double min_potential() const;
  double max_potential() const;

  // Per-vertex boundary index, or -1 for interior vertices.
  std::vector<int> index_map(std::size_t vertex_count) const;

  friend bool operator==(const BoundaryCondition&, const BoundaryCondition&) = default;

 private:
  std::vector<Vertex> vertices_;
  std::vector<double> potentials_;
};

// Throws kIndex if a boundary vertex is out of range for net and kModeling
// if one is isolated.
void check_boundary(const Network& net, const BoundaryCondition& bc);

// defined[i] is set iff i shares a component with some boundary vertex;
// values of undefined vertices are NaN.
struct PotentialField {
  std::vector<double> values;
  std::vector<bool> defined;
  double residual_norm = 0.0;
  std::size_t iterations = 0;
  double relaxation = 1.0;  // final sweep's relaxation factor (1 = Gauss-Seidel)

  std::size_t vertex_count() const noexcept { return values.size(); }
};

// Per-vertex mask of components that contain at least one boundary vertex.
std::vector<bool> boundary_reachable(const Graph& g, const BoundaryCondition& bc);

struct SolveOptions {
  double tol = 1e-10;
  std::size_t max_iter = 1'000'000;
  // Fixed relaxation factor in (0, 2); 1 is plain Gauss-Seidel.
  double relaxation = 1.0;
  // With relaxation == 1, switch to Young's optimal over-relaxation once the
  // observed sweep contraction rate is steady and above 0.99.
  bool adaptive_relaxation = true;
};

// Conductance-weighted Gauss-Seidel in ascending vertex order, starting from
// the strength-weighted boundary mean, with optional over-relaxation (see
// SolveOptions). Iterates are projected onto the boundary hull. A sweep is
// accepted as final when all of the following hold:
//   - the harmonic defect max_i |V_i - sum_j (c_ij / c_i) V_j| <= tol,
//   - the net current leaving the boundary is <= tol * sum_k c_{x_k},
//   - the geometric error estimate delta * q / (1 - q) <= tol, where delta is
//     the largest update of the sweep and q the observed contraction rate
//     (or delta has reached rounding noise).
// Throws ConvergenceError after max_iter sweeps.
PotentialField solve(const Network& net, const BoundaryCondition& bc,
                     const SolveOptions& options = {});

inline constexpr std::size_t kDenseInteriorLimit = 2000;

// Direct LU solve (partial pivoting) of (I - Q) V_int = R p. Throws kArgument
// above kDenseInteriorLimit defined interior vertices.
PotentialField solve_dense(const Network& net, const BoundaryCondition& bc);

// Net current flowing out of the boundary into the network:
// sum_k sum_{(x_k, i) in E} (V_{x_k} - V_i) c_{x_k i}.
double current_balance(const Network& net, const PotentialField& field,
                       const BoundaryCondition& bc);

// Independent re-check of a solved field.
struct FieldAudit {
  double max_defect = 0.0;          // over defined interior vertices
  std::size_t hull_violations = 0;  // defined values outside [min p, max p]
  std::size_t boundary_mismatches = 0;
  std::size_t definedness_mismatches = 0;

  bool ok(double tol) const {
    return max_defect <= tol && hull_violations == 0 && boundary_mismatches == 0 &&
           definedness_mismatches == 0;
  }
};

FieldAudit audit_field(const Network& net, const BoundaryCondition& bc,
                       const PotentialField& field);

}  // namespace volta
