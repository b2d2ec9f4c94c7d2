#include "volta/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "volta/error.hpp"
#include "volta/rng.hpp"

namespace volta {

std::string_view to_string(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::kUnit:
      return "unit";
    case SchemeKind::kUniform01:
      return "uniform01";
    case SchemeKind::kPowerLaw:
      return "power_law";
  }
  return "?";
}

SchemeKind parse_scheme_kind(std::string_view text) {
  if (text == "unit") return SchemeKind::kUnit;
  if (text == "uniform01") return SchemeKind::kUniform01;
  if (text == "power_law" || text == "powerlaw") return SchemeKind::kPowerLaw;
  throw Error(ErrorCode::kArgument, "unknown conductance scheme '" + std::string(text) + "'");
}

void validate(const ConductanceScheme& scheme) {
  if (!(scheme.gamma > 1.0)) {
    throw Error(ErrorCode::kArgument, "power-law exponent must exceed 1");
  }
  if (!(scheme.epsilon >= 0.0 && scheme.epsilon < 1.0)) {
    throw Error(ErrorCode::kArgument, "uniform floor must lie in [0, 1)");
  }
}

double power_law_inverse_cdf(double u, double gamma) {
  if (!(u >= 0.0 && u < 1.0)) throw Error(ErrorCode::kArgument, "u must lie in [0, 1)");
  if (!(gamma > 1.0)) throw Error(ErrorCode::kArgument, "power-law exponent must exceed 1");
  return std::pow(1.0 - u, -1.0 / (gamma - 1.0));
}

Network::Network(Graph graph, std::vector<double> conductance)
    : graph_(std::move(graph)), conductance_(std::move(conductance)) {
  if (graph_.edge_count() == 0) {
    throw Error(ErrorCode::kDegenerate, "network has no edges");
  }
  if (conductance_.size() != graph_.edge_count()) {
    throw Error(ErrorCode::kArgument, "conductance count does not match edge count");
  }
  min_c_ = std::numeric_limits<double>::infinity();
  max_c_ = 0.0;
  for (double c : conductance_) {
    if (!(c > 0.0) || !std::isfinite(c)) {
      throw Error(ErrorCode::kArgument, "conductances must be positive and finite");
    }
    min_c_ = std::min(min_c_, c);
    max_c_ = std::max(max_c_, c);
  }
  strength_ = recompute_strengths(*this);
}

double Network::conductance(Vertex a, Vertex b) const {
  auto id = graph_.edge_index(a, b);
  if (!id) throw Error(ErrorCode::kArgument, "no edge between the given vertices");
  return conductance_[*id];
}

std::vector<double> recompute_strengths(const Network& net) {
  const Graph& g = net.graph();
  std::vector<double> s(g.vertex_count(), 0.0);
  // Per-vertex sums over the sorted neighbor list so the summation order is
  // fixed and the cache reproduces exactly.
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    double total = 0.0;
    for (auto id : g.incident_edges(v)) total += net.conductance(id);
    s[v] = total;
  }
  return s;
}

Network assign(const Graph& g, const ConductanceScheme& scheme) {
  validate(scheme);
  if (g.edge_count() == 0) {
    throw Error(ErrorCode::kDegenerate, "cannot assign conductances to an empty edge set");
  }
  std::vector<double> c(g.edge_count(), 1.0);
  Rng rng(scheme.seed);
  switch (scheme.kind) {
    case SchemeKind::kUnit:
      break;
    case SchemeKind::kUniform01:
      for (double& x : c) {
        double u = rng.uniform01();
        // Exact zeros would silently cut the edge; with epsilon == 0 resample.
        while (scheme.epsilon == 0.0 && u == 0.0) u = rng.uniform01();
        x = std::max(u, scheme.epsilon);
      }
      break;
    case SchemeKind::kPowerLaw:
      for (double& x : c) x = power_law_inverse_cdf(rng.uniform01(), scheme.gamma);
      break;
  }
  return Network(g, std::move(c));
}

double strength(const Network& net, Vertex v) {
  if (v >= net.vertex_count()) {
    throw Error(ErrorCode::kIndex, "vertex " + std::to_string(v) + " out of range");
  }
  if (net.graph().degree(v) == 0) {
    throw Error(ErrorCode::kModeling,
                "strength undefined for isolated vertex " + std::to_string(v));
  }
  return net.raw_strength(v);
}

Network scaled(const Network& net, double factor) {
  if (!(factor > 0.0)) throw Error(ErrorCode::kArgument, "scale factor must be positive");
  std::vector<double> c(net.conductances().begin(), net.conductances().end());
  for (double& x : c) x *= factor;
  return Network(net.graph(), std::move(c));
}

}  // namespace volta
