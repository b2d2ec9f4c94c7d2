#include "volta/generators.hpp"

#include <algorithm>
#include <cmath>

#include "volta/error.hpp"
#include "volta/rng.hpp"

namespace volta {

std::string_view to_string(GenKind kind) {
  switch (kind) {
    case GenKind::kGnp:
      return "gnp";
    case GenKind::kCircle:
      return "circle";
    case GenKind::kSmallWorld:
      return "small_world";
  }
  return "?";
}

GenKind parse_gen_kind(std::string_view text) {
  if (text == "gnp") return GenKind::kGnp;
  if (text == "circle") return GenKind::kCircle;
  if (text == "small_world" || text == "small-world") return GenKind::kSmallWorld;
  throw Error(ErrorCode::kArgument, "unknown generator kind '" + std::string(text) + "'");
}

double alpha_to_p(double alpha, std::size_t n) {
  if (n < 2) throw Error(ErrorCode::kArgument, "alpha conversion needs n >= 2");
  return std::clamp(alpha * std::log(static_cast<double>(n)) / static_cast<double>(n), 0.0, 1.0);
}

double p_to_alpha(double p, std::size_t n) {
  if (n < 2) throw Error(ErrorCode::kArgument, "alpha conversion needs n >= 2");
  return p * static_cast<double>(n) / std::log(static_cast<double>(n));
}

void validate(const GenSpec& spec) {
  if (spec.n < 3) throw Error(ErrorCode::kArgument, "generator needs n >= 3");
  if (spec.kind != GenKind::kCircle && !(spec.p >= 0.0 && spec.p <= 1.0)) {
    throw Error(ErrorCode::kArgument, "edge probability must lie in [0, 1]");
  }
}

namespace {

// Batagelj & Brandes geometric skipping over the lower-triangular pair index.
void append_gnp_edges(std::size_t n, double p, Rng& rng, std::vector<Edge>& out) {
  if (p <= 0.0) return;
  if (p >= 1.0) {
    for (Vertex v = 1; v < n; ++v)
      for (Vertex w = 0; w < v; ++w) out.push_back({w, v});
    return;
  }
  const double log_q = std::log1p(-p);
  std::int64_t v = 1;
  std::int64_t w = -1;
  const auto nn = static_cast<std::int64_t>(n);
  while (v < nn) {
    const double r = rng.uniform01();
    const double skip = std::floor(std::log1p(-r) / log_q);
    // Very long skips run off the end of the index space.
    if (skip >= static_cast<double>(nn) * static_cast<double>(nn)) break;
    w += 1 + static_cast<std::int64_t>(skip);
    while (w >= v && v < nn) {
      w -= v;
      ++v;
    }
    if (v < nn) out.push_back({static_cast<Vertex>(w), static_cast<Vertex>(v)});
  }
}

std::vector<Edge> circle_edges(std::size_t n) {
  std::vector<Edge> edges;
  edges.reserve(n);
  for (Vertex i = 0; i < n; ++i) {
    edges.push_back(make_edge(i, static_cast<Vertex>((i + 1) % n)));
  }
  return edges;
}

}  // namespace

Graph circle_graph(std::size_t n) {
  if (n < 3) throw Error(ErrorCode::kArgument, "circle needs n >= 3");
  return Graph(n, circle_edges(n));
}

Graph complete_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (Vertex v = 1; v < n; ++v)
    for (Vertex w = 0; w < v; ++w) edges.push_back({w, v});
  return Graph(n, std::move(edges));
}

Graph generate(const GenSpec& spec) {
  validate(spec);
  Rng rng(spec.seed);
  switch (spec.kind) {
    case GenKind::kCircle:
      return circle_graph(spec.n);
    case GenKind::kGnp: {
      std::vector<Edge> edges;
      append_gnp_edges(spec.n, spec.p, rng, edges);
      return Graph(spec.n, std::move(edges));
    }
    case GenKind::kSmallWorld: {
      std::vector<Edge> edges = circle_edges(spec.n);
      append_gnp_edges(spec.n, spec.p, rng, edges);
      for (auto& e : edges) e = make_edge(e.u, e.v);
      std::sort(edges.begin(), edges.end());
      edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
      return Graph(spec.n, std::move(edges));
    }
  }
  throw Error(ErrorCode::kInternal, "unhandled generator kind");
}

std::vector<PairFrequency> edge_probability_audit(const GenSpec& spec, std::size_t trials) {
  if (spec.kind != GenKind::kGnp) {
    throw Error(ErrorCode::kArgument, "edge probability audit applies to gnp only");
  }
  if (trials < 1) throw Error(ErrorCode::kArgument, "audit needs at least one trial");
  validate(spec);

  const auto n = static_cast<Vertex>(spec.n);
  std::vector<Edge> pairs = {make_edge(0, 1), make_edge(0, n - 1), make_edge(n / 2 - 1, n / 2)};
  Rng pick(derive_seed(spec.seed, 0xa0d17));
  while (pairs.size() < 8) {
    auto a = static_cast<Vertex>(pick.below(n));
    auto b = static_cast<Vertex>(pick.below(n));
    if (a == b) continue;
    auto e = make_edge(a, b);
    if (std::find(pairs.begin(), pairs.end(), e) == pairs.end()) pairs.push_back(e);
  }

  std::vector<std::size_t> hits(pairs.size(), 0);
  for (std::size_t t = 0; t < trials; ++t) {
    GenSpec trial = spec;
    trial.seed = derive_seed(spec.seed, t);
    Graph g = generate(trial);
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      if (g.has_edge(pairs[k].u, pairs[k].v)) ++hits[k];
    }
  }
  std::vector<PairFrequency> out;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    out.push_back({pairs[k], static_cast<double>(hits[k]) / static_cast<double>(trials)});
  }
  return out;
}

}  // namespace volta
