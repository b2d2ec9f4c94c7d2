#include "volta/volta.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <limits>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "volta/concentration.hpp"
#include "volta/error.hpp"
#include "volta/generators.hpp"
#include "volta/harmonic.hpp"
#include "volta/harness.hpp"
#include "volta/io.hpp"
#include "volta/network.hpp"
#include "volta/properness.hpp"
#include "volta/rng.hpp"
#include "volta/walk.hpp"

struct volta_graph {
  volta::Graph graph;
};

struct volta_network {
  volta::Network net;
};

struct volta_field {
  volta::PotentialField field;
};

namespace {

thread_local std::string g_last_error;

volta_status fail(volta_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

// Runs body, translating exceptions into status codes.
template <class F>
volta_status guarded(F&& body) {
  try {
    g_last_error.clear();
    body();
    return VOLTA_OK;
  } catch (const volta::Error& e) {
    return fail(static_cast<volta_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(VOLTA_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(VOLTA_E_INTERNAL, e.what());
  } catch (...) {
    return fail(VOLTA_E_INTERNAL, "unknown exception");
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw volta::Error(volta::ErrorCode::kArgument, what);
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

volta::BoundaryCondition boundary_of(const volta_network* net, const char* text) {
  require(text != nullptr, "boundary is null");
  return volta::io::parse_boundary(text, net->net.vertex_count());
}

std::vector<volta::Vertex> parse_starts(const char* text, std::size_t n) {
  std::vector<volta::Vertex> starts;
  std::string s(text);
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const auto comma = s.find(',', pos);
    const auto token = s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    char* end = nullptr;
    const unsigned long long label = std::strtoull(token.c_str(), &end, 10);
    if (token.empty() || *end != '\0') {
      throw volta::Error(volta::ErrorCode::kParse, "bad start vertex '" + token + "'");
    }
    if (label < 1 || label > n) {
      throw volta::Error(volta::ErrorCode::kIndex,
                         "start vertex " + token + " outside 1.." + std::to_string(n));
    }
    starts.push_back(static_cast<volta::Vertex>(label - 1));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return starts;
}

volta::ExperimentConfig prepared(volta::ExperimentConfig cfg, const char* output_dir,
                                 int has_seed, uint64_t seed) {
  if (output_dir) cfg.output_dir = output_dir;
  if (has_seed) cfg.master_seed = seed;
  return cfg;
}

}  // namespace

extern "C" {

const char* volta_version(void) { return volta::kLibraryVersion; }

const char* volta_rng_algorithm(void) { return volta::kRngAlgorithm; }

const char* volta_status_name(volta_status status) {
  if (status == VOLTA_OK) return "ok";
  return volta::error_code_name(static_cast<volta::ErrorCode>(status));
}

const char* volta_last_error(void) { return g_last_error.c_str(); }

void volta_string_free(char* s) { std::free(s); }

volta_status volta_alpha_to_p(double alpha, size_t n, double* p) {
  return guarded([&] {
    require(p != nullptr, "p is null");
    *p = volta::alpha_to_p(alpha, n);
  });
}

volta_status volta_graph_generate(const char* kind, size_t n, double p, uint64_t seed,
                                  volta_graph** out) {
  return guarded([&] {
    require(kind && out, "null argument");
    volta::GenSpec spec{volta::parse_gen_kind(kind), n, p, seed};
    *out = new volta_graph{volta::generate(spec)};
  });
}

volta_status volta_graph_load(const char* path, volta_graph** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = new volta_graph{volta::io::read_graph(std::filesystem::path(path))};
  });
}

volta_status volta_graph_save(const volta_graph* g, const char* path) {
  return guarded([&] {
    require(g && path, "null argument");
    volta::io::write_file_atomic(path, volta::io::format_graph(g->graph));
  });
}

size_t volta_graph_vertex_count(const volta_graph* g) { return g ? g->graph.vertex_count() : 0; }

size_t volta_graph_edge_count(const volta_graph* g) { return g ? g->graph.edge_count() : 0; }

void volta_graph_free(volta_graph* g) { delete g; }

volta_status volta_network_assign(const volta_graph* g, const char* scheme, uint64_t seed,
                                  double gamma, double epsilon, volta_network** out) {
  return guarded([&] {
    require(g && scheme && out, "null argument");
    volta::ConductanceScheme s{volta::parse_scheme_kind(scheme), seed, gamma, epsilon};
    *out = new volta_network{volta::assign(g->graph, s)};
  });
}

volta_status volta_network_load(const char* path, volta_network** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = new volta_network{volta::io::read_network(std::filesystem::path(path))};
  });
}

volta_status volta_network_save(const volta_network* net, const char* path) {
  return guarded([&] {
    require(net && path, "null argument");
    volta::io::write_file_atomic(path, volta::io::format_network(net->net));
  });
}

size_t volta_network_vertex_count(const volta_network* net) {
  return net ? net->net.vertex_count() : 0;
}

size_t volta_network_edge_count(const volta_network* net) {
  return net ? net->net.graph().edge_count() : 0;
}

void volta_network_free(volta_network* net) { delete net; }

volta_status volta_solve(const volta_network* net, const char* boundary, double tol,
                         uint64_t max_iter, volta_field** out) {
  return guarded([&] {
    require(net && out, "null argument");
    volta::SolveOptions options;
    options.tol = tol;
    options.max_iter = max_iter;
    *out = new volta_field{volta::solve(net->net, boundary_of(net, boundary), options)};
  });
}

volta_status volta_solve_dense(const volta_network* net, const char* boundary,
                               volta_field** out) {
  return guarded([&] {
    require(net && out, "null argument");
    *out = new volta_field{volta::solve_dense(net->net, boundary_of(net, boundary))};
  });
}

size_t volta_field_size(const volta_field* f) { return f ? f->field.vertex_count() : 0; }

volta_status volta_field_value(const volta_field* f, size_t vertex, double* value,
                               int* defined) {
  return guarded([&] {
    require(f && value, "null argument");
    if (vertex >= f->field.vertex_count()) {
      throw volta::Error(volta::ErrorCode::kIndex, "vertex index out of range");
    }
    *value = f->field.values[vertex];
    if (defined) *defined = f->field.defined[vertex] ? 1 : 0;
  });
}

uint64_t volta_field_iterations(const volta_field* f) { return f ? f->field.iterations : 0; }

double volta_field_residual(const volta_field* f) {
  return f ? f->field.residual_norm : std::numeric_limits<double>::quiet_NaN();
}

volta_status volta_field_save_csv(const volta_field* f, const char* path) {
  return guarded([&] {
    require(f && path, "null argument");
    volta::io::write_file_atomic(path, volta::io::format_field_csv(f->field));
  });
}

volta_status volta_field_load_csv(const char* path, volta_field** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = new volta_field{volta::io::read_field_csv(std::filesystem::path(path))};
  });
}

void volta_field_free(volta_field* f) { delete f; }

volta_status volta_current_balance(const volta_network* net, const volta_field* f,
                                   const char* boundary, double* balance) {
  return guarded([&] {
    require(net && f && balance, "null argument");
    *balance = volta::current_balance(net->net, f->field, boundary_of(net, boundary));
  });
}

volta_status volta_walk(const volta_network* net, const char* boundary, uint64_t walks_per_vertex,
                        uint64_t seed, size_t threads, const char* starts, const char* out_path) {
  return guarded([&] {
    require(net && out_path, "null argument");
    const auto bc = boundary_of(net, boundary);
    volta::HittingOptions options;
    options.walks_per_vertex = walks_per_vertex;
    options.seed = seed;
    options.threads = threads;
    if (starts) options.starts = parse_starts(starts, net->net.vertex_count());
    const auto est = volta::hitting_probabilities(net->net, bc, options);
    volta::io::write_file_atomic(out_path, volta::io::format_estimates_csv(est, bc, starts != nullptr));
  });
}

volta_status volta_mix(const volta_network* net, const char* boundary, double k0,
                       uint64_t samples, uint64_t seed, char** json) {
  return guarded([&] {
    require(net && json, "null argument");
    volta::MixingOptions options;
    options.k0 = k0;
    options.samples = samples;
    options.seed = seed;
    const auto report = volta::mixing_diagnostics(net->net, boundary_of(net, boundary), options);
    *json = dup_string(volta::io::to_json(report).dump(2) + "\n");
  });
}

volta_status volta_check(const volta_network* net, const char* boundary, double alpha,
                         double delta, size_t exhaustive_cap, uint64_t samples, uint64_t seed,
                         char** json) {
  return guarded([&] {
    require(net && json, "null argument");
    volta::CheckOptions options;
    options.alpha = alpha;
    options.delta = delta;
    options.expansion.exhaustive_cap = exhaustive_cap;
    options.expansion.samples = samples;
    options.expansion.seed = seed;
    if (boundary) {
      const auto bc = boundary_of(net, boundary);
      options.expansion.excluded.assign(bc.vertices().begin(), bc.vertices().end());
    }
    const auto report = volta::check_all(net->net, options);
    *json = dup_string(volta::io::to_json(report).dump(2) + "\n");
  });
}

volta_status volta_stats(const volta_network* net, const volta_field* f, const char* boundary,
                         size_t bins, char** json) {
  return guarded([&] {
    require(net && f && json, "null argument");
    const auto stats =
        volta::concentration_stats(f->field, net->net, boundary_of(net, boundary), bins);
    *json = dup_string(volta::io::to_json(stats).dump(2) + "\n");
  });
}

volta_status volta_consensus(const volta_network* net, const char* boundary, double tol,
                             uint64_t max_steps, volta_field** out, uint64_t* steps) {
  return guarded([&] {
    require(net && out, "null argument");
    volta::ConsensusOptions options;
    options.tol = tol;
    options.max_steps = max_steps;
    const auto state = volta::consensus_run(net->net, boundary_of(net, boundary), options);
    *out = new volta_field{volta::to_field(net->net, state)};
    if (steps) *steps = state.t;
  });
}

volta_status volta_recipe_names(char** names) {
  return guarded([&] {
    require(names != nullptr, "null argument");
    std::string text;
    for (const auto& name : volta::recipe_names()) text += name + "\n";
    *names = dup_string(text);
  });
}

volta_status volta_recipe_config(const char* name, char** config_text) {
  return guarded([&] {
    require(name && config_text, "null argument");
    *config_text = dup_string(volta::serialize_config(volta::recipe(name)));
  });
}

volta_status volta_run_recipe(const char* name, const char* output_dir, int has_seed,
                              uint64_t seed_override, char** manifest) {
  return guarded([&] {
    require(name != nullptr, "null argument");
    const auto cfg = prepared(volta::recipe(name), output_dir, has_seed, seed_override);
    const auto result = volta::run_experiment(cfg);
    if (manifest) *manifest = dup_string(result.to_json().dump(2) + "\n");
  });
}

volta_status volta_run_config(const char* path, const char* output_dir, int has_seed,
                              uint64_t seed_override, char** manifest) {
  return guarded([&] {
    require(path != nullptr, "null argument");
    const auto cfg = prepared(volta::load_config(path), output_dir, has_seed, seed_override);
    const auto result = volta::run_experiment(cfg);
    if (manifest) *manifest = dup_string(result.to_json().dump(2) + "\n");
  });
}

volta_status volta_sweep(const char* recipe, const char* config_path, const char* output_dir,
                         int has_seed, uint64_t seed_override, const char* axis,
                         const double* values, size_t count, size_t workers,
                         char** summary_path) {
  return guarded([&] {
    require((recipe == nullptr) != (config_path == nullptr),
            "exactly one of recipe and config is required");
    require(axis && (values || count == 0), "null argument");
    auto base = recipe ? volta::recipe(recipe) : volta::load_config(config_path);
    base = prepared(std::move(base), output_dir, has_seed, seed_override);
    const auto result =
        volta::sweep(base, axis, std::vector<double>(values, values + count), workers);
    if (summary_path) *summary_path = dup_string(result.summary_csv.string());
    for (const auto& run : result.runs) {
      if (!run.ok) {
        throw volta::Error(run.error_code.value_or(volta::ErrorCode::kInternal),
                           "sweep run failed: " + run.error);
      }
    }
  });
}

}  // extern "C"
