/* C interface to the volta library. Every function returns a status; on
 * failure volta_last_error() describes it (per thread). Vertex indices are
 * 0-based here; text formats and boundary strings use 1-based labels. */
#ifndef VOLTA_VOLTA_H
#define VOLTA_VOLTA_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define VOLTA_API __declspec(dllexport)
#elif defined(__GNUC__)
#define VOLTA_API __attribute__((visibility("default")))
#else
#define VOLTA_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum volta_status {
  VOLTA_OK = 0,
  VOLTA_E_ARGUMENT = 1,
  VOLTA_E_INDEX = 2,
  VOLTA_E_IO = 3,
  VOLTA_E_PARSE = 4,
  VOLTA_E_MODELING = 5,
  VOLTA_E_DEGENERATE = 6,
  VOLTA_E_CONVERGENCE = 7,
  VOLTA_E_DEFINEDNESS = 8,
  VOLTA_E_BUDGET = 9,
  VOLTA_E_CONFIG = 10,
  VOLTA_E_INTERNAL = 11
} volta_status;

typedef struct volta_graph volta_graph;
typedef struct volta_network volta_network;
typedef struct volta_field volta_field;

VOLTA_API const char* volta_version(void);
VOLTA_API const char* volta_rng_algorithm(void);
VOLTA_API const char* volta_status_name(volta_status status);
/* Message of the last failing call on this thread, "" if none. */
VOLTA_API const char* volta_last_error(void);
/* Frees strings returned through char** out-parameters. */
VOLTA_API void volta_string_free(char* s);

VOLTA_API volta_status volta_alpha_to_p(double alpha, size_t n, double* p);

/* kind: gnp | circle | small_world (small-world accepted). */
VOLTA_API volta_status volta_graph_generate(const char* kind, size_t n, double p, uint64_t seed,
                                            volta_graph** out);
VOLTA_API volta_status volta_graph_load(const char* path, volta_graph** out);
VOLTA_API volta_status volta_graph_save(const volta_graph* g, const char* path);
VOLTA_API size_t volta_graph_vertex_count(const volta_graph* g);
VOLTA_API size_t volta_graph_edge_count(const volta_graph* g);
VOLTA_API void volta_graph_free(volta_graph* g);

/* scheme: unit | uniform01 | power_law (powerlaw accepted). */
VOLTA_API volta_status volta_network_assign(const volta_graph* g, const char* scheme,
                                            uint64_t seed, double gamma, double epsilon,
                                            volta_network** out);
VOLTA_API volta_status volta_network_load(const char* path, volta_network** out);
VOLTA_API volta_status volta_network_save(const volta_network* net, const char* path);
VOLTA_API size_t volta_network_vertex_count(const volta_network* net);
VOLTA_API size_t volta_network_edge_count(const volta_network* net);
VOLTA_API void volta_network_free(volta_network* net);

/* boundary: "1:1.0,251:0.3" or "spread:p1,p2,..." */
VOLTA_API volta_status volta_solve(const volta_network* net, const char* boundary, double tol,
                                   uint64_t max_iter, volta_field** out);
VOLTA_API volta_status volta_solve_dense(const volta_network* net, const char* boundary,
                                         volta_field** out);
VOLTA_API size_t volta_field_size(const volta_field* f);
/* *defined is 0 and *value NaN for vertices that cannot reach the boundary. */
VOLTA_API volta_status volta_field_value(const volta_field* f, size_t vertex, double* value,
                                         int* defined);
VOLTA_API uint64_t volta_field_iterations(const volta_field* f);
VOLTA_API double volta_field_residual(const volta_field* f);
VOLTA_API volta_status volta_field_save_csv(const volta_field* f, const char* path);
VOLTA_API volta_status volta_field_load_csv(const char* path, volta_field** out);
VOLTA_API void volta_field_free(volta_field* f);

VOLTA_API volta_status volta_current_balance(const volta_network* net, const volta_field* f,
                                             const char* boundary, double* balance);

/* Monte Carlo hitting estimates written as CSV to out_path. starts is a
 * comma-separated list of 1-based vertices or NULL for every vertex. */
VOLTA_API volta_status volta_walk(const volta_network* net, const char* boundary,
                                  uint64_t walks_per_vertex, uint64_t seed, size_t threads,
                                  const char* starts, const char* out_path);

VOLTA_API volta_status volta_mix(const volta_network* net, const char* boundary, double k0,
                                 uint64_t samples, uint64_t seed, char** json);

/* boundary may be NULL (nothing excluded from the expansion audit). alpha
 * <= 0 derives it from the edge density. */
VOLTA_API volta_status volta_check(const volta_network* net, const char* boundary, double alpha,
                                   double delta, size_t exhaustive_cap, uint64_t samples,
                                   uint64_t seed, char** json);

VOLTA_API volta_status volta_stats(const volta_network* net, const volta_field* f,
                                   const char* boundary, size_t bins, char** json);

VOLTA_API volta_status volta_consensus(const volta_network* net, const char* boundary, double tol,
                                       uint64_t max_steps, volta_field** out, uint64_t* steps);

/* Newline-separated list of builtin recipe names. */
VOLTA_API volta_status volta_recipe_names(char** names);
/* Config text of a builtin recipe. */
VOLTA_API volta_status volta_recipe_config(const char* name, char** config_text);

/* Runs a builtin recipe or a config file. output_dir may be NULL to keep the
 * configured directory; seed_override is applied when has_seed is nonzero.
 * manifest receives the manifest JSON (may be NULL). */
VOLTA_API volta_status volta_run_recipe(const char* name, const char* output_dir, int has_seed,
                                        uint64_t seed_override, char** manifest);
VOLTA_API volta_status volta_run_config(const char* path, const char* output_dir, int has_seed,
                                        uint64_t seed_override, char** manifest);

/* Sweeps `axis` over values starting from a recipe name or config file
 * (exactly one non-NULL). summary_path receives the summary CSV path even
 * when some run failed; the status is then that run's error. */
VOLTA_API volta_status volta_sweep(const char* recipe, const char* config_path,
                                   const char* output_dir, int has_seed, uint64_t seed_override,
                                   const char* axis, const double* values, size_t count,
                                   size_t workers, char** summary_path);

#ifdef __cplusplus
}
#endif

#endif
