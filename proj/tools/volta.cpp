// Command-line front end; talks to the library only through the C API.
#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "volta/volta.h"

namespace {

struct GraphDeleter {
  void operator()(volta_graph* g) const { volta_graph_free(g); }
};
struct NetworkDeleter {
  void operator()(volta_network* n) const { volta_network_free(n); }
};
struct FieldDeleter {
  void operator()(volta_field* f) const { volta_field_free(f); }
};
struct StringDeleter {
  void operator()(char* s) const { volta_string_free(s); }
};

using GraphPtr = std::unique_ptr<volta_graph, GraphDeleter>;
using NetworkPtr = std::unique_ptr<volta_network, NetworkDeleter>;
using FieldPtr = std::unique_ptr<volta_field, FieldDeleter>;
using StringPtr = std::unique_ptr<char, StringDeleter>;

struct Failure {
  volta_status status;
};

void check(volta_status status) {
  if (status != VOLTA_OK) throw Failure{status};
}

const char* or_null(const std::optional<std::string>& s) { return s ? s->c_str() : nullptr; }

// Master seed override from VOLTA_SEED, if set.
std::optional<std::uint64_t> env_seed() {
  const char* text = std::getenv("VOLTA_SEED");
  if (!text || !*text) return std::nullopt;
  char* end = nullptr;
  const unsigned long long value = std::strtoull(text, &end, 10);
  if (*end != '\0' || text[0] == '-') {
    std::fprintf(stderr, "error: VOLTA_SEED is not a non-negative integer: '%s'\n", text);
    std::exit(VOLTA_E_ARGUMENT);
  }
  return value;
}

// Seed for a single-stage verb: --seed wins, then VOLTA_SEED, then 0.
std::uint64_t stage_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  return env_seed().value_or(0);
}

NetworkPtr load_network(const std::string& path) {
  volta_network* raw = nullptr;
  check(volta_network_load(path.c_str(), &raw));
  return NetworkPtr(raw);
}

void emit_text(const char* text, const std::optional<std::string>& out) {
  if (!out) {
    std::fputs(text, stdout);
    return;
  }
  const std::string tmp = *out + ".tmp";
  {
    std::ofstream file(tmp, std::ios::binary | std::ios::trunc);
    file << text;
    if (!file) {
      std::fprintf(stderr, "error: cannot write %s\n", out->c_str());
      throw Failure{VOLTA_E_IO};
    }
  }
  if (std::rename(tmp.c_str(), out->c_str()) != 0) {
    std::fprintf(stderr, "error: cannot write %s\n", out->c_str());
    throw Failure{VOLTA_E_IO};
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"volta: random electrical networks and their potentials"};
  app.require_subcommand(1);
  app.set_version_flag("--version", volta_version());

  // generate
  auto* gen = app.add_subcommand("generate", "Draw a random graph");
  std::string gen_kind = "gnp";
  std::size_t gen_n = 0;
  std::optional<double> gen_p, gen_alpha;
  std::optional<std::uint64_t> gen_seed;
  std::string gen_out;
  gen->add_option("--kind", gen_kind, "gnp | circle | small-world")->capture_default_str();
  gen->add_option("--n", gen_n, "vertex count")->required();
  auto* p_opt = gen->add_option("--p", gen_p, "edge probability");
  gen->add_option("--alpha", gen_alpha, "p = alpha ln n / n")->excludes(p_opt);
  gen->add_option("--seed", gen_seed);
  gen->add_option("--out", gen_out)->required();

  // assign
  auto* asg = app.add_subcommand("assign", "Assign conductances to a graph");
  std::string asg_scheme = "unit", asg_in, asg_out;
  double asg_gamma = 2.5, asg_epsilon = 1e-6;
  std::optional<std::uint64_t> asg_seed;
  asg->add_option("--scheme", asg_scheme, "unit | uniform01 | powerlaw")->capture_default_str();
  asg->add_option("--gamma", asg_gamma, "power-law exponent")->capture_default_str();
  asg->add_option("--epsilon", asg_epsilon, "floor for uniform draws")->capture_default_str();
  asg->add_option("--seed", asg_seed);
  asg->add_option("--in", asg_in)->required();
  asg->add_option("--out", asg_out)->required();

  // solve
  auto* slv = app.add_subcommand("solve", "Solve the Dirichlet problem");
  std::string slv_net, slv_boundary, slv_out;
  double slv_tol = 1e-10;
  std::uint64_t slv_max_iter = 1'000'000;
  bool slv_dense = false;
  slv->add_option("--net", slv_net)->required();
  slv->add_option("--boundary", slv_boundary)->required();
  slv->add_option("--tol", slv_tol)->capture_default_str();
  slv->add_option("--max-iter", slv_max_iter)->capture_default_str();
  slv->add_flag("--dense", slv_dense, "direct elimination instead of iteration");
  slv->add_option("--out", slv_out)->required();

  // walk
  auto* wlk = app.add_subcommand("walk", "Monte Carlo hitting probabilities");
  std::string wlk_net, wlk_boundary, wlk_out;
  std::optional<std::string> wlk_starts;
  std::uint64_t wlk_walks = 10'000;
  std::size_t wlk_threads = 1;
  std::optional<std::uint64_t> wlk_seed;
  wlk->add_option("--net", wlk_net)->required();
  wlk->add_option("--boundary", wlk_boundary)->required();
  wlk->add_option("--walks", wlk_walks, "walks per start vertex")->capture_default_str();
  wlk->add_option("--starts", wlk_starts, "comma-separated start vertices (default all)");
  wlk->add_option("--threads", wlk_threads)->capture_default_str();
  wlk->add_option("--seed", wlk_seed);
  wlk->add_option("--out", wlk_out)->required();

  // mix
  auto* mix = app.add_subcommand("mix", "Mixing and escape diagnostics");
  std::string mix_net, mix_boundary;
  std::optional<std::string> mix_out;
  double mix_k0 = 10.0;
  std::uint64_t mix_samples = 100'000;
  std::optional<std::uint64_t> mix_seed;
  mix->add_option("--net", mix_net)->required();
  mix->add_option("--boundary", mix_boundary)->required();
  mix->add_option("--k0", mix_k0)->capture_default_str();
  mix->add_option("--samples", mix_samples)->capture_default_str();
  mix->add_option("--seed", mix_seed);
  mix->add_option("--out", mix_out, "JSON file (default stdout)");

  // check
  auto* chk = app.add_subcommand("check", "Audit the structural properties P1-P5");
  std::string chk_net;
  std::optional<std::string> chk_boundary, chk_out;
  double chk_alpha = 0.0, chk_delta = 0.1;
  std::size_t chk_cap = 2;
  std::uint64_t chk_samples = 10'000;
  std::optional<std::uint64_t> chk_seed;
  chk->add_option("--net", chk_net)->required();
  chk->add_option("--boundary", chk_boundary, "vertices excluded from the expansion audit");
  chk->add_option("--alpha", chk_alpha, "<= 0 derives alpha from the edge density")
      ->capture_default_str();
  chk->add_option("--delta", chk_delta)->capture_default_str();
  chk->add_option("--exhaustive-cap", chk_cap)->capture_default_str();
  chk->add_option("--samples", chk_samples)->capture_default_str();
  chk->add_option("--seed", chk_seed);
  chk->add_option("--out", chk_out, "JSON file (default stdout)");

  // stats
  auto* sts = app.add_subcommand("stats", "Concentration statistics of a field");
  std::string sts_field, sts_net, sts_boundary;
  std::optional<std::string> sts_out;
  std::size_t sts_bins = 50;
  sts->add_option("--field", sts_field)->required();
  sts->add_option("--net", sts_net)->required();
  sts->add_option("--boundary", sts_boundary)->required();
  sts->add_option("--bins", sts_bins)->capture_default_str();
  sts->add_option("--out", sts_out, "JSON file (default stdout)");

  // consensus
  auto* cns = app.add_subcommand("consensus", "Leader-follower consensus dynamics");
  std::string cns_net, cns_boundary, cns_out;
  double cns_tol = 1e-10;
  std::uint64_t cns_max_steps = 10'000'000;
  cns->add_option("--net", cns_net)->required();
  cns->add_option("--boundary", cns_boundary, "leaders and their scores")->required();
  cns->add_option("--tol", cns_tol)->capture_default_str();
  cns->add_option("--max-steps", cns_max_steps)->capture_default_str();
  cns->add_option("--out", cns_out)->required();

  // run
  auto* run = app.add_subcommand("run", "Run a full experiment");
  std::optional<std::string> run_recipe, run_config, run_dir;
  bool run_list = false;
  auto* recipe_opt = run->add_option("--recipe", run_recipe, "builtin recipe name");
  auto* config_opt = run->add_option("--config", run_config, "config file");
  recipe_opt->excludes(config_opt);
  run->add_option("--output-dir", run_dir, "overrides the configured directory");
  run->add_flag("--list", run_list, "list builtin recipes");
  bool run_print_config = false;
  run->add_flag("--print-config", run_print_config, "print the recipe's config and exit");

  // sweep
  auto* swp = app.add_subcommand("sweep", "Run one experiment per axis value");
  std::optional<std::string> swp_recipe, swp_config, swp_dir;
  std::string swp_axis;
  std::vector<double> swp_values;
  std::size_t swp_workers = 1;
  auto* swp_recipe_opt = swp->add_option("--recipe", swp_recipe);
  auto* swp_config_opt = swp->add_option("--config", swp_config);
  swp_recipe_opt->excludes(swp_config_opt);
  swp->add_option("--axis", swp_axis)->required();
  swp->add_option("--values", swp_values)->required()->delimiter(',');
  swp->add_option("--workers", swp_workers)->capture_default_str();
  swp->add_option("--output-dir", swp_dir);

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      double p = gen_p.value_or(0.0);
      if (gen_alpha) check(volta_alpha_to_p(*gen_alpha, gen_n, &p));
      if (!gen_p && !gen_alpha && gen_kind != "circle") {
        std::fprintf(stderr, "error: --p or --alpha is required for %s\n", gen_kind.c_str());
        return VOLTA_E_ARGUMENT;
      }
      volta_graph* raw = nullptr;
      check(volta_graph_generate(gen_kind.c_str(), gen_n, p, stage_seed(gen_seed), &raw));
      GraphPtr g(raw);
      check(volta_graph_save(g.get(), gen_out.c_str()));
      std::fprintf(stderr, "wrote %s: n=%zu m=%zu\n", gen_out.c_str(),
                   volta_graph_vertex_count(g.get()), volta_graph_edge_count(g.get()));
    } else if (asg->parsed()) {
      volta_graph* raw = nullptr;
      check(volta_graph_load(asg_in.c_str(), &raw));
      GraphPtr g(raw);
      volta_network* net = nullptr;
      check(volta_network_assign(g.get(), asg_scheme.c_str(), stage_seed(asg_seed), asg_gamma,
                                 asg_epsilon, &net));
      NetworkPtr n(net);
      check(volta_network_save(n.get(), asg_out.c_str()));
    } else if (slv->parsed()) {
      auto net = load_network(slv_net);
      volta_field* raw = nullptr;
      if (slv_dense) {
        check(volta_solve_dense(net.get(), slv_boundary.c_str(), &raw));
      } else {
        check(volta_solve(net.get(), slv_boundary.c_str(), slv_tol, slv_max_iter, &raw));
      }
      FieldPtr f(raw);
      check(volta_field_save_csv(f.get(), slv_out.c_str()));
      double balance = 0.0;
      check(volta_current_balance(net.get(), f.get(), slv_boundary.c_str(), &balance));
      std::fprintf(stderr, "iterations=%llu residual=%.3g current_balance=%.3g\n",
                   static_cast<unsigned long long>(volta_field_iterations(f.get())),
                   volta_field_residual(f.get()), balance);
    } else if (wlk->parsed()) {
      auto net = load_network(wlk_net);
      check(volta_walk(net.get(), wlk_boundary.c_str(), wlk_walks, stage_seed(wlk_seed),
                       wlk_threads, or_null(wlk_starts), wlk_out.c_str()));
    } else if (mix->parsed()) {
      auto net = load_network(mix_net);
      char* json = nullptr;
      check(volta_mix(net.get(), mix_boundary.c_str(), mix_k0, mix_samples, stage_seed(mix_seed),
                      &json));
      StringPtr text(json);
      emit_text(text.get(), mix_out);
    } else if (chk->parsed()) {
      auto net = load_network(chk_net);
      char* json = nullptr;
      check(volta_check(net.get(), or_null(chk_boundary), chk_alpha, chk_delta, chk_cap,
                        chk_samples, stage_seed(chk_seed), &json));
      StringPtr text(json);
      emit_text(text.get(), chk_out);
    } else if (sts->parsed()) {
      auto net = load_network(sts_net);
      volta_field* raw = nullptr;
      check(volta_field_load_csv(sts_field.c_str(), &raw));
      FieldPtr f(raw);
      char* json = nullptr;
      check(volta_stats(net.get(), f.get(), sts_boundary.c_str(), sts_bins, &json));
      StringPtr text(json);
      emit_text(text.get(), sts_out);
    } else if (cns->parsed()) {
      auto net = load_network(cns_net);
      volta_field* raw = nullptr;
      std::uint64_t steps = 0;
      check(volta_consensus(net.get(), cns_boundary.c_str(), cns_tol, cns_max_steps, &raw,
                            &steps));
      FieldPtr f(raw);
      check(volta_field_save_csv(f.get(), cns_out.c_str()));
      std::fprintf(stderr, "steps=%llu\n", static_cast<unsigned long long>(steps));
    } else if (run->parsed()) {
      if (run_list) {
        char* names = nullptr;
        check(volta_recipe_names(&names));
        StringPtr text(names);
        std::fputs(text.get(), stdout);
        return 0;
      }
      if (!run_recipe && !run_config) {
        std::fprintf(stderr, "error: run needs --recipe or --config\n");
        return VOLTA_E_ARGUMENT;
      }
      if (run_print_config) {
        if (!run_recipe) {
          std::fprintf(stderr, "error: --print-config needs --recipe\n");
          return VOLTA_E_ARGUMENT;
        }
        char* cfg = nullptr;
        check(volta_recipe_config(run_recipe->c_str(), &cfg));
        StringPtr text(cfg);
        std::fputs(text.get(), stdout);
        return 0;
      }
      const auto seed = env_seed();
      char* manifest = nullptr;
      if (run_recipe) {
        check(volta_run_recipe(run_recipe->c_str(), or_null(run_dir), seed.has_value(),
                               seed.value_or(0), &manifest));
      } else {
        check(volta_run_config(run_config->c_str(), or_null(run_dir), seed.has_value(),
                               seed.value_or(0), &manifest));
      }
      StringPtr text(manifest);
      std::fputs(text.get(), stdout);
    } else if (swp->parsed()) {
      if (!swp_recipe == !swp_config) {
        std::fprintf(stderr, "error: sweep needs exactly one of --recipe and --config\n");
        return VOLTA_E_ARGUMENT;
      }
      const auto seed = env_seed();
      char* summary = nullptr;
      const volta_status status =
          volta_sweep(or_null(swp_recipe), or_null(swp_config), or_null(swp_dir),
                      seed.has_value(), seed.value_or(0), swp_axis.c_str(), swp_values.data(),
                      swp_values.size(), swp_workers, &summary);
      StringPtr text(summary);
      if (text) std::printf("%s\n", text.get());
      check(status);
    }
  } catch (const Failure& f) {
    const char* message = volta_last_error();
    if (*message) {
      std::fprintf(stderr, "error (%s): %s\n", volta_status_name(f.status), message);
    }
    return static_cast<int>(f.status);
  }
  return 0;
}
