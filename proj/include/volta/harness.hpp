#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "volta/error.hpp"
#include "volta/generators.hpp"
#include "volta/harmonic.hpp"
#include "volta/network.hpp"

namespace volta {

inline constexpr const char* kLibraryVersion = "0.1.0";
inline constexpr std::uint64_t kDefaultMasterSeed = 20100601;
inline constexpr const char* kRecipeBoundary = "1:1.0,251:0.3,501:0.7,751:1.0";

struct ExperimentConfig {
  std::string name = "experiment";
  std::uint64_t master_seed = kDefaultMasterSeed;
  std::filesystem::path output_dir = "run";

  struct {
    GenKind kind = GenKind::kGnp;
    std::size_t n = 1000;
    double p = 0.01;
    double alpha = 0.0;  // > 0 overrides p via p = alpha ln n / n
  } generator;

  struct {
    SchemeKind kind = SchemeKind::kUnit;
    double gamma = 2.5;
    double epsilon = 1e-6;
  } conductance;

  std::string boundary = kRecipeBoundary;
  SolveOptions solver;

  struct {
    bool enabled = false;
    std::size_t walks_per_vertex = 10'000;
    std::size_t threads = 1;
  } walk;

  struct {
    bool enabled = false;
    double alpha = 0.0;  // <= 0: taken from the generator
    double delta = 0.1;
    std::size_t exhaustive_cap = 2;
    std::size_t samples = 10'000;
  } check;

  struct {
    bool enabled = false;
    double k0 = 10.0;
    std::size_t samples = 100'000;
  } mix;

  std::size_t bins = 50;

  double effective_p() const;
  GenSpec gen_spec() const;
  ConductanceScheme scheme() const;

  friend bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);
};

// Seeds of every stage, derived from the master seed.
struct DerivedSeeds {
  std::uint64_t generator = 0;
  std::uint64_t conductance = 0;
  std::uint64_t walk = 0;
  std::uint64_t check = 0;
  std::uint64_t mix = 0;
};

DerivedSeeds derive_seeds(std::uint64_t master_seed);

// INI-style text: top-level keys, then [generator], [conductance],
// [boundary], [solver], [walk], [check], [mix], [stats] sections.
std::string serialize_config(const ExperimentConfig& cfg);
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

// fig1|fig2|fig3 x unit|uniform01|powerlaw, e.g. "fig2-unit".
std::vector<std::string> recipe_names();
// Throws kConfig for an unknown name.
ExperimentConfig recipe(std::string_view name);

struct StageTiming {
  std::string stage;
  double seconds = 0.0;
};

struct OutputFile {
  std::string name;
  std::string sha256;
};

struct RunManifest {
  std::string config_text;
  std::string library_version = kLibraryVersion;
  std::string rng_algorithm;
  DerivedSeeds seeds;
  std::vector<StageTiming> timings;
  std::vector<OutputFile> files;
  bool ok = false;
  std::string failed_stage;
  std::string error;
  std::optional<ErrorCode> error_code;
  nlohmann::json summary = nlohmann::json::object();

  nlohmann::json to_json() const;
};

std::string sha256_hex(std::string_view data);

// generate -> assign -> solve -> stats, then optional walk, check and mix.
// Writes network.txt, field.csv, stats.json (and estimates.csv, report.json,
// mixing.json when enabled) plus manifest.json into cfg.output_dir. A failing
// stage still writes the manifest (marking the stage) and then throws an
// Error whose message starts with the stage name.
RunManifest run_experiment(const ExperimentConfig& cfg);

// Numeric config fields a sweep may vary.
std::vector<std::string> sweep_axes();
void set_axis(ExperimentConfig& cfg, std::string_view axis, double value);

struct SweepResult {
  std::vector<RunManifest> runs;
  std::filesystem::path summary_csv;
};

// One run per value in output_dir/<axis>_<index>, run i with master seed
// derive_seed(base.master_seed, i); summary CSV "value,v_bar_c,max_dev,
// mean_dev" at output_dir/sweep_<axis>.csv (stats left empty for failed
// runs, which do not stop the sweep). Up to `workers` runs execute at once.
SweepResult sweep(const ExperimentConfig& base, std::string_view axis,
                  const std::vector<double>& values, std::size_t workers = 1);

}  // namespace volta
