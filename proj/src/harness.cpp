#include "volta/harness.hpp"

#include <openssl/evp.h>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <functional>
#include <optional>
#include <sstream>
#include <thread>

#include "volta/concentration.hpp"
#include "volta/error.hpp"
#include "volta/io.hpp"
#include "volta/properness.hpp"
#include "volta/rng.hpp"
#include "volta/walk.hpp"

namespace volta {

namespace fs = std::filesystem;

double ExperimentConfig::effective_p() const {
  return generator.alpha > 0.0 ? alpha_to_p(generator.alpha, generator.n) : generator.p;
}

GenSpec ExperimentConfig::gen_spec() const {
  return {generator.kind, generator.n, effective_p(), derive_seeds(master_seed).generator};
}

ConductanceScheme ExperimentConfig::scheme() const {
  return {conductance.kind, derive_seeds(master_seed).conductance, conductance.gamma,
          conductance.epsilon};
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
  return serialize_config(a) == serialize_config(b);
}

DerivedSeeds derive_seeds(std::uint64_t master_seed) {
  return {derive_seed(master_seed, 1), derive_seed(master_seed, 2), derive_seed(master_seed, 3),
          derive_seed(master_seed, 4), derive_seed(master_seed, 5)};
}

namespace {

std::string shortest(double x) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

using boost::property_tree::ptree;

double to_double(const std::string& key, const std::string& text) {
  double x = 0.0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), x);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw Error(ErrorCode::kConfig, "config key '" + key + "' is not a number: '" + text + "'");
  }
  return x;
}

std::uint64_t to_u64(const std::string& key, const std::string& text) {
  std::uint64_t x = 0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), x);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw Error(ErrorCode::kConfig,
                "config key '" + key + "' is not a non-negative integer: '" + text + "'");
  }
  return x;
}

bool to_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw Error(ErrorCode::kConfig, "config key '" + key + "' is not a boolean: '" + text + "'");
}

// Reads an optional key, keeping `current` when it is absent.
class Reader {
 public:
  explicit Reader(const ptree& tree) : tree_(tree) {}

  void number(const std::string& key, double& out) {
    if (auto v = tree_.get_optional<std::string>(key)) out = to_double(key, *v);
  }
  void count(const std::string& key, std::size_t& out) {
    if (auto v = tree_.get_optional<std::string>(key)) out = to_u64(key, *v);
  }
  void seed(const std::string& key, std::uint64_t& out) {
    if (auto v = tree_.get_optional<std::string>(key)) out = to_u64(key, *v);
  }
  void flag(const std::string& key, bool& out) {
    if (auto v = tree_.get_optional<std::string>(key)) out = to_bool(key, *v);
  }
  void text(const std::string& key, std::string& out) {
    if (auto v = tree_.get_optional<std::string>(key)) out = *v;
  }

 private:
  const ptree& tree_;
};

}  // namespace

std::string serialize_config(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "# volta experiment\n"
      << "name = " << cfg.name << "\n"
      << "master_seed = " << cfg.master_seed << "\n"
      << "output_dir = " << cfg.output_dir.string() << "\n"
      << "\n[generator]\n"
      << "kind = " << to_string(cfg.generator.kind) << "\n"
      << "n = " << cfg.generator.n << "\n"
      << "p = " << shortest(cfg.generator.p) << "\n"
      << "alpha = " << shortest(cfg.generator.alpha) << "\n"
      << "\n[conductance]\n"
      << "scheme = " << to_string(cfg.conductance.kind) << "\n"
      << "gamma = " << shortest(cfg.conductance.gamma) << "\n"
      << "epsilon = " << shortest(cfg.conductance.epsilon) << "\n"
      << "\n[boundary]\n"
      << "spec = " << cfg.boundary << "\n"
      << "\n[solver]\n"
      << "tol = " << shortest(cfg.solver.tol) << "\n"
      << "max_iter = " << cfg.solver.max_iter << "\n"
      << "relaxation = " << shortest(cfg.solver.relaxation) << "\n"
      << "adaptive_relaxation = " << (cfg.solver.adaptive_relaxation ? "true" : "false") << "\n"
      << "\n[walk]\n"
      << "enabled = " << (cfg.walk.enabled ? "true" : "false") << "\n"
      << "walks_per_vertex = " << cfg.walk.walks_per_vertex << "\n"
      << "threads = " << cfg.walk.threads << "\n"
      << "\n[check]\n"
      << "enabled = " << (cfg.check.enabled ? "true" : "false") << "\n"
      << "alpha = " << shortest(cfg.check.alpha) << "\n"
      << "delta = " << shortest(cfg.check.delta) << "\n"
      << "exhaustive_cap = " << cfg.check.exhaustive_cap << "\n"
      << "samples = " << cfg.check.samples << "\n"
      << "\n[mix]\n"
      << "enabled = " << (cfg.mix.enabled ? "true" : "false") << "\n"
      << "k0 = " << shortest(cfg.mix.k0) << "\n"
      << "samples = " << cfg.mix.samples << "\n"
      << "\n[stats]\n"
      << "bins = " << cfg.bins << "\n";
  return out.str();
}

ExperimentConfig parse_config(std::string_view text) {
  ptree tree;
  try {
    std::istringstream in{std::string(text)};
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw Error(ErrorCode::kConfig, std::string("config syntax: ") + e.what());
  }
  static const std::map<std::string, std::vector<std::string>> kKnown = {
      {"generator", {"kind", "n", "p", "alpha"}},
      {"conductance", {"scheme", "gamma", "epsilon"}},
      {"boundary", {"spec"}},
      {"solver", {"tol", "max_iter", "relaxation", "adaptive_relaxation"}},
      {"walk", {"enabled", "walks_per_vertex", "threads"}},
      {"check", {"enabled", "alpha", "delta", "exhaustive_cap", "samples"}},
      {"mix", {"enabled", "k0", "samples"}},
      {"stats", {"bins"}},
  };
  for (const auto& [key, child] : tree) {
    if (child.empty()) {
      if (key != "name" && key != "master_seed" && key != "output_dir") {
        throw Error(ErrorCode::kConfig, "unknown config key '" + key + "'");
      }
      continue;
    }
    auto section = kKnown.find(key);
    if (section == kKnown.end()) throw Error(ErrorCode::kConfig, "unknown section [" + key + "]");
    for (const auto& [sub, unused] : child) {
      const auto& allowed = section->second;
      if (std::find(allowed.begin(), allowed.end(), sub) == allowed.end()) {
        throw Error(ErrorCode::kConfig, "unknown key '" + sub + "' in [" + key + "]");
      }
    }
  }

  ExperimentConfig cfg;
  Reader r(tree);
  r.text("name", cfg.name);
  r.seed("master_seed", cfg.master_seed);
  std::string dir = cfg.output_dir.string();
  r.text("output_dir", dir);
  cfg.output_dir = dir;

  std::string kind(to_string(cfg.generator.kind));
  r.text("generator.kind", kind);
  try {
    cfg.generator.kind = parse_gen_kind(kind);
  } catch (const Error& e) {
    throw Error(ErrorCode::kConfig, e.what());
  }
  r.count("generator.n", cfg.generator.n);
  r.number("generator.p", cfg.generator.p);
  r.number("generator.alpha", cfg.generator.alpha);

  std::string scheme(to_string(cfg.conductance.kind));
  r.text("conductance.scheme", scheme);
  try {
    cfg.conductance.kind = parse_scheme_kind(scheme);
  } catch (const Error& e) {
    throw Error(ErrorCode::kConfig, e.what());
  }
  r.number("conductance.gamma", cfg.conductance.gamma);
  r.number("conductance.epsilon", cfg.conductance.epsilon);

  r.text("boundary.spec", cfg.boundary);

  r.number("solver.tol", cfg.solver.tol);
  r.count("solver.max_iter", cfg.solver.max_iter);
  r.number("solver.relaxation", cfg.solver.relaxation);
  r.flag("solver.adaptive_relaxation", cfg.solver.adaptive_relaxation);

  r.flag("walk.enabled", cfg.walk.enabled);
  r.count("walk.walks_per_vertex", cfg.walk.walks_per_vertex);
  r.count("walk.threads", cfg.walk.threads);

  r.flag("check.enabled", cfg.check.enabled);
  r.number("check.alpha", cfg.check.alpha);
  r.number("check.delta", cfg.check.delta);
  r.count("check.exhaustive_cap", cfg.check.exhaustive_cap);
  r.count("check.samples", cfg.check.samples);

  r.flag("mix.enabled", cfg.mix.enabled);
  r.number("mix.k0", cfg.mix.k0);
  r.count("mix.samples", cfg.mix.samples);

  r.count("stats.bins", cfg.bins);
  return cfg;
}

ExperimentConfig load_config(const fs::path& path) { return parse_config(io::read_file(path)); }

std::vector<std::string> recipe_names() {
  std::vector<std::string> names;
  for (const char* fig : {"fig1", "fig2", "fig3"}) {
    for (const char* scheme : {"unit", "uniform01", "powerlaw"}) {
      names.push_back(std::string(fig) + "-" + scheme);
    }
  }
  return names;
}

ExperimentConfig recipe(std::string_view name) {
  const auto dash = name.find('-');
  if (dash == std::string_view::npos) {
    throw Error(ErrorCode::kConfig, "unknown recipe '" + std::string(name) + "'");
  }
  const auto fig = name.substr(0, dash);
  const auto scheme = name.substr(dash + 1);
  ExperimentConfig cfg;
  cfg.name = std::string(name);
  cfg.output_dir = std::string(name);
  cfg.boundary = kRecipeBoundary;
  cfg.generator.n = 1000;
  if (fig == "fig1") {
    cfg.generator.kind = GenKind::kCircle;
    cfg.generator.p = 0.0;
  } else if (fig == "fig2") {
    cfg.generator.kind = GenKind::kGnp;
    cfg.generator.p = 0.01;
  } else if (fig == "fig3") {
    cfg.generator.kind = GenKind::kSmallWorld;
    cfg.generator.p = 0.001;
  } else {
    throw Error(ErrorCode::kConfig, "unknown recipe '" + std::string(name) + "'");
  }
  if (scheme == "unit") {
    cfg.conductance.kind = SchemeKind::kUnit;
  } else if (scheme == "uniform01") {
    cfg.conductance.kind = SchemeKind::kUniform01;
  } else if (scheme == "powerlaw") {
    cfg.conductance.kind = SchemeKind::kPowerLaw;
  } else {
    throw Error(ErrorCode::kConfig, "unknown recipe '" + std::string(name) + "'");
  }
  return cfg;
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::kInternal, "sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  for (unsigned int i = 0; i < length; ++i) {
    hex += kHex[digest[i] >> 4];
    hex += kHex[digest[i] & 0xf];
  }
  return hex;
}

nlohmann::json RunManifest::to_json() const {
  nlohmann::json timing = nlohmann::json::array();
  for (const auto& t : timings) timing.push_back({{"stage", t.stage}, {"seconds", t.seconds}});
  nlohmann::json outputs = nlohmann::json::array();
  for (const auto& f : files) outputs.push_back({{"file", f.name}, {"sha256", f.sha256}});
  return {{"config", config_text},
          {"library_version", library_version},
          {"rng_algorithm", rng_algorithm},
          {"seeds",
           {{"generator", seeds.generator},
            {"conductance", seeds.conductance},
            {"walk", seeds.walk},
            {"check", seeds.check},
            {"mix", seeds.mix}}},
          {"timings", timing},
          {"outputs", outputs},
          {"status", ok ? "ok" : "failed"},
          {"failed_stage", failed_stage},
          {"error", error},
          {"summary", summary}};
}

RunManifest run_experiment(const ExperimentConfig& cfg) {
  RunManifest manifest;
  manifest.config_text = serialize_config(cfg);
  manifest.rng_algorithm = kRngAlgorithm;
  manifest.seeds = derive_seeds(cfg.master_seed);
  manifest.summary["walk_step_cap"] = kDefaultWalkStepCap;
  manifest.summary["uniform_floor"] = cfg.conductance.epsilon;

  std::error_code ec;
  fs::create_directories(cfg.output_dir, ec);
  if (ec || !fs::is_directory(cfg.output_dir)) {
    throw Error(ErrorCode::kIo, "cannot create output directory " + cfg.output_dir.string());
  }

  auto emit = [&](const std::string& file, const std::string& content) {
    io::write_file_atomic(cfg.output_dir / file, content);
    manifest.files.push_back({file, sha256_hex(content)});
  };
  auto write_manifest = [&] {
    io::write_file_atomic(cfg.output_dir / "manifest.json", manifest.to_json().dump(2) + "\n");
  };

  std::string stage;
  auto timed = [&](const std::string& name, const std::function<void()>& body) {
    stage = name;
    const auto start = std::chrono::steady_clock::now();
    body();
    const std::chrono::duration<double> took = std::chrono::steady_clock::now() - start;
    manifest.timings.push_back({name, took.count()});
  };

  try {
    Graph graph;
    std::optional<Network> net;
    std::optional<BoundaryCondition> bc;
    PotentialField field;
    timed("generate", [&] { graph = generate(cfg.gen_spec()); });
    timed("assign", [&] {
      net = assign(graph, cfg.scheme());
      emit("network.txt", io::format_network(*net));
    });
    timed("solve", [&] {
      bc = io::parse_boundary(cfg.boundary, net->vertex_count());
      field = solve(*net, *bc, cfg.solver);
      emit("field.csv", io::format_field_csv(field));
      manifest.summary["iterations"] = field.iterations;
      manifest.summary["residual"] = field.residual_norm;
      manifest.summary["current_balance"] = current_balance(*net, field, *bc);
    });
    timed("stats", [&] {
      const auto stats = concentration_stats(field, *net, *bc, cfg.bins);
      emit("stats.json", io::to_json(stats).dump(2) + "\n");
      manifest.summary["v_bar_c"] = stats.v_bar_c;
      manifest.summary["max_dev"] = stats.max_dev;
      manifest.summary["mean_dev"] = stats.mean_dev;
      manifest.summary["interior_count"] = stats.interior_count;
    });
    if (cfg.walk.enabled) {
      timed("walk", [&] {
        HittingOptions options;
        options.walks_per_vertex = cfg.walk.walks_per_vertex;
        options.seed = manifest.seeds.walk;
        options.threads = cfg.walk.threads;
        const auto est = hitting_probabilities(*net, *bc, options);
        emit("estimates.csv", io::format_estimates_csv(est, *bc));
        double worst = 0.0;
        for (Vertex v = 0; v < est.vertex_count; ++v) {
          if (est.estimated[v]) worst = std::max(worst, std::abs(est.potential[v] - field.values[v]));
        }
        manifest.summary["walk_max_abs_diff"] = worst;
      });
    }
    if (cfg.check.enabled) {
      timed("check", [&] {
        CheckOptions options;
        options.alpha = cfg.check.alpha > 0.0
                            ? cfg.check.alpha
                            : p_to_alpha(cfg.effective_p(), cfg.generator.n);
        options.delta = cfg.check.delta;
        options.expansion.excluded.assign(bc->vertices().begin(), bc->vertices().end());
        options.expansion.exhaustive_cap = cfg.check.exhaustive_cap;
        options.expansion.samples = cfg.check.samples;
        options.expansion.seed = manifest.seeds.check;
        const auto report = check_all(*net, options);
        const auto json = io::to_json(report);
        emit("report.json", json.dump(2) + "\n");
        for (const char* p : {"P1", "P2", "P3", "P4", "P5"}) {
          manifest.summary["verdicts"][p] = json[p]["verdict"];
        }
      });
    }
    if (cfg.mix.enabled) {
      timed("mix", [&] {
        MixingOptions options;
        options.k0 = cfg.mix.k0;
        options.samples = cfg.mix.samples;
        options.seed = manifest.seeds.mix;
        const auto report = mixing_diagnostics(*net, *bc, options);
        emit("mixing.json", io::to_json(report).dump(2) + "\n");
      });
    }
  } catch (const Error& e) {
    manifest.ok = false;
    manifest.failed_stage = stage;
    manifest.error = e.what();
    write_manifest();
    throw Error(e.code(), stage + ": " + e.what());
  } catch (const std::exception& e) {
    manifest.ok = false;
    manifest.failed_stage = stage;
    manifest.error = e.what();
    write_manifest();
    throw Error(ErrorCode::kInternal, stage + ": " + e.what());
  }
  manifest.ok = true;
  write_manifest();
  return manifest;
}

std::vector<std::string> sweep_axes() {
  return {"n",   "p",   "alpha",   "gamma",   "epsilon", "tol", "walks_per_vertex",
          "delta", "k0", "mix_samples", "check_samples", "exhaustive_cap", "bins"};
}

void set_axis(ExperimentConfig& cfg, std::string_view axis, double value) {
  auto as_count = [&](std::size_t& slot) {
    if (!(value >= 0.0) || value != std::floor(value)) {
      throw Error(ErrorCode::kConfig, "axis '" + std::string(axis) + "' needs whole numbers");
    }
    slot = static_cast<std::size_t>(value);
  };
  if (axis == "n") {
    as_count(cfg.generator.n);
  } else if (axis == "p") {
    cfg.generator.p = value;
    cfg.generator.alpha = 0.0;
  } else if (axis == "alpha") {
    cfg.generator.alpha = value;
  } else if (axis == "gamma") {
    cfg.conductance.gamma = value;
  } else if (axis == "epsilon") {
    cfg.conductance.epsilon = value;
  } else if (axis == "tol") {
    cfg.solver.tol = value;
  } else if (axis == "walks_per_vertex") {
    as_count(cfg.walk.walks_per_vertex);
  } else if (axis == "delta") {
    cfg.check.delta = value;
  } else if (axis == "k0") {
    cfg.mix.k0 = value;
  } else if (axis == "mix_samples") {
    as_count(cfg.mix.samples);
  } else if (axis == "check_samples") {
    as_count(cfg.check.samples);
  } else if (axis == "exhaustive_cap") {
    as_count(cfg.check.exhaustive_cap);
  } else if (axis == "bins") {
    as_count(cfg.bins);
  } else {
    throw Error(ErrorCode::kConfig, "unknown sweep axis '" + std::string(axis) + "'");
  }
}

SweepResult sweep(const ExperimentConfig& base, std::string_view axis,
                  const std::vector<double>& values, std::size_t workers) {
  std::vector<ExperimentConfig> configs;
  for (std::size_t i = 0; i < values.size(); ++i) {
    ExperimentConfig cfg = base;
    set_axis(cfg, axis, values[i]);
    cfg.master_seed = derive_seed(base.master_seed, i);
    cfg.name = base.name + "/" + std::string(axis) + "_" + std::to_string(i);
    cfg.output_dir = base.output_dir / (std::string(axis) + "_" + std::to_string(i));
    configs.push_back(std::move(cfg));
  }

  SweepResult result;
  result.runs.resize(configs.size());
  auto run_one = [&](std::size_t i) {
    try {
      result.runs[i] = run_experiment(configs[i]);
    } catch (const Error& e) {
      // run_experiment already wrote the failure manifest.
      result.runs[i].config_text = serialize_config(configs[i]);
      result.runs[i].ok = false;
      result.runs[i].error = e.what();
      result.runs[i].error_code = e.code();
    }
  };
  workers = std::max<std::size_t>(1, workers);
  if (workers == 1) {
    for (std::size_t i = 0; i < configs.size(); ++i) run_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < std::min(workers, configs.size()); ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < configs.size(); i = next++) run_one(i);
      });
    }
    for (auto& t : pool) t.join();
  }

  std::string csv = "value,v_bar_c,max_dev,mean_dev\n";
  for (std::size_t i = 0; i < values.size(); ++i) {
    csv += shortest(values[i]);
    const auto& s = result.runs[i].summary;
    for (const char* key : {"v_bar_c", "max_dev", "mean_dev"}) {
      csv += ",";
      if (result.runs[i].ok && s.contains(key)) csv += io::format_double(s[key].get<double>());
    }
    csv += "\n";
  }
  std::error_code ec;
  fs::create_directories(base.output_dir, ec);
  result.summary_csv = base.output_dir / ("sweep_" + std::string(axis) + ".csv");
  io::write_file_atomic(result.summary_csv, csv);
  return result;
}

}  // namespace volta
