#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "spdelab/problem.hpp"

namespace spdelab {

/// Configuration or precondition failure; maps to CLI exit code 2. `field`
/// names the offending config key.
struct ConfigError : std::runtime_error {
  std::string field;
  ConfigError(std::string field_name, const std::string& message)
      : std::runtime_error(message), field(std::move(field_name)) {}
};

/// Flat, typed run configuration (parsed from the documented JSON schema).
struct RunConfig {
  std::string command;  // simulate | maxineq | factor-check | critical |
                        // regularity | selftest
  int dim = 1;
  int modes = 32;
  int points = 64;
  ProblemSpec problem;
  double dt = 1e-3;
  double q = 8.0;
  double p = 2.0;
  int m = 1;
  double alpha = 0.35;
  QuadratureRule rule = QuadratureRule::kernel_averaged;
  double picard_tol = 1e-8;
  int picard_max_iters = 25;
  std::size_t n_samples = 2;
  std::vector<double> T_list;
  std::vector<double> delta_grid;
  std::vector<double> alpha_list;
  std::vector<double> dt_list;           // factor-check refinement levels
  std::string additive_B = "white";      // white | constant
  std::optional<double> mu_override;     // explicit mu beats mu_fraction
  double mu_fraction = 0.5;              // of the measured threshold
  double energy_delta = 0.9;
  std::size_t gagliardo_stride = 4;
  std::uint64_t master_seed = 1;
  int threads = 0;  // 0 = hardware concurrency
  std::string output_dir = "runs";

  nlohmann::json canonical;  // the config as parsed, for hashing and replay
  std::string config_hash;
};

/// CLI/environment overrides (flags beat environment beats config file).
struct RunOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<std::string> output_dir;
};

RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& config_file,
                      const RunOverrides& overrides);

struct RunResult {
  std::filesystem::path run_dir;
  std::filesystem::path manifest;
};

/// Executes the configured command, writing CSV reports, gnuplot data files
/// and a JSON manifest into a fresh run directory. Throws ConfigError (bad
/// config, exit 2) or NumericalFailure (non-contraction/blow-up, exit 3).
RunResult run(const RunConfig& config);

struct ReplayFile {
  std::string path;
  std::string status;  // identical | differs | missing
  std::string detail;
};

struct ReplayResult {
  bool identical = false;
  std::vector<ReplayFile> files;
  std::string summary() const;
};

/// Re-executes the manifest's embedded config into a scratch directory and
/// compares every artifact byte for byte against the original run.
ReplayResult replay(const std::filesystem::path& manifest_path);

struct SelftestEntry {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// The quick per-module example suite behind the selftest command.
std::vector<SelftestEntry> run_selftest();

}  // namespace spdelab
