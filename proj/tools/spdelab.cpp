#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "spdelab/runner.hpp"
#include "spdelab/version.hpp"

// Exit codes: 0 ok, 2 config error, 3 numerical failure.

namespace {

void print_config_error(const spdelab::ConfigError& e) {
  std::fprintf(stderr, "{\"error\":\"config\",\"field\":\"%s\",\"message\":\"%s\"}\n",
               e.field.c_str(), e.what());
}

void print_numerical_error(const std::exception& e) {
  std::fprintf(stderr, "{\"error\":\"numerical\",\"message\":\"%s\"}\n", e.what());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spdelab: spectral laboratory for semilinear stochastic heat "
               "equations with fractional-Laplacian noise"};
  app.set_version_flag("--version", spdelab::kVersion);
  app.require_subcommand(1);

  std::string config_path;
  std::string manifest_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  int threads = 0;
  bool seed_set = false, threads_set = false, out_set = false;

  CLI::App* run_cmd = app.add_subcommand("run", "execute a configured experiment");
  run_cmd->add_option("-c,--config", config_path, "config file (JSON)")
      ->required();
  run_cmd->add_option("--seed", seed, "override the master seed")
      ->each([&](const std::string&) { seed_set = true; });
  run_cmd->add_option("--threads", threads, "worker thread count")
      ->each([&](const std::string&) { threads_set = true; });
  run_cmd->add_option("--out", out_dir, "output directory")
      ->each([&](const std::string&) { out_set = true; });

  CLI::App* replay_cmd =
      app.add_subcommand("replay", "re-execute a manifest and compare bytes");
  replay_cmd->add_option("-m,--manifest", manifest_path, "manifest.json path")
      ->required();

  CLI::App* selftest_cmd =
      app.add_subcommand("selftest", "run the built-in example checks");
  selftest_cmd->add_option("--out", out_dir, "output directory")
      ->each([&](const std::string&) { out_set = true; });

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      spdelab::RunOverrides overrides;
      if (seed_set) overrides.seed = seed;
      if (threads_set) overrides.threads = threads;
      if (out_set) overrides.output_dir = out_dir;
      const spdelab::RunConfig cfg =
          spdelab::load_config(config_path, overrides);
      const spdelab::RunResult result = spdelab::run(cfg);
      std::printf("run complete: %s\n", result.run_dir.string().c_str());
      return 0;
    }
    if (replay_cmd->parsed()) {
      const spdelab::ReplayResult result = spdelab::replay(manifest_path);
      std::fputs(result.summary().c_str(), stdout);
      return result.identical ? 0 : 3;
    }
    if (selftest_cmd->parsed()) {
      nlohmann::json j;
      j["command"] = "selftest";
      if (out_set) j["output_dir"] = out_dir;
      const spdelab::RunResult result = spdelab::run(spdelab::parse_config(j));
      std::printf("selftest artifacts: %s\n", result.run_dir.string().c_str());
      return 0;
    }
  } catch (const spdelab::ConfigError& e) {
    print_config_error(e);
    return 2;
  } catch (const spdelab::NumericalFailure& e) {
    print_numerical_error(e);
    return 3;
  } catch (const std::invalid_argument& e) {
    print_config_error(spdelab::ConfigError("", e.what()));
    return 2;
  } catch (const std::exception& e) {
    print_numerical_error(e);
    return 3;
  }
  return 0;
}
