#include "spdelab/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>
#include <thread>

#include "spdelab/conv.hpp"
#include "spdelab/experiments.hpp"
#include "spdelab/multiplier.hpp"
#include "spdelab/norms.hpp"
#include "spdelab/report_io.hpp"
#include "spdelab/solver.hpp"
#include "spdelab/version.hpp"

namespace spdelab {

namespace {

using nlohmann::json;

template <typename T>
T get_or(const json& j, const std::string& key, const T& fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(key, "config field '" + key + "' has the wrong type");
  }
}

FunctionSpec parse_function(const json& j, const std::string& key,
                            const std::string& fallback) {
  const std::string name = get_or<std::string>(j, key, fallback);
  try {
    return FunctionSpec::from_name(
        name, get_or<std::vector<double>>(j, key + "_coeffs", {}),
        get_or<double>(j, key + "_constant", 0.0));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(key, e.what());
  }
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

TorusGrid build_grid(const RunConfig& cfg) {
  try {
    return make_grid(cfg.dim, cfg.modes, cfg.points);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("modes", e.what());
  }
}

SolveConfig build_solve_config(const RunConfig& cfg, const TorusGrid& grid) {
  SolveConfig sc;
  sc.grid = grid;
  sc.dt = cfg.dt;
  sc.picard_tol = cfg.picard_tol;
  sc.picard_max_iters = cfg.picard_max_iters;
  sc.q = cfg.q;
  sc.p = cfg.p;
  sc.m = cfg.m;
  sc.factorization.alpha = cfg.alpha;
  sc.factorization.delta = cfg.problem.delta1;
  sc.factorization.rule = cfg.rule;
  return sc;
}

void validate_solve(const RunConfig& cfg, const SolveConfig& sc) {
  try {
    cfg.problem.validate();
    sc.validate(cfg.problem);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("problem", e.what());
  }
}

SpectralField additive_field(const RunConfig& cfg, const TorusGrid& grid) {
  if (cfg.additive_B == "white") return unit_coefficient_field(grid);
  if (cfg.additive_B == "constant") return constant_field(grid, 1.0);
  throw ConfigError("additive_B", "additive_B must be 'white' or 'constant'");
}

std::filesystem::path fresh_run_dir(const RunConfig& cfg) {
  std::filesystem::create_directories(cfg.output_dir);
  const std::string base = cfg.command + "-" + cfg.config_hash.substr(0, 8) +
                           "-s" + std::to_string(cfg.master_seed);
  std::filesystem::path dir = std::filesystem::path(cfg.output_dir) / base;
  for (int serial = 2; std::filesystem::exists(dir); ++serial)
    dir = std::filesystem::path(cfg.output_dir) /
          (base + "." + std::to_string(serial));
  std::filesystem::create_directory(dir);
  return dir;
}

void write_manifest(const std::filesystem::path& dir, const RunConfig& cfg,
                    const std::vector<Artifact>& artifacts) {
  json m;
  m["spdelab_version"] = kVersion;
  m["command"] = cfg.command;
  m["config"] = cfg.canonical;
  m["config_hash"] = cfg.config_hash;
  m["master_seed"] = cfg.master_seed;
  json arts = json::array();
  for (const auto& a : artifacts)
    arts.push_back({{"path", a.path}, {"bytes", a.bytes}, {"fnv64", a.fnv64}});
  m["artifacts"] = arts;
  std::ofstream os(dir / "manifest.json", std::ios::binary);
  os << m.dump(2) << "\n";
}

std::string plot_stub(const std::string& body) {
  return "set grid\nset key left top\n" + body + "\npause -1\n";
}

// ---- command implementations -----------------------------------------------

void cmd_simulate(const RunConfig& cfg, const std::filesystem::path& dir,
                  std::vector<Artifact>& artifacts) {
  const TorusGrid grid = build_grid(cfg);
  const SolveConfig sc = build_solve_config(cfg, grid);
  validate_solve(cfg, sc);
  const auto n = static_cast<std::size_t>(std::llround(cfg.problem.T / cfg.dt));
  const NoiseDriver driver{cfg.master_seed, std::max(1, cfg.problem.d())};
  const int threads = resolve_threads(cfg.threads);

  const std::size_t n_samples = std::max<std::size_t>(1, cfg.n_samples);
  std::vector<Trajectory> trajs(n_samples);
  parallel_for(n_samples, threads, [&](std::size_t i) {
    const auto incs = sample_increments(driver, i, n, cfg.dt, 0);
    trajs[i] = picard_solve(cfg.problem, sc, incs);
  });

  CsvBuilder csv({"t", "lp_mean", "lp_se", "w1p_mean", "w1p_se", "wmp_mean",
                  "wmp_se"},
                 cfg.master_seed, cfg.config_hash);
  std::vector<double> ts(n + 1), lp(n + 1), lpse(n + 1);
  std::vector<double> slot(n_samples);
  for (std::size_t j = 0; j <= n; ++j) {
    ts[j] = cfg.dt * static_cast<double>(j);
    auto stat = [&](auto member) {
      for (std::size_t i = 0; i < n_samples; ++i)
        slot[i] = (trajs[i].*member)[j];
      return mean_se(slot);
    };
    const MeanSe a = stat(&Trajectory::norms_lp);
    const MeanSe b = stat(&Trajectory::norms_w1p);
    const MeanSe c = stat(&Trajectory::norms_wmp);
    lp[j] = a.mean;
    lpse[j] = a.se;
    csv.row_numbers({ts[j], a.mean, a.se, b.mean, b.se, c.mean, c.se});
  }
  write_artifact(dir, "solution_norms.csv", csv.text(), artifacts);

  CsvBuilder picard({"segment", "t0", "t1", "iteration", "distance"},
                    cfg.master_seed, cfg.config_hash);
  const PicardLog& log = trajs[0].log;
  for (std::size_t s = 0; s < log.segments.size(); ++s)
    for (std::size_t it = 0; it < log.segments[s].distances.size(); ++it)
      picard.row_numbers({static_cast<double>(s), log.segments[s].t0,
                          log.segments[s].t1, static_cast<double>(it + 1),
                          log.segments[s].distances[it]});
  write_artifact(dir, "picard_log.csv", picard.text(), artifacts);

  write_artifact(dir, "final_field.csv",
                 field_to_csv(trajs[0].path.field_at(n)), artifacts);
  write_artifact(dir, "norms.dat",
                 plot_data("L^p norm of the solution vs time", ts, lp, lpse),
                 artifacts);
  write_artifact(
      dir, "plot.gp",
      plot_stub("plot 'norms.dat' using 1:2:3 with yerrorlines title 'L^p'"),
      artifacts);
}

void cmd_maxineq(const RunConfig& cfg, const std::filesystem::path& dir,
                 std::vector<Artifact>& artifacts) {
  const TorusGrid grid = build_grid(cfg);
  if (cfg.T_list.size() < 4)
    throw ConfigError("T_list", "maxineq needs at least 4 horizons");
  const double delta = cfg.problem.delta1;
  if (!(cfg.q > 2.0 / (1.0 - delta)))
    throw ConfigError(
        "q", "maximal inequality hypothesis requires q > 2/(1-delta) = " +
                 format_number(2.0 / (1.0 - delta)) + ", got q = " +
                 format_number(cfg.q));
  const NoiseDriver driver{cfg.master_seed, 1};
  MomentReport report;
  try {
    report = maxineq_scaling(grid, driver, delta, cfg.q, cfg.T_list,
                             cfg.n_samples, additive_field(cfg, grid), cfg.dt,
                             resolve_threads(cfg.threads));
  } catch (const std::invalid_argument& e) {
    throw ConfigError("T_list", e.what());
  }

  CsvBuilder csv({"T", "estimate", "se", "ratio", "ratio_se"}, cfg.master_seed,
                 cfg.config_hash);
  std::vector<double> ratio(report.T_grid.size());
  for (std::size_t t = 0; t < report.T_grid.size(); ++t) {
    const double scale = std::pow(report.T_grid[t], report.bound_exponent);
    ratio[t] = report.estimates[t] / scale;
    csv.row_numbers({report.T_grid[t], report.estimates[t], report.ses[t],
                     ratio[t], report.ses[t] / scale});
  }
  write_artifact(dir, "maxineq.csv", csv.text(), artifacts);

  CsvBuilder summary({"q", "delta", "bound_exponent", "envelope_C", "slope",
                      "slope_se", "monotone_2se", "n_samples"},
                     cfg.master_seed, cfg.config_hash);
  summary.row_numbers({report.q, report.delta, report.bound_exponent,
                       report.envelope_C, report.slope, report.slope_se,
                       report.envelope_monotone_2se ? 1.0 : 0.0,
                       static_cast<double>(report.n_samples)});
  write_artifact(dir, "maxineq_summary.csv", summary.text(), artifacts);
  write_artifact(dir, "scaling.dat",
                 plot_data("E sup ||I||^q vs T", report.T_grid,
                           report.estimates, report.ses),
                 artifacts);
  write_artifact(dir, "plot.gp",
                 plot_stub("set logscale xy\nplot 'scaling.dat' using 1:2:3 "
                           "with yerrorlines title 'moment', x**" +
                           format_number(report.bound_exponent) + " * " +
                           format_number(report.envelope_C) +
                           " title 'envelope'"),
                 artifacts);
}

void cmd_factor_check(const RunConfig& cfg, const std::filesystem::path& dir,
                      std::vector<Artifact>& artifacts) {
  const TorusGrid grid = build_grid(cfg);
  const double delta = cfg.problem.delta1;
  if (!(delta >= 0.0 && delta < 1.0))
    throw ConfigError("delta1", "factor-check needs delta1 in [0,1)");
  if (!(cfg.alpha > 0.0 && cfg.alpha < 0.5))
    throw ConfigError("alpha", "factor-check needs alpha in (0,1/2)");
  std::vector<double> dt_list = cfg.dt_list;
  if (dt_list.empty()) dt_list = {cfg.dt, 0.5 * cfg.dt};
  const SpectralField B = additive_field(cfg, grid);
  const NoiseDriver driver{cfg.master_seed, 1};
  const int threads = resolve_threads(cfg.threads);
  const double lambda = factorization_lambda(cfg.alpha, delta, cfg.p);

  FactorizationConfig fc{cfg.alpha, delta, cfg.rule};
  CsvBuilder csv({"dt", "mean_rel_distance", "se", "lambda", "rule"},
                 cfg.master_seed, cfg.config_hash);
  std::vector<double> means;
  for (double dt : dt_list) {
    const auto n = static_cast<std::size_t>(std::llround(cfg.problem.T / dt));
    const DiffusionPath B_path =
        constant_diffusion_path(std::span(&B, 1), n, dt);
    std::vector<double> dists(cfg.n_samples);
    parallel_for(cfg.n_samples, threads, [&](std::size_t i) {
      const auto incs = sample_increments(driver, i, n, dt, 0);
      const PathOfFields direct = direct_conv(B_path, incs, delta);
      const PathOfFields factored = factor_conv(B_path, incs, fc);
      dists[i] = relative_l2_distance(factored, direct);
    });
    const MeanSe ms = mean_se(dists);
    means.push_back(ms.mean);
    csv.row_numbers({dt, ms.mean, ms.se, lambda,
                     fc.rule == QuadratureRule::kernel_averaged ? 1.0 : 0.0});
  }
  write_artifact(dir, "factor_check.csv", csv.text(), artifacts);

  CsvBuilder summary({"alpha", "delta", "lambda", "coarse", "fine",
                      "improvement"},
                     cfg.master_seed, cfg.config_hash);
  summary.row_numbers({cfg.alpha, delta, lambda, means.front(), means.back(),
                       means.back() > 0.0 ? means.front() / means.back() : 0.0});
  write_artifact(dir, "factor_summary.csv", summary.text(), artifacts);
  write_artifact(dir, "factor.dat",
                 plot_data("relative distance vs dt", dt_list, means, {}),
                 artifacts);
  write_artifact(dir, "plot.gp",
                 plot_stub("set logscale xy\nplot 'factor.dat' using 1:2 with "
                           "linespoints title 'G(Y) vs direct'"),
                 artifacts);
}

void cmd_critical(const RunConfig& cfg, const std::filesystem::path& dir,
                  std::vector<Artifact>& artifacts) {
  const TorusGrid grid = build_grid(cfg);
  if (cfg.problem.F.kind != FunctionSpec::Kind::zero)
    throw ConfigError("F", "the critical sweep equation carries no drift; set F to 'zero'");
  if (cfg.delta_grid.empty())
    throw ConfigError("delta_grid", "critical needs a delta grid");
  SolveConfig sc = build_solve_config(cfg, grid);
  const NoiseDriver driver{cfg.master_seed, std::max(1, cfg.problem.d())};
  const int threads = resolve_threads(cfg.threads);

  double mu = 0.0;
  if (cfg.mu_override) {
    mu = *cfg.mu_override;
  } else {
    const GrowthConstants gc = growth_constants(
        cfg.problem, grid, 64, CounterRng::derive_key(cfg.master_seed, 0xc0de));
    mu = cfg.mu_fraction * mu_threshold(gc.w12);
  }

  CriticalReport report;
  try {
    report =
        critical_sweep(cfg.problem, cfg.delta_grid, mu, sc, driver,
                       cfg.n_samples, threads, cfg.alpha, cfg.gagliardo_stride);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("delta_grid", e.what());
  }

  CsvBuilder csv({"delta", "dissipation_integral", "dissipation_se",
                  "gagliardo_sq", "gagliardo_se", "coupled_distance_prev"},
                 cfg.master_seed, cfg.config_hash);
  for (std::size_t i = 0; i < report.delta_grid.size(); ++i)
    csv.row_numbers({report.delta_grid[i], report.dissipation_integral[i],
                     report.dissipation_se[i], report.gagliardo[i],
                     report.gagliardo_se[i],
                     i > 0 ? report.coupled_distance[i - 1] : 0.0});
  write_artifact(dir, "critical.csv", csv.text(), artifacts);

  CsvBuilder energy_csv({"delta", "t", "mean_sq"}, cfg.master_seed,
                        cfg.config_hash);
  for (std::size_t i = 0; i < report.delta_grid.size(); ++i)
    for (std::size_t j = 0; j < report.times.size(); ++j)
      energy_csv.row_numbers({report.delta_grid[i], report.times[j],
                              report.mean_sq_series[i][j]});
  write_artifact(dir, "critical_energy.csv", energy_csv.text(), artifacts);

  CsvBuilder summary(
      {"mu", "c_w12", "mu_threshold", "mu_below_threshold", "w12_band",
       "w12_trend_z", "w12_trend_increasing", "gagliardo_band",
       "gagliardo_trend_z", "gagliardo_trend_increasing"},
      cfg.master_seed, cfg.config_hash);
  summary.row_numbers(
      {report.mu, report.c_w12, report.mu_threshold_value,
       report.mu_below_threshold ? 1.0 : 0.0, report.w12_band,
       report.w12_trend.zscore,
       report.w12_trend.significant_increase ? 1.0 : 0.0,
       report.gagliardo_band, report.gagliardo_trend.zscore,
       report.gagliardo_trend.significant_increase ? 1.0 : 0.0});
  write_artifact(dir, "critical_summary.csv", summary.text(), artifacts);

  // Ito balance at a representative sweep point
  {
    ProblemSpec espec = cfg.problem;
    espec.delta1 = cfg.energy_delta;
    espec.mu = mu;
    EnergyBalanceReport eb =
        energy_balance(espec, sc, driver, cfg.n_samples, threads);
    CsvBuilder ecsv({"t", "mean_sq", "mean_sq_se", "dissipation", "qv",
                     "residual", "residual_se"},
                    cfg.master_seed, cfg.config_hash);
    for (std::size_t j = 0; j < eb.times.size(); ++j)
      ecsv.row_numbers({eb.times[j], eb.mean_sq[j], eb.mean_sq_se[j],
                        eb.dissipation[j], eb.qv[j], eb.residual[j],
                        eb.residual_se[j]});
    write_artifact(dir, "energy.csv", ecsv.text(), artifacts);
    write_artifact(dir, "energy.dat",
                   plot_data("E||u_t||^2 vs t", eb.times, eb.mean_sq,
                             eb.mean_sq_se),
                   artifacts);
  }

  write_artifact(dir, "sweep.dat",
                 plot_data("E int ||u||_W12^2 dt vs delta", report.delta_grid,
                           report.dissipation_integral, report.dissipation_se),
                 artifacts);
  write_artifact(
      dir, "plot.gp",
      plot_stub("plot 'sweep.dat' using 1:2:3 with yerrorlines title "
                "'dissipation integral'"),
      artifacts);
}

void cmd_regularity(const RunConfig& cfg, const std::filesystem::path& dir,
                    std::vector<Artifact>& artifacts) {
  std::vector<double> alphas = cfg.alpha_list;
  if (alphas.empty()) alphas = {0.2, -0.2};
  const double delta = cfg.problem.delta1 > 0.0 ? cfg.problem.delta1 : 1.0;
  const NoiseDriver driver{cfg.master_seed, 1};
  RegularityReport report;
  try {
    report = regularity_report(cfg.modes, driver, delta, alphas, cfg.p,
                               cfg.problem.T, cfg.dt, cfg.n_samples,
                               resolve_threads(cfg.threads));
  } catch (const std::invalid_argument& e) {
    throw ConfigError("alpha_list", e.what());
  }

  CsvBuilder csv({"alpha", "flagged", "norm_K", "se_K", "norm_2K", "se_2K",
                  "refinement_ratio"},
                 cfg.master_seed, cfg.config_hash);
  for (std::size_t i = 0; i < report.alphas.size(); ++i)
    csv.row_numbers({report.alphas[i], report.flagged[i] ? 1.0 : 0.0,
                     report.norm_coarse[i], report.se_coarse[i],
                     report.norm_fine[i], report.se_fine[i],
                     report.refinement_ratio[i]});
  write_artifact(dir, "regularity.csv", csv.text(), artifacts);
  write_artifact(dir, "regularity.dat",
                 plot_data("H^{-alpha,p} sup-norm vs alpha", report.alphas,
                           report.norm_coarse, report.se_coarse),
                 artifacts);
  write_artifact(dir, "plot.gp",
                 plot_stub("plot 'regularity.dat' using 1:2:3 with "
                           "yerrorlines title 'grid K'"),
                 artifacts);
}

void cmd_selftest(const RunConfig& cfg, const std::filesystem::path& dir,
                  std::vector<Artifact>& artifacts) {
  const auto entries = run_selftest();
  CsvBuilder csv({"check", "pass", "detail"}, cfg.master_seed, cfg.config_hash);
  bool all = true;
  std::string table;
  for (const auto& e : entries) {
    all = all && e.pass;
    csv.row({e.name, e.pass ? "1" : "0", e.detail});
    table += (e.pass ? "[ok]   " : "[FAIL] ") + e.name +
             (e.detail.empty() ? "" : "  (" + e.detail + ")") + "\n";
  }
  write_artifact(dir, "selftest.csv", csv.text(), artifacts);
  std::fputs(table.c_str(), stdout);
  if (!all) throw NumericalFailure("selftest: at least one check failed");
}

}  // namespace

RunConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("", "config must be a JSON object");
  RunConfig cfg;
  cfg.command = get_or<std::string>(j, "command", "");
  const bool known =
      cfg.command == "simulate" || cfg.command == "maxineq" ||
      cfg.command == "factor-check" || cfg.command == "critical" ||
      cfg.command == "regularity" || cfg.command == "selftest";
  if (!known)
    throw ConfigError("command",
                      "command must be one of simulate, maxineq, factor-check, "
                      "critical, regularity, selftest");

  cfg.dim = get_or<int>(j, "dim", 1);
  cfg.modes = get_or<int>(j, "modes", 32);
  cfg.points = get_or<int>(j, "points", 2 * cfg.modes);
  cfg.problem.delta0 = get_or<double>(j, "delta0", 0.0);
  cfg.problem.delta1 = get_or<double>(j, "delta1", 0.0);
  cfg.problem.mu = get_or<double>(j, "mu", 0.0);
  if (j.contains("mu")) cfg.mu_override = cfg.problem.mu;
  cfg.mu_fraction = get_or<double>(j, "mu_fraction", 0.5);
  cfg.problem.F = parse_function(j, "F", "zero");
  if (j.contains("B")) {
    if (!j.at("B").is_array())
      throw ConfigError("B", "B must be an array of catalog names");
    const auto names = j.at("B").get<std::vector<std::string>>();
    const auto coeffs =
        get_or<std::vector<std::vector<double>>>(j, "B_coeffs", {});
    const auto constants = get_or<std::vector<double>>(j, "B_constants", {});
    for (std::size_t i = 0; i < names.size(); ++i) {
      try {
        cfg.problem.B.push_back(FunctionSpec::from_name(
            names[i], i < coeffs.size() ? coeffs[i] : std::vector<double>{},
            i < constants.size() ? constants[i] : 0.0));
      } catch (const std::invalid_argument& e) {
        throw ConfigError("B", e.what());
      }
    }
  }
  if (get_or<bool>(j, "u0_random", false)) {
    cfg.problem.u0 = InitialCondition::random(
        get_or<double>(j, "u0_amplitude", 1.0), get_or<double>(j, "u0_decay", 2.0),
        get_or<std::uint64_t>(j, "u0_seed", 7));
  } else {
    cfg.problem.u0 = InitialCondition::function_of_x(
        parse_function(j, "u0", "zero"), get_or<double>(j, "u0_amplitude", 1.0));
  }
  cfg.problem.T = get_or<double>(j, "T", 1.0);
  cfg.dt = get_or<double>(j, "dt", 1e-3);
  cfg.q = get_or<double>(j, "q", 8.0);
  cfg.p = get_or<double>(j, "p", 2.0);
  cfg.m = get_or<int>(j, "m", 1);
  cfg.alpha = get_or<double>(j, "alpha", 0.35);
  const std::string rule = get_or<std::string>(j, "quadrature_rule",
                                               "kernel_averaged");
  if (rule == "kernel_averaged")
    cfg.rule = QuadratureRule::kernel_averaged;
  else if (rule == "left_point")
    cfg.rule = QuadratureRule::left_point;
  else
    throw ConfigError("quadrature_rule",
                      "quadrature_rule must be kernel_averaged or left_point");
  cfg.picard_tol = get_or<double>(j, "picard_tol", 1e-8);
  cfg.picard_max_iters = get_or<int>(j, "picard_max_iters", 25);
  cfg.n_samples = get_or<std::size_t>(j, "n_samples", 2);
  cfg.T_list = get_or<std::vector<double>>(j, "T_list", {});
  cfg.delta_grid = get_or<std::vector<double>>(j, "delta_grid", {});
  cfg.alpha_list = get_or<std::vector<double>>(j, "alpha_list", {});
  cfg.dt_list = get_or<std::vector<double>>(j, "dt_list", {});
  cfg.additive_B = get_or<std::string>(j, "additive_B", "white");
  cfg.energy_delta = get_or<double>(j, "energy_delta", 0.9);
  cfg.gagliardo_stride = get_or<std::size_t>(j, "gagliardo_stride", 4);
  cfg.master_seed = get_or<std::uint64_t>(j, "master_seed", 1);
  cfg.threads = get_or<int>(j, "threads", 0);
  cfg.output_dir = get_or<std::string>(j, "output_dir", "runs");

  cfg.canonical = j;
  cfg.config_hash = fnv1a64_hex(j.dump());
  return cfg;
}

RunConfig load_config(const std::filesystem::path& config_file,
                      const RunOverrides& overrides) {
  std::ifstream is(config_file);
  if (!is)
    throw ConfigError("config", "cannot open config file " + config_file.string());
  json j;
  try {
    is >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config", std::string("config does not parse: ") + e.what());
  }

  // environment overrides sit between the file and explicit flags
  if (const char* env = std::getenv("SPDELAB_SEED"); env && !overrides.seed)
    j["master_seed"] = std::stoull(env);
  if (const char* env = std::getenv("SPDELAB_THREADS"); env && !overrides.threads)
    j["threads"] = std::stoi(env);
  if (const char* env = std::getenv("SPDELAB_OUT"); env && !overrides.output_dir)
    j["output_dir"] = env;
  if (overrides.seed) j["master_seed"] = *overrides.seed;
  if (overrides.threads) j["threads"] = *overrides.threads;
  if (overrides.output_dir) j["output_dir"] = *overrides.output_dir;
  return parse_config(j);
}

RunResult run(const RunConfig& cfg) {
  const std::filesystem::path dir = fresh_run_dir(cfg);
  std::vector<Artifact> artifacts;
  if (cfg.command == "simulate")
    cmd_simulate(cfg, dir, artifacts);
  else if (cfg.command == "maxineq")
    cmd_maxineq(cfg, dir, artifacts);
  else if (cfg.command == "factor-check")
    cmd_factor_check(cfg, dir, artifacts);
  else if (cfg.command == "critical")
    cmd_critical(cfg, dir, artifacts);
  else if (cfg.command == "regularity")
    cmd_regularity(cfg, dir, artifacts);
  else if (cfg.command == "selftest")
    cmd_selftest(cfg, dir, artifacts);
  write_manifest(dir, cfg, artifacts);
  return {dir, dir / "manifest.json"};
}

std::string ReplayResult::summary() const {
  std::string out = identical ? "replay: identical\n" : "replay: DRIFT\n";
  for (const auto& f : files) {
    out += "  " + f.path + ": " + f.status;
    if (!f.detail.empty()) out += " (" + f.detail + ")";
    out += "\n";
  }
  return out;
}

ReplayResult replay(const std::filesystem::path& manifest_path) {
  std::ifstream is(manifest_path);
  if (!is)
    throw ConfigError("manifest",
                      "cannot open manifest " + manifest_path.string());
  json m;
  try {
    is >> m;
  } catch (const json::exception& e) {
    throw ConfigError("manifest", std::string("manifest does not parse: ") + e.what());
  }
  if (!m.contains("config") || !m.contains("artifacts"))
    throw ConfigError("manifest", "manifest lacks config or artifact list");

  RunConfig cfg = parse_config(m.at("config"));
  const std::filesystem::path original_dir = manifest_path.parent_path();
  cfg.output_dir = (original_dir / ".replay").string();
  const RunResult rerun = run(cfg);

  auto read_file = [](const std::filesystem::path& p,
                      std::string& out) -> bool {
    std::ifstream f(p, std::ios::binary);
    if (!f) return false;
    std::ostringstream ss;
    ss << f.rdbuf();
    out = ss.str();
    return true;
  };
  auto line_count = [](const std::string& s) {
    return std::count(s.begin(), s.end(), '\n');
  };

  ReplayResult result;
  result.identical = true;
  for (const auto& a : m.at("artifacts")) {
    ReplayFile rf;
    rf.path = a.at("path").get<std::string>();
    std::string oldb, newb;
    const bool has_old = read_file(original_dir / rf.path, oldb);
    const bool has_new = read_file(rerun.run_dir / rf.path, newb);
    if (!has_old || !has_new) {
      rf.status = "missing";
      rf.detail = !has_old ? "original artifact absent" : "rerun artifact absent";
      result.identical = false;
    } else if (oldb == newb) {
      rf.status = "identical";
    } else {
      rf.status = "differs";
      result.identical = false;
      if (line_count(oldb) != line_count(newb)) {
        rf.detail = "row count " + std::to_string(line_count(oldb)) + " -> " +
                    std::to_string(line_count(newb));
      } else {
        std::size_t at = 0;
        while (at < std::min(oldb.size(), newb.size()) && oldb[at] == newb[at])
          ++at;
        rf.detail = "first difference at byte " + std::to_string(at);
      }
    }
    result.files.push_back(std::move(rf));
  }
  return result;
}

}  // namespace spdelab
