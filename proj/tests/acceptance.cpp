// Acceptance suite: one numbered criterion per check, each printed as a
// single pass/fail line with its measured quantities. Exit status is the
// number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "spdelab/conv.hpp"
#include "spdelab/experiments.hpp"
#include "spdelab/multiplier.hpp"
#include "spdelab/norms.hpp"
#include "spdelab/runner.hpp"
#include "spdelab/solver.hpp"
#include "spdelab/stats.hpp"

using namespace spdelab;

namespace {

constexpr double kPi = std::numbers::pi;

int threads() {
  if (const char* env = std::getenv("SPDELAB_THREADS")) return std::stoi(env);
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

struct Harness {
  int failures = 0;
  void run(int number, const std::string& name,
           const std::function<bool(std::string&)>& fn) {
    std::string detail;
    const auto start = std::chrono::steady_clock::now();
    bool pass = false;
    try {
      pass = fn(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    std::printf("[%s] criterion %2d: %s (%s) [%.1fs]\n",
                pass ? "PASS" : "FAIL", number, name.c_str(), detail.c_str(),
                secs);
    std::fflush(stdout);
    if (!pass) ++failures;
  }
};

double sup_abs_gap(std::span<const std::complex<double>> a,
                   std::span<const std::complex<double>> b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

// --- criterion 1 -------------------------------------------------------------
bool spectral_exactness(std::string& detail) {
  const TorusGrid g = make_grid(1, 64, 64);
  CounterRng rng(404);
  std::vector<double> v(g.n_points());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = rng.normal(i, 0);

  const SpectralField f = transform(g, v);
  const auto back = inverse_transform(f);
  double roundtrip = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    roundtrip = std::max(roundtrip, std::abs(back[i] - v[i]));
    scale = std::max(scale, std::abs(v[i]));
  }
  roundtrip /= scale;

  const double plancherel = plancherel_defect(f);

  const SpectralField a =
      apply(semigroup_symbol(g, 0.4), apply(semigroup_symbol(g, 0.35), f));
  const SpectralField b = apply(semigroup_symbol(g, 0.75), f);
  double comp = 0.0;
  for (std::size_t i = 0; i < a.coeffs.size(); ++i)
    comp = std::max(comp, std::abs(a.coeffs[i] - b.coeffs[i]) /
                              std::max(1e-300, std::abs(b.coeffs[i])));

  std::ostringstream os;
  os << "roundtrip=" << roundtrip << " plancherel=" << plancherel
     << " composition=" << comp << " tol=1e-12";
  detail = os.str();
  return roundtrip < 1e-12 && plancherel < 1e-12 && comp < 1e-12;
}

// --- criterion 2 -------------------------------------------------------------
bool analyticity_envelope(std::string& detail) {
  const TorusGrid g = make_grid(1, 64, 64);
  int violations = 0;
  double worst_margin = INFINITY;
  for (double delta : {0.1, 0.5, 0.9}) {
    for (int i = 0; i < 20; ++i) {
      const double t = std::pow(10.0, -4.0 + 4.0 * i / 19.0);
      double sup = 0.0;
      for (std::size_t m = 0; m < g.n_modes(); ++m) {
        const double lam = g.lambda(m);
        sup = std::max(sup, std::exp(delta * std::log(lam) - t * lam));
      }
      const double envelope =
          t <= delta ? std::pow(delta / t, delta) * std::exp(-delta)
                     : std::exp(-t);
      if (!(sup <= envelope)) ++violations;
      worst_margin = std::min(worst_margin, envelope - sup);
    }
  }
  std::ostringstream os;
  os << "violations=" << violations << "/60 (exact inequality), min margin="
     << worst_margin;
  detail = os.str();
  return violations == 0;
}

// --- criterion 3 -------------------------------------------------------------
bool beta_identity_check(std::string& detail) {
  double worst = 0.0;
  for (double alpha : {0.1, 0.2, 1.0 / 3.0, 0.45}) {
    const double got = beta_identity(alpha, 0.0, 1.0, 512);
    worst = std::max(worst, std::abs(got - kPi / std::sin(kPi * alpha)));
  }
  std::ostringstream os;
  os << "max abs error=" << worst << " tol=1e-6";
  detail = os.str();
  return worst < 1e-6;
}

// --- criterion 4 -------------------------------------------------------------
bool ou_oracle(std::string& detail) {
  const TorusGrid g = make_grid(1, 16, 16);
  const double dt = 1e-3, T = 1.0;
  const auto n = static_cast<std::size_t>(std::llround(T / dt));
  const SpectralField B = unit_coefficient_field(g);
  const DiffusionPath B_path = constant_diffusion_path(std::span(&B, 1), n, dt);
  const NoiseDriver driver{60301, 1};
  const std::size_t n_samples = 10000;

  std::ostringstream os;
  bool ok = true;
  for (double delta : {0.0, 0.5}) {
    // endpoint mode values over the Monte Carlo population
    std::vector<double> m0(n_samples), m1(n_samples);
    std::vector<std::size_t> idx = {g.index_of({0, 0}), g.index_of({1, 0})};
    parallel_for(n_samples, threads(), [&](std::size_t i) {
      const auto incs = sample_increments(driver, i, n, dt);
      const PathOfFields path = direct_conv(B_path, incs, delta);
      m0[i] = path.at(n)[idx[0]].real();
      m1[i] = path.at(n)[idx[1]].real();
    });
    for (int k : {0, 1}) {
      const auto& vals = k == 0 ? m0 : m1;
      std::vector<double> sq(n_samples);
      const MeanSe mean = mean_se(vals);
      for (std::size_t i = 0; i < n_samples; ++i) {
        const double d = vals[i] - mean.mean;
        sq[i] = d * d;
      }
      const double var =
          tree_sum(sq) / static_cast<double>(n_samples - 1);
      const double lam = 1.0 + k * k;
      // Ito isometry integral by midpoint quadrature
      double oracle = 0.0;
      const int nq = 20000;
      for (int i = 0; i < nq; ++i) {
        const double s = (i + 0.5) * T / nq;
        oracle += std::pow(lam, delta) * std::exp(-2.0 * (T - s) * lam) * T / nq;
      }
      const double se = oracle * std::sqrt(2.0 / (n_samples - 1.0));
      const double gap = std::abs(var - oracle);
      os << "(d=" << delta << ",k=" << k << "): |var-oracle|/se="
         << gap / se << " ";
      ok = ok && gap < 3.0 * se;
    }
  }
  detail = os.str() + "tol=3se";
  return ok;
}

// --- criterion 5 -------------------------------------------------------------
bool factorization_equivalence(std::string& detail) {
  const TorusGrid g = make_grid(1, 32, 32);
  const double T = 0.25;
  const SpectralField B = constant_field(g, 1.0);
  const NoiseDriver driver{515253, 1};
  const FactorizationConfig cfg{0.35, 0.5, QuadratureRule::kernel_averaged};
  const std::size_t n_paths = 16;

  auto mean_distance = [&](double dt) {
    const auto n = static_cast<std::size_t>(std::llround(T / dt));
    const DiffusionPath B_path =
        constant_diffusion_path(std::span(&B, 1), n, dt);
    std::vector<double> d(n_paths);
    parallel_for(n_paths, threads(), [&](std::size_t i) {
      const auto incs = sample_increments(driver, i, n, dt);
      d[i] = relative_l2_distance(factor_conv(B_path, incs, cfg),
                                  direct_conv(B_path, incs, 0.5));
    });
    return mean_se(d).mean;
  };

  const double coarse = mean_distance(1e-3);
  const double fine = mean_distance(5e-4);
  std::ostringstream os;
  os << "dist(1e-3)=" << coarse << " (tol 0.05), dist(5e-4)=" << fine
     << ", improvement=" << coarse / fine << " (tol >= 1.3)";
  detail = os.str();
  return coarse <= 0.05 && coarse / fine >= 1.3;
}

// --- criterion 6 -------------------------------------------------------------
bool maxineq_envelope(std::string& detail) {
  const TorusGrid g = make_grid(1, 32, 32);
  const NoiseDriver driver{606162, 1};
  const std::vector<double> Ts = {1.0 / 64, 1.0 / 32, 1.0 / 16, 1.0 / 8,
                                  1.0 / 4, 1.0 / 2};
  const double dt = Ts.front() / 128.0;
  const MomentReport report =
      maxineq_scaling(g, driver, 0.5, 8.0, Ts, 2000,
                      unit_coefficient_field(g), dt, threads());

  bool gate = false;
  try {
    maxineq_scaling(g, driver, 0.5, 4.0, Ts, 8, unit_coefficient_field(g), dt,
                    1);
  } catch (const std::invalid_argument&) {
    gate = true;
  }

  std::ostringstream os;
  os << "envelope_C=" << report.envelope_C
     << " monotone_2se=" << (report.envelope_monotone_2se ? "yes" : "no")
     << " slope=" << report.slope << " gate(q=4)="
     << (gate ? "rejected" : "accepted");
  detail = os.str();
  return report.envelope_monotone_2se && gate;
}

// --- criterion 7 -------------------------------------------------------------
bool picard_contraction(std::string& detail) {
  const ProblemSpec spec = smooth_benchmark_spec();
  SolveConfig cfg;
  cfg.grid = make_grid(1, 32, 64);
  cfg.dt = 1e-3;
  cfg.q = 8.0;
  cfg.p = 2.0;
  cfg.m = 2;
  cfg.picard_tol = 1e-8;
  const auto n = static_cast<std::size_t>(std::llround(spec.T / cfg.dt));
  const auto incs = sample_increments(NoiseDriver{70707, 1}, 0, n, cfg.dt);

  const Trajectory traj = picard_solve(spec, cfg, incs);
  const bool one_segment = traj.log.segments.size() == 1 && !traj.log.split;
  const auto& d = traj.log.segments.front().distances;
  double worst_ratio = 0.0;
  for (std::size_t i = 2; i + 1 < d.size(); ++i)
    if (d[i] > 0.0) worst_ratio = std::max(worst_ratio, d[i + 1] / d[i]);
  const int iters = traj.log.total_iterations;

  const Trajectory euler = euler_solve(spec, cfg, incs);
  const double cross = relative_l2_distance(euler.path, traj.path);

  std::ostringstream os;
  os << "iters=" << iters << " (<=12), worst ratio after it2=" << worst_ratio
     << " (<=0.8), euler/picard distance=" << cross << " (<=0.05)";
  detail = os.str();
  return one_segment && iters <= 12 && worst_ratio <= 0.8 && cross <= 0.05;
}

// --- criterion 8 -------------------------------------------------------------
bool sobolev_regularity(std::string& detail) {
  const ProblemSpec spec = smooth_benchmark_spec();
  auto solve_w22 = [&](int K) {
    SolveConfig cfg;
    cfg.grid = make_grid(1, K, 2 * K);
    cfg.dt = 1e-3;
    cfg.q = 8.0;
    cfg.m = 2;
    const auto n = static_cast<std::size_t>(std::llround(spec.T / cfg.dt));
    const auto incs = sample_increments(NoiseDriver{80808, 1}, 0, n, cfg.dt);
    const Trajectory traj = picard_solve(spec, cfg, incs);
    const SobolevSeries s = sobolev_track(traj.path, 2, 2.0);
    return std::pair<double, double>(s.sup_wmp, s.wmp.back());
  };
  const auto [coarse_sup, coarse_end] = solve_w22(32);
  const auto [fine_sup, fine_end] = solve_w22(64);
  const double rel_sup =
      std::abs(fine_sup - coarse_sup) / std::max(coarse_sup, fine_sup);
  const double rel_end =
      std::abs(fine_end - coarse_end) / std::max(coarse_end, fine_end);
  std::ostringstream os;
  os << "sup W^{2,2}: K=32 -> " << coarse_sup << ", K=64 -> " << fine_sup
     << " (gap " << rel_sup << "); endpoint norm gap=" << rel_end
     << " (both <=0.10, finite)";
  detail = os.str();
  return std::isfinite(coarse_sup) && std::isfinite(fine_sup) &&
         rel_sup <= 0.10 && rel_end <= 0.10;
}

// --- criterion 9 -------------------------------------------------------------
bool energy_balance_criterion(std::string& detail) {
  ProblemSpec spec;
  spec.delta1 = 0.9;
  spec.B = {FunctionSpec::cosine()};
  spec.u0 = InitialCondition::function_of_x(FunctionSpec::sine(), 0.5);
  spec.T = 0.5;

  const TorusGrid g = make_grid(1, 32, 64);
  const GrowthConstants gc = growth_constants(spec, g, 64, 909);
  spec.mu = 0.5 * mu_threshold(gc.w12);

  const NoiseDriver driver{909090, 1};
  std::vector<double> dts = {4e-3, 2e-3, 1e-3};
  std::vector<double> finals;
  bool bound_ok = true;
  double worst_slack = INFINITY;
  for (double dt : dts) {
    SolveConfig cfg;
    cfg.grid = g;
    cfg.dt = dt;
    cfg.q = 2.0 / (1.0 - spec.delta1) + 1.0;
    const EnergyBalanceReport r = energy_balance(spec, cfg, driver, 2000,
                                                 threads());
    finals.push_back(std::abs(r.residual.back()));
    if (dt == dts.back()) {
      for (std::size_t j = 1; j < r.times.size(); ++j) {
        const double bound = r.mean_sq[0] +
                             gc.w12 * spec.mu * spec.mu * r.times[j] +
                             3.0 * r.mean_sq_se[j];
        worst_slack = std::min(worst_slack, bound - r.mean_sq[j]);
        if (r.mean_sq[j] > bound) bound_ok = false;
      }
    }
  }
  const double rate =
      std::log(finals.front() / finals.back()) / std::log(dts.front() / dts.back());
  std::ostringstream os;
  os << "residuals={" << finals[0] << "," << finals[1] << "," << finals[2]
     << "} rate=" << rate << " (>=0.8), energy bound slack=" << worst_slack
     << " (>=0 within 3se)";
  detail = os.str();
  return rate >= 0.8 && bound_ok;
}

// --- criterion 10 ------------------------------------------------------------
bool critical_uniformity(std::string& detail) {
  ProblemSpec spec;
  spec.B = {FunctionSpec::cosine()};
  spec.u0 = InitialCondition::function_of_x(FunctionSpec::sine(), 0.25);
  spec.T = 0.5;

  SolveConfig cfg;
  cfg.grid = make_grid(1, 32, 64);
  cfg.dt = 1e-3;
  cfg.q = 300.0;
  const NoiseDriver driver{101010, 1};

  const GrowthConstants gc = growth_constants(spec, cfg.grid, 64, 1001);
  const double mu = 0.5 * mu_threshold(gc.w12);

  const CriticalReport r =
      critical_sweep(spec, {0.5, 0.7, 0.9, 0.95, 0.99}, mu, cfg, driver, 1000,
                     threads(), 0.35, 4);

  std::ostringstream os;
  os << "w12 band=" << r.w12_band << " trend z=" << r.w12_trend.zscore
     << "; gagliardo band=" << r.gagliardo_band
     << " trend z=" << r.gagliardo_trend.zscore
     << " (bands<=2, z<=2.576), mu=" << mu << " below threshold="
     << (r.mu_below_threshold ? "yes" : "no");
  detail = os.str();
  return r.mu_below_threshold && r.w12_band <= 2.0 &&
         !r.w12_trend.significant_increase && r.gagliardo_band <= 2.0 &&
         !r.gagliardo_trend.significant_increase;
}

// --- criterion 11 ------------------------------------------------------------
bool frac_sobolev_oracle(std::string& detail) {
  const TorusGrid g = make_grid(1, 4, 4);
  const double T = 1.0;
  const std::size_t n = 4000;
  SpectralField v(g);
  v.set_mode({1, 0}, 0.5);
  v.set_mode({-1, 0}, 0.5);
  PathOfFields path(g, T / static_cast<double>(n), n + 1);
  for (std::size_t j = 0; j <= n; ++j)
    path.set(j, (static_cast<double>(j) / static_cast<double>(n)) * v);
  const double vsq = std::pow(norm_bessel(v, -1.0, 2.0), 2);

  double worst = 0.0;
  for (double alpha : {0.1, 0.25, 0.4}) {
    const double exact = vsq * 2.0 * std::pow(T, 3.0 - 2.0 * alpha) /
                         ((2.0 - 2.0 * alpha) * (3.0 - 2.0 * alpha));
    const double got = frac_time_sobolev(path, alpha).sq_semi;
    worst = std::max(worst, std::abs(got - exact) / exact);
  }
  std::ostringstream os;
  os << "max relative error=" << worst << " (tol 1e-3)";
  detail = os.str();
  return worst < 1e-3;
}

// --- criterion 12 ------------------------------------------------------------
bool reproducibility(std::string& detail) {
  namespace fs = std::filesystem;
  const fs::path tmp =
      fs::temp_directory_path() / "spdelab-acceptance-replay";
  fs::remove_all(tmp);
  nlohmann::json j;
  j["command"] = "simulate";
  j["modes"] = 16;
  j["points"] = 32;
  j["delta0"] = 0.3;
  j["delta1"] = 0.3;
  j["mu"] = 0.5;
  j["F"] = "sin";
  j["B"] = {"cos"};
  j["u0"] = "sin";
  j["T"] = 0.1;
  j["dt"] = 2e-3;
  j["q"] = 8.0;
  j["n_samples"] = 3;
  j["master_seed"] = 7;
  j["threads"] = 2;
  j["output_dir"] = tmp.string();

  const RunResult res = run(parse_config(j));
  const ReplayResult rep = replay(res.manifest);
  std::size_t identical = 0;
  for (const auto& f : rep.files)
    if (f.status == "identical") ++identical;
  std::ostringstream os;
  os << identical << "/" << rep.files.size() << " artifacts byte-identical";
  detail = os.str();
  fs::remove_all(tmp);
  return rep.identical && !rep.files.empty();
}

}  // namespace

int main() {
  Harness h;
  h.run(1, "spectral exactness", spectral_exactness);
  h.run(2, "analyticity envelope", analyticity_envelope);
  h.run(3, "beta identity quadrature", beta_identity_check);
  h.run(4, "Ornstein-Uhlenbeck variance oracle", ou_oracle);
  h.run(5, "factorization equivalence", factorization_equivalence);
  h.run(6, "maximal-inequality scaling envelope", maxineq_envelope);
  h.run(7, "Picard contraction and cross-scheme agreement", picard_contraction);
  h.run(8, "Sobolev regularity under refinement", sobolev_regularity);
  h.run(9, "Ito energy balance", energy_balance_criterion);
  h.run(10, "critical sweep uniformity", critical_uniformity);
  h.run(11, "fractional time-Sobolev oracle", frac_sobolev_oracle);
  h.run(12, "manifest replay reproducibility", reproducibility);
  if (h.failures == 0) std::printf("acceptance: all criteria passed\n");
  else std::printf("acceptance: %d criterion(s) failed\n", h.failures);
  return h.failures;
}
