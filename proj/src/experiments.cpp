#include "spdelab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "spdelab/conv.hpp"
#include "spdelab/multiplier.hpp"
#include "spdelab/norms.hpp"

namespace spdelab {

namespace {
constexpr double kZ99 = 2.5758293035489004;  // two-sided 99% normal quantile

double volume(const TorusGrid& grid) {
  return std::pow(2.0 * std::numbers::pi, grid.dim());
}

double sq_l2_of_row(std::span<const std::complex<double>> row, double vol) {
  double sum = 0.0;
  for (const auto& c : row) sum += std::norm(c);
  return vol * sum;
}
}  // namespace

MeanSe mc_sup_moment(
    const std::function<std::vector<double>(std::size_t)>& norm_path_factory,
    double q, std::size_t n_samples, int threads) {
  if (n_samples < 2)
    throw std::invalid_argument("mc_sup_moment: need at least 2 samples");
  if (!(q >= 1.0)) throw std::invalid_argument("mc_sup_moment: q must be >= 1");
  std::vector<double> powered(n_samples);
  parallel_for(n_samples, threads, [&](std::size_t i) {
    const auto norms = norm_path_factory(i);
    const double sup = *std::max_element(norms.begin(), norms.end());
    powered[i] = std::pow(sup, q);
  });
  return mean_se(powered);
}

MomentReport maxineq_scaling(const TorusGrid& grid, const NoiseDriver& driver,
                             double delta, double q,
                             const std::vector<double>& T_list,
                             std::size_t n_samples,
                             const SpectralField& additive_B, double dt,
                             int threads) {
  if (!(delta >= 0.0 && delta < 1.0))
    throw std::invalid_argument("maxineq_scaling: delta must be in [0,1)");
  if (!(q > 2.0 / (1.0 - delta)))
    throw std::invalid_argument(
        "maxineq_scaling: hypothesis q > 2/(1-delta) violated (q=" +
        std::to_string(q) + ", threshold=" + std::to_string(2.0 / (1.0 - delta)) +
        ")");
  if (T_list.size() < 4)
    throw std::invalid_argument("maxineq_scaling: need at least 4 horizons");
  if (!std::is_sorted(T_list.begin(), T_list.end()))
    throw std::invalid_argument("maxineq_scaling: T_list must increase");
  if (n_samples < 2)
    throw std::invalid_argument("maxineq_scaling: need at least 2 samples");

  const double T_max = T_list.back();
  const auto n_max = static_cast<std::size_t>(std::llround(T_max / dt));
  std::vector<std::size_t> checkpoints(T_list.size());
  for (std::size_t t = 0; t < T_list.size(); ++t) {
    checkpoints[t] = static_cast<std::size_t>(std::llround(T_list[t] / dt));
    if (checkpoints[t] < 1 ||
        std::abs(static_cast<double>(checkpoints[t]) * dt - T_list[t]) >
            1e-9 * T_list[t])
      throw std::invalid_argument(
          "maxineq_scaling: every T must be a multiple of dt");
  }

  const DiffusionPath B_path =
      constant_diffusion_path(std::span(&additive_B, 1), n_max, dt);
  const double vol = volume(grid);

  // One path per sample covers the whole horizon list: the estimate at T is
  // the running supremum up to T, so the per-T estimates share noise.
  std::vector<std::vector<double>> powered(T_list.size(),
                                           std::vector<double>(n_samples));
  parallel_for(n_samples, threads, [&](std::size_t i) {
    const auto incs = sample_increments(driver, i, n_max, dt);
    const PathOfFields path = direct_conv(B_path, incs, delta);
    double running = 0.0;
    std::size_t next_cp = 0;
    for (std::size_t j = 1; j <= n_max && next_cp < checkpoints.size(); ++j) {
      running = std::max(running, sq_l2_of_row(path.at(j), vol));
      if (j == checkpoints[next_cp]) {
        powered[next_cp][i] = std::pow(running, 0.5 * q);
        ++next_cp;
      }
    }
  });

  MomentReport report;
  report.label = "E[sup_{t<=T} ||I_t||_{L2}^q], exponent q on both sides";
  report.q = q;
  report.delta = delta;
  report.n_samples = n_samples;
  report.seed = driver.master_seed;
  report.T_grid = T_list;
  report.bound_exponent = 0.5 * q * (1.0 - delta);
  report.estimates.resize(T_list.size());
  report.ses.resize(T_list.size());
  for (std::size_t t = 0; t < T_list.size(); ++t) {
    const MeanSe ms = mean_se(powered[t]);
    report.estimates[t] = ms.mean;
    report.ses[t] = ms.se;
  }

  std::vector<double> ratio(T_list.size()), ratio_se(T_list.size());
  for (std::size_t t = 0; t < T_list.size(); ++t) {
    const double scale = std::pow(T_list[t], report.bound_exponent);
    ratio[t] = report.estimates[t] / scale;
    ratio_se[t] = report.ses[t] / scale;
  }
  report.envelope_C = *std::max_element(ratio.begin(), ratio.end());
  report.envelope_monotone_2se = true;
  for (std::size_t t = 0; t + 1 < ratio.size(); ++t)
    if (ratio[t + 1] > ratio[t] + 2.0 * (ratio_se[t] + ratio_se[t + 1]))
      report.envelope_monotone_2se = false;

  std::vector<double> lx(T_list.size()), ly(T_list.size()), lse(T_list.size());
  for (std::size_t t = 0; t < T_list.size(); ++t) {
    lx[t] = std::log(T_list[t]);
    ly[t] = std::log(report.estimates[t]);
    lse[t] = report.ses[t] / report.estimates[t];
  }
  const LineFit fit = weighted_line_fit(lx, ly, lse);
  report.slope = fit.slope;
  report.slope_se = fit.slope_se;
  return report;
}

double assembled_constant(double alpha, double p, double delta) {
  if (!(alpha > 0.0 && alpha < 0.5))
    throw std::invalid_argument("assembled_constant: alpha must be in (0,1/2)");
  if (!(p > 1.0)) throw std::invalid_argument("assembled_constant: p must be > 1");
  const double lambda = factorization_lambda(alpha, delta, p);
  if (lambda >= 1.0)
    throw std::invalid_argument(
        "assembled_constant: lambda = " + std::to_string(lambda) +
        " >= 1; the factorization bound requires lambda < 1");
  const double one_minus_2a = 1.0 - 2.0 * alpha;
  return std::pow(1.0 / one_minus_2a, 0.5 * p) /
         (0.5 * p * one_minus_2a + 1.0) *
         std::pow(1.0 / (1.0 - lambda), (p - 1.0) / p);
}

AlphaOptimum minimize_assembled_constant(double p, double delta,
                                         int grid_points) {
  if (grid_points < 3)
    throw std::invalid_argument("minimize_assembled_constant: grid too small");
  // lambda < 1 needs alpha > 1 + delta/2 - (p-1)/p
  const double lo = std::max(0.0, 1.0 + 0.5 * delta - (p - 1.0) / p);
  const double hi = 0.5;
  if (lo >= hi)
    throw std::invalid_argument(
        "minimize_assembled_constant: empty feasible alpha window (p too small "
        "for this delta)");
  AlphaOptimum best;
  best.value = INFINITY;
  for (int i = 1; i < grid_points; ++i) {
    const double a =
        lo + (hi - lo) * static_cast<double>(i) / grid_points;
    const double v = assembled_constant(a, p, delta);
    if (v < best.value) {
      best.value = v;
      best.alpha = a;
    }
  }
  return best;
}

namespace {

struct EnergySample {
  std::vector<double> msq;       // ||u_{t_j}||^2
  std::vector<double> diss;      // cumulative dissipation
  std::vector<double> qv;        // cumulative quadratic-variation input
  std::vector<double> residual;  // balance defect, control variates removed
};

// Single-path energy ledger along the drift-free mild recursion
// u_{j+1} = S u_j + mu (-A)^{d1/2} S (sum_i B_i(u_j) dW^i_j).
EnergySample energy_sample(const ProblemSpec& spec, const SolveConfig& cfg,
                           const BrownianIncrements& incs) {
  const TorusGrid& grid = cfg.grid;
  const std::size_t nm = grid.n_modes();
  const std::size_t n = incs.n_steps;
  const double dt = incs.dt;
  const double vol = volume(grid);
  const double mu = spec.mu;
  const int d = spec.d();

  std::vector<double> step(nm), frac(nm), fracstep(nm), lam1(nm);
  for (std::size_t m = 0; m < nm; ++m) {
    const double lam = grid.lambda(m);
    step[m] = std::exp(-lam * dt);
    frac[m] = std::exp(0.5 * spec.delta1 * std::log(lam));
    fracstep[m] = frac[m] * step[m];
    lam1[m] = lam;
  }

  EnergySample out;
  out.msq.resize(n + 1);
  out.diss.assign(n + 1, 0.0);
  out.qv.assign(n + 1, 0.0);
  out.residual.assign(n + 1, 0.0);

  SpectralField u = spec.u0.realize(grid);
  out.msq[0] = sq_l2_of_row(u.coeffs, vol);
  double diss = 0.0, qv = 0.0, mart = 0.0, qv_fluct = 0.0;
  std::vector<std::complex<double>> noise_step(nm);

  for (std::size_t j = 0; j < n; ++j) {
    double w12 = 0.0;
    for (std::size_t m = 0; m < nm; ++m) w12 += lam1[m] * std::norm(u.coeffs[m]);
    diss += 2.0 * dt * vol * w12;

    const auto images = nemytskii_B(spec, u);
    double qv_cont = 0.0, qv_disc = 0.0;
    std::fill(noise_step.begin(), noise_step.end(), 0.0);
    for (int c = 0; c < d; ++c) {
      const auto& b = images[static_cast<std::size_t>(c)].coeffs;
      const double dw = incs.at(c, j);
      for (std::size_t m = 0; m < nm; ++m) {
        qv_cont += frac[m] * frac[m] * std::norm(b[m]);
        qv_disc += fracstep[m] * fracstep[m] * std::norm(b[m]);
        noise_step[m] += mu * dw * fracstep[m] * b[m];
      }
    }
    qv += mu * mu * dt * vol * qv_cont;

    double cross = 0.0, step_sq = 0.0;
    for (std::size_t m = 0; m < nm; ++m) {
      const std::complex<double> su = step[m] * u.coeffs[m];
      cross += (std::conj(su) * noise_step[m]).real();
      step_sq += std::norm(noise_step[m]);
      u.coeffs[m] = su + noise_step[m];
    }
    // zero-mean control variates: the realized martingale increment and the
    // quadratic-variation fluctuation of the realized step
    mart += 2.0 * vol * cross;
    qv_fluct += vol * step_sq - mu * mu * dt * vol * qv_disc;

    out.msq[j + 1] = sq_l2_of_row(u.coeffs, vol);
    out.diss[j + 1] = diss;
    out.qv[j + 1] = qv;
    out.residual[j + 1] =
        out.msq[j + 1] - out.msq[0] + diss - qv - mart - qv_fluct;
  }
  return out;
}

}  // namespace

EnergyBalanceReport energy_balance(const ProblemSpec& spec,
                                   const SolveConfig& cfg,
                                   const NoiseDriver& driver,
                                   std::size_t n_samples, int threads) {
  if (spec.F.kind != FunctionSpec::Kind::zero)
    throw std::invalid_argument(
        "energy_balance: the balance is formed for drift-free specs");
  if (cfg.p != 2.0)
    throw std::invalid_argument("energy_balance: requires p = 2 solves");
  if (n_samples < 2)
    throw std::invalid_argument("energy_balance: need at least 2 samples");
  spec.validate();
  cfg.validate(spec);

  const auto n = static_cast<std::size_t>(std::llround(spec.T / cfg.dt));
  std::vector<EnergySample> samples(n_samples);
  parallel_for(n_samples, threads, [&](std::size_t i) {
    const auto incs = sample_increments(driver, i, n, cfg.dt, 0);
    samples[i] = energy_sample(spec, cfg, incs);
  });

  EnergyBalanceReport report;
  report.mu = spec.mu;
  report.n_samples = n_samples;
  report.seed = driver.master_seed;
  report.times.resize(n + 1);
  report.mean_sq.resize(n + 1);
  report.mean_sq_se.resize(n + 1);
  report.dissipation.resize(n + 1);
  report.qv.resize(n + 1);
  report.residual.resize(n + 1);
  report.residual_se.resize(n + 1);
  std::vector<double> slot(n_samples);
  for (std::size_t j = 0; j <= n; ++j) {
    report.times[j] = cfg.dt * static_cast<double>(j);
    for (std::size_t i = 0; i < n_samples; ++i) slot[i] = samples[i].msq[j];
    const MeanSe msq = mean_se(slot);
    report.mean_sq[j] = msq.mean;
    report.mean_sq_se[j] = msq.se;
    for (std::size_t i = 0; i < n_samples; ++i) slot[i] = samples[i].diss[j];
    report.dissipation[j] = mean_se(slot).mean;
    for (std::size_t i = 0; i < n_samples; ++i) slot[i] = samples[i].qv[j];
    report.qv[j] = mean_se(slot).mean;
    for (std::size_t i = 0; i < n_samples; ++i) slot[i] = samples[i].residual[j];
    const MeanSe res = mean_se(slot);
    report.residual[j] = res.mean;
    report.residual_se[j] = res.se;
  }
  return report;
}

double FracSobolevNorm::norm() const { return std::sqrt(sq_l2 + sq_semi); }

FracSobolevNorm frac_time_sobolev(const PathOfFields& path, double alpha,
                                  double space_exponent) {
  if (!(alpha > 0.0 && alpha < 0.5))
    throw std::invalid_argument(
        "frac_time_sobolev: alpha must be in (0,1/2); the Gagliardo sum "
        "diverges at 1/2 on Brownian-regularity paths");
  if (path.n_times < 2)
    throw std::invalid_argument("frac_time_sobolev: need at least 2 times");

  const TorusGrid& grid = path.grid;
  const std::size_t nm = grid.n_modes();
  const std::size_t nt = path.n_times;
  const double dt = path.dt;
  const double vol = volume(grid);

  // weighted coefficients: rows of sqrt(vol * lambda^exponent) * c
  std::vector<double> wre(nt * nm), wim(nt * nm), w(nm);
  for (std::size_t m = 0; m < nm; ++m)
    w[m] = std::sqrt(vol * std::pow(grid.lambda(m), space_exponent));
  for (std::size_t j = 0; j < nt; ++j) {
    const auto row = path.at(j);
    for (std::size_t m = 0; m < nm; ++m) {
      wre[j * nm + m] = w[m] * row[m].real();
      wim[j * nm + m] = w[m] * row[m].imag();
    }
  }

  FracSobolevNorm out;
  for (std::size_t j = 0; j < nt; ++j) {
    double sum = 0.0;
    for (std::size_t m = 0; m < nm; ++m)
      sum += wre[j * nm + m] * wre[j * nm + m] + wim[j * nm + m] * wim[j * nm + m];
    out.sq_l2 += sum * dt;
  }

  for (std::size_t lag = 1; lag < nt; ++lag) {
    const double kernel =
        std::pow(static_cast<double>(lag) * dt, -1.0 - 2.0 * alpha) * dt * dt;
    double acc = 0.0;
    for (std::size_t j = 0; j + lag < nt; ++j) {
      const double* ar = &wre[j * nm];
      const double* ai = &wim[j * nm];
      const double* br = &wre[(j + lag) * nm];
      const double* bi = &wim[(j + lag) * nm];
      double s = 0.0;
      for (std::size_t m = 0; m < nm; ++m) {
        const double dr = br[m] - ar[m];
        const double di = bi[m] - ai[m];
        s += dr * dr + di * di;
      }
      acc += s;
    }
    out.sq_semi += 2.0 * kernel * acc;  // both (n,m) orderings
  }
  return out;
}

TrendTest trend_test(std::span<const double> xs, std::span<const double> ys,
                     std::span<const double> ses) {
  const LineFit fit = weighted_line_fit(xs, ys, ses);
  TrendTest out;
  out.slope = fit.slope;
  out.slope_se = fit.slope_se;
  out.zscore = fit.slope_se > 0.0 ? fit.slope / fit.slope_se : 0.0;
  out.significant_increase = out.zscore > kZ99;
  return out;
}

CriticalReport critical_sweep(const ProblemSpec& base,
                              const std::vector<double>& delta_grid, double mu,
                              const SolveConfig& cfg, const NoiseDriver& driver,
                              std::size_t n_samples, int threads, double alpha,
                              std::size_t gagliardo_stride) {
  if (delta_grid.empty())
    throw std::invalid_argument("critical_sweep: empty delta grid");
  for (std::size_t i = 0; i + 1 < delta_grid.size(); ++i)
    if (delta_grid[i] >= delta_grid[i + 1])
      throw std::invalid_argument("critical_sweep: delta grid must increase");
  if (!(delta_grid.front() >= 0.0 && delta_grid.back() < 1.0))
    throw std::invalid_argument("critical_sweep: delta grid must stay in [0,1)");
  if (n_samples < 2)
    throw std::invalid_argument("critical_sweep: need at least 2 samples");
  if (gagliardo_stride < 1)
    throw std::invalid_argument("critical_sweep: stride must be >= 1");

  CriticalReport report;
  report.delta_grid = delta_grid;
  report.mu = mu;
  report.alpha = alpha;
  report.gagliardo_stride = gagliardo_stride;
  report.n_samples = n_samples;
  report.seed = driver.master_seed;

  {
    const GrowthConstants gc = growth_constants(
        base, cfg.grid, 64, CounterRng::derive_key(driver.master_seed, 0xc0de));
    report.c_w12 = gc.w12;
    report.mu_threshold_value = mu_threshold(gc.w12);
    report.mu_below_threshold = mu * mu < 2.0 / gc.w12;
  }

  const auto n = static_cast<std::size_t>(std::llround(base.T / cfg.dt));
  const std::size_t nd = delta_grid.size();
  const std::size_t nt_thin = (n + 1 + gagliardo_stride - 1) / gagliardo_stride;

  struct Row {
    std::vector<double> diss, gagl, dist;          // per delta
    std::vector<std::vector<double>> msq_thinned;  // per delta, thinned times
  };
  std::vector<Row> rows(n_samples);
  const double vol = volume(cfg.grid);

  parallel_for(n_samples, threads, [&](std::size_t i) {
    Row& row = rows[i];
    row.diss.resize(nd);
    row.gagl.resize(nd);
    row.dist.assign(nd, 0.0);
    row.msq_thinned.resize(nd);
    const auto incs = sample_increments(driver, i, n, cfg.dt, 0);
    PathOfFields prev;
    for (std::size_t di = 0; di < nd; ++di) {
      ProblemSpec spec = base;
      spec.delta1 = delta_grid[di];
      spec.mu = mu;
      SolveConfig c = cfg;
      c.q = std::max(cfg.q, 2.0 / (1.0 - delta_grid[di]) + 1e-9);
      Trajectory traj = picard_solve(spec, c, incs);

      double diss = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const auto r = traj.path.at(j);
        double w12 = 0.0;
        for (std::size_t m = 0; m < r.size(); ++m)
          w12 += cfg.grid.lambda(m) * std::norm(r[m]);
        diss += cfg.dt * vol * w12;
      }
      row.diss[di] = diss;

      const PathOfFields thin = thin_path(traj.path, gagliardo_stride);
      const FracSobolevNorm fs = frac_time_sobolev(thin, alpha, -1.0);
      row.gagl[di] = fs.sq_l2 + fs.sq_semi;
      row.msq_thinned[di].resize(nt_thin);
      for (std::size_t j = 0; j < nt_thin; ++j)
        row.msq_thinned[di][j] = sq_l2_of_row(thin.at(j), vol);

      if (di > 0) {
        double acc = 0.0;
        for (std::size_t idx = 0; idx < traj.path.data.size(); ++idx)
          acc += std::norm(traj.path.data[idx] - prev.data[idx]);
        row.dist[di] = std::sqrt(vol * cfg.dt * acc);
      }
      prev = std::move(traj.path);
    }
  });

  report.times.resize(nt_thin);
  for (std::size_t j = 0; j < nt_thin; ++j)
    report.times[j] =
        cfg.dt * static_cast<double>(gagliardo_stride) * static_cast<double>(j);
  report.mean_sq_series.assign(nd, std::vector<double>(nt_thin));
  report.dissipation_integral.resize(nd);
  report.dissipation_se.resize(nd);
  report.gagliardo.resize(nd);
  report.gagliardo_se.resize(nd);
  report.coupled_distance.assign(nd - (nd ? 1 : 0), 0.0);

  std::vector<double> slot(n_samples);
  for (std::size_t di = 0; di < nd; ++di) {
    for (std::size_t i = 0; i < n_samples; ++i) slot[i] = rows[i].diss[di];
    const MeanSe d = mean_se(slot);
    report.dissipation_integral[di] = d.mean;
    report.dissipation_se[di] = d.se;
    for (std::size_t i = 0; i < n_samples; ++i) slot[i] = rows[i].gagl[di];
    const MeanSe g = mean_se(slot);
    report.gagliardo[di] = g.mean;
    report.gagliardo_se[di] = g.se;
    for (std::size_t j = 0; j < nt_thin; ++j) {
      for (std::size_t i = 0; i < n_samples; ++i)
        slot[i] = rows[i].msq_thinned[di][j];
      report.mean_sq_series[di][j] = mean_se(slot).mean;
    }
    if (di > 0) {
      for (std::size_t i = 0; i < n_samples; ++i) slot[i] = rows[i].dist[di];
      report.coupled_distance[di - 1] = mean_se(slot).mean;
    }
  }

  report.w12_trend = trend_test(delta_grid, report.dissipation_integral,
                                report.dissipation_se);
  report.gagliardo_trend =
      trend_test(delta_grid, report.gagliardo, report.gagliardo_se);
  const auto [w_min, w_max] = std::minmax_element(
      report.dissipation_integral.begin(), report.dissipation_integral.end());
  report.w12_band = *w_min > 0.0 ? *w_max / *w_min : INFINITY;
  const auto [g_min, g_max] =
      std::minmax_element(report.gagliardo.begin(), report.gagliardo.end());
  report.gagliardo_band = *g_min > 0.0 ? *g_max / *g_min : INFINITY;
  return report;
}

APriori2Check a_priori_2_check(const CriticalReport& report) {
  APriori2Check out;
  out.values = report.gagliardo;
  out.ses = report.gagliardo_se;
  out.band = report.gagliardo_band;
  out.trend = report.gagliardo_trend;
  return out;
}

RegularityReport regularity_report(int K, const NoiseDriver& driver,
                                   double delta,
                                   const std::vector<double>& alpha_list,
                                   double p, double T, double dt,
                                   std::size_t n_samples, int threads) {
  if (alpha_list.empty())
    throw std::invalid_argument("regularity_report: empty alpha list");
  if (n_samples < 2)
    throw std::invalid_argument("regularity_report: need at least 2 samples");
  const auto n = static_cast<std::size_t>(std::llround(T / dt));
  if (n < 1) throw std::invalid_argument("regularity_report: T/dt < 1");

  RegularityReport report;
  report.delta = delta;
  report.p = p;
  report.K = K;
  report.alphas = alpha_list;
  report.n_samples = n_samples;
  report.seed = driver.master_seed;

  // Fixed additive coefficient with |b(k)| = (1+|k|^2)^(-1/4): its gamma-norm
  // sits at the integrability edge, so the alpha > delta-1 threshold shows up
  // at finite K instead of being hidden by coefficient decay.
  auto edge_field = [](const TorusGrid& g) {
    SpectralField f(g);
    for (std::size_t i = 0; i < g.n_modes(); ++i)
      f.coeffs[i] = g.is_nyquist(i) ? 0.0 : std::pow(g.lambda(i), -0.25);
    return f;
  };

  for (int level = 0; level < 2; ++level) {
    const int Kl = level == 0 ? K : 2 * K;
    const TorusGrid grid = make_grid(1, Kl, Kl);
    const SpectralField B = edge_field(grid);
    const DiffusionPath B_path =
        constant_diffusion_path(std::span(&B, 1), n, dt);
    for (double a : alpha_list) {
      const double exponent = delta - a;
      std::vector<double> sups(n_samples);
      parallel_for(n_samples, threads, [&](std::size_t i) {
        const auto incs = sample_increments(driver, i, n, dt, 0);
        const PathOfFields path = direct_conv_exponent(B_path, incs, exponent);
        double sup = 0.0;
        for (std::size_t j = 1; j <= n; ++j)
          sup = std::max(sup, norm_lp(path.field_at(j), p));
        sups[i] = sup;
      });
      const MeanSe ms = mean_se(sups);
      if (level == 0) {
        report.norm_coarse.push_back(ms.mean);
        report.se_coarse.push_back(ms.se);
      } else {
        report.norm_fine.push_back(ms.mean);
        report.se_fine.push_back(ms.se);
      }
    }
  }
  for (std::size_t i = 0; i < alpha_list.size(); ++i) {
    report.refinement_ratio.push_back(report.norm_fine[i] /
                                      report.norm_coarse[i]);
    report.flagged.push_back(alpha_list[i] <= delta - 1.0 + 1e-12);
  }
  return report;
}

}  // namespace spdelab
