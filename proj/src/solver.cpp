#include "spdelab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "spdelab/conv.hpp"
#include "spdelab/multiplier.hpp"
#include "spdelab/norms.hpp"

namespace spdelab {

namespace {

void check_finite(std::span<const double> values, const char* what) {
  for (double v : values)
    if (!std::isfinite(v)) throw BlowUp(std::string(what) + ": non-finite values");
}

// Shared evaluation core: one inverse transform of u serves F and every B_i.
struct NemytskiiWorkspace {
  std::vector<double> phys;      // u on collocation points
  std::vector<double> image;    // scratch for pointwise images
};

std::vector<double> physical_values(const SpectralField& u) {
  auto phys = inverse_transform(u);
  check_finite(phys, "nemytskii");
  return phys;
}

SpectralField drift_image(const ProblemSpec& spec, const TorusGrid& grid,
                          std::span<const double> phys,
                          std::vector<double>& scratch) {
  scratch.resize(phys.size());
  for (std::size_t i = 0; i < phys.size(); ++i) scratch[i] = spec.F(phys[i]);
  check_finite(scratch, "nemytskii_F");
  return transform(grid, scratch);
}

std::vector<SpectralField> diffusion_images(const ProblemSpec& spec,
                                            const TorusGrid& grid,
                                            std::span<const double> phys,
                                            std::vector<double>& scratch) {
  std::vector<SpectralField> out;
  scratch.resize(phys.size());
  if (!spec.div_form) {
    out.reserve(spec.B.size());
    for (const auto& Bi : spec.B) {
      for (std::size_t i = 0; i < phys.size(); ++i) scratch[i] = Bi(phys[i]);
      check_finite(scratch, "nemytskii_B");
      out.push_back(transform(grid, scratch));
    }
    return out;
  }
  const auto div_op = inv_sqrt_div_symbol(grid);
  out.reserve(spec.B_vec.size());
  for (const auto& Bi : spec.B_vec) {
    std::vector<SpectralField> components;
    components.reserve(Bi.size());
    for (const auto& comp : Bi) {
      for (std::size_t i = 0; i < phys.size(); ++i) scratch[i] = comp(phys[i]);
      check_finite(scratch, "nemytskii_B");
      components.push_back(transform(grid, scratch));
    }
    out.push_back(spdelab::apply(div_op, std::span<const SpectralField>(components)));
  }
  return out;
}

double sup_distance_lp(const PathOfFields& a, const PathOfFields& b, double p) {
  if (p == 2.0) {
    const double vol = std::pow(2.0 * std::numbers::pi, a.grid.dim());
    double worst = 0.0;
    for (std::size_t i = 0; i < a.n_times; ++i) {
      const auto ra = a.at(i);
      const auto rb = b.at(i);
      double sum = 0.0;
      for (std::size_t m = 0; m < ra.size(); ++m) sum += std::norm(ra[m] - rb[m]);
      worst = std::max(worst, vol * sum);
    }
    return std::sqrt(worst);
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < a.n_times; ++i)
    worst = std::max(worst, norm_lp(a.field_at(i) - b.field_at(i), p));
  return worst;
}

double sup_norm_lp(const PathOfFields& a, double p) {
  const auto norms = path_norms_lp(a, p);
  return *std::max_element(norms.begin(), norms.end());
}

// One Picard segment on [0, n*dt] from the given initial state. Splits the
// horizon recursively when the iteration does not contract.
PathOfFields picard_segment(const ProblemSpec& spec, const SolveConfig& cfg,
                            const BrownianIncrements& incs,
                            const SpectralField& u_init, double t0, int depth,
                            PicardLog& log) {
  const TorusGrid& grid = cfg.grid;
  const std::size_t n = incs.n_steps;
  const std::size_t nm = grid.n_modes();
  const double dt = incs.dt;
  const int d = spec.d();
  const bool has_drift = spec.F.kind != FunctionSpec::Kind::zero;
  const bool has_noise = d > 0 && spec.mu != 0.0;

  // heat flow of the initial state, the zeroth iterate
  PathOfFields flow(grid, dt, n + 1);
  flow.set(0, u_init);
  {
    std::vector<double> step(nm);
    for (std::size_t m = 0; m < nm; ++m) step[m] = std::exp(-grid.lambda(m) * dt);
    for (std::size_t j = 0; j < n; ++j) {
      const auto prev = flow.at(j);
      auto next = flow.at(j + 1);
      for (std::size_t m = 0; m < nm; ++m) next[m] = step[m] * prev[m];
    }
  }

  PicardLog::Segment seg;
  seg.t0 = t0;
  seg.t1 = t0 + dt * static_cast<double>(n);

  PathOfFields u = flow;
  std::vector<double> scratch;
  int rising = 0;
  bool converged = false;

  for (int it = 0; it < cfg.picard_max_iters; ++it) {
    PathOfFields next = flow;
    if (has_drift) {
      PathOfFields F_path(grid, dt, n + 1);
      for (std::size_t j = 0; j <= n; ++j) {
        const auto phys = physical_values(u.field_at(j));
        F_path.set(j, drift_image(spec, grid, phys, scratch));
      }
      const PathOfFields drift = drift_conv(F_path, spec.delta0);
      for (std::size_t i = 0; i < next.data.size(); ++i)
        next.data[i] += drift.data[i];
    }
    if (has_noise) {
      DiffusionPath B_path(grid, dt, n + 1, d);
      for (std::size_t j = 0; j <= n; ++j) {
        const auto phys = physical_values(u.field_at(j));
        const auto images = diffusion_images(spec, grid, phys, scratch);
        for (int c = 0; c < d; ++c) {
          auto dst = B_path.at(j, c);
          const auto& src = images[static_cast<std::size_t>(c)].coeffs;
          std::copy(src.begin(), src.end(), dst.begin());
        }
      }
      const PathOfFields stoch = direct_conv(B_path, incs, spec.delta1);
      for (std::size_t i = 0; i < next.data.size(); ++i)
        next.data[i] += spec.mu * stoch.data[i];
    }

    const double dist = sup_distance_lp(next, u, cfg.p);
    const double scale = sup_norm_lp(u, cfg.p);
    seg.distances.push_back(dist);
    seg.iterations = it + 1;

    if (seg.distances.size() >= 2) {
      const double prev = seg.distances[seg.distances.size() - 2];
      rising = (prev > 0.0 && dist >= prev) ? rising + 1 : 0;
    }
    u = std::move(next);
    if (dist < cfg.picard_tol * (1.0 + scale)) {
      converged = true;
      break;
    }
    if (rising >= 3) break;
  }

  if (converged) {
    log.segments.push_back(std::move(seg));
    log.total_iterations += log.segments.back().iterations;
    return u;
  }

  // Not a contraction on this horizon; bisect and chain, as the fixed point
  // argument restarts from the previously computed state.
  if (!cfg.allow_horizon_split || n < 2 || depth >= 8)
    throw NonContraction(
        "picard_solve: no contraction on [" + std::to_string(t0) + ", " +
        std::to_string(seg.t1) + "]; shorten T or enable horizon splitting");
  log.split = true;
  const std::size_t n1 = n / 2;
  const PathOfFields first =
      picard_segment(spec, cfg, incs.slice(0, n1), u_init, t0, depth + 1, log);
  const PathOfFields second = picard_segment(
      spec, cfg, incs.slice(n1, n - n1), first.field_at(n1),
      t0 + dt * static_cast<double>(n1), depth + 1, log);

  PathOfFields out(grid, dt, n + 1);
  for (std::size_t j = 0; j <= n1; ++j) {
    const auto src = first.at(j);
    std::copy(src.begin(), src.end(), out.at(j).begin());
  }
  for (std::size_t j = 1; j <= n - n1; ++j) {
    const auto src = second.at(j);
    std::copy(src.begin(), src.end(), out.at(n1 + j).begin());
  }
  return out;
}

void attach_diagnostics(Trajectory& traj, const SolveConfig& cfg) {
  traj.norms_lp = path_norms_lp(traj.path, cfg.p);
  traj.norms_w1p.resize(traj.path.n_times);
  traj.norms_wmp.resize(traj.path.n_times);
  for (std::size_t i = 0; i < traj.path.n_times; ++i) {
    const SpectralField f = traj.path.field_at(i);
    traj.norms_w1p[i] = norm_sobolev(f, 1, cfg.p);
    traj.norms_wmp[i] = norm_sobolev(f, cfg.m, cfg.p);
  }
}

bool spec_has_nonlinearity(const ProblemSpec& spec) {
  if (spec.F.nonlinear()) return true;
  for (const auto& b : spec.B)
    if (b.nonlinear()) return true;
  for (const auto& bi : spec.B_vec)
    for (const auto& comp : bi)
      if (comp.nonlinear()) return true;
  return false;
}

void check_solver_inputs(const ProblemSpec& spec, const SolveConfig& cfg,
                         const BrownianIncrements& incs) {
  spec.validate();
  cfg.validate(spec);
  if (spec_has_nonlinearity(spec) &&
      cfg.grid.points_per_dim() < 2 * cfg.grid.modes_per_dim())
    throw std::invalid_argument(
        "solver: nonlinear coefficients need the dealiasing margin M >= 2K");
  const auto n = static_cast<std::size_t>(std::llround(spec.T / cfg.dt));
  if (incs.n_steps != n)
    throw std::invalid_argument("solver: increments do not cover T/dt steps");
  if (std::abs(incs.dt - cfg.dt) > 1e-12 * cfg.dt)
    throw std::invalid_argument("solver: increment dt differs from config dt");
  if (spec.d() > 0 && incs.d != spec.d())
    throw std::invalid_argument("solver: increment components != diffusion components");
}

}  // namespace

SpectralField nemytskii_F(const ProblemSpec& spec, const SpectralField& u) {
  std::vector<double> scratch;
  return drift_image(spec, u.grid, physical_values(u), scratch);
}

std::vector<SpectralField> nemytskii_B(const ProblemSpec& spec,
                                       const SpectralField& u) {
  std::vector<double> scratch;
  return diffusion_images(spec, u.grid, physical_values(u), scratch);
}

SpectralField nemytskii_b_sum(const ProblemSpec& spec, const SpectralField& u) {
  auto images = nemytskii_B(spec, u);
  SpectralField sum(u.grid);
  for (const auto& f : images) sum += f;
  return sum;
}

GrowthConstants growth_constants(const ProblemSpec& spec, const TorusGrid& grid,
                                 std::size_t n_samples, std::uint64_t seed) {
  GrowthConstants out;
  for (std::size_t i = 0; i < n_samples; ++i) {
    // amplitudes sweep two decades so the ratios see small and large states
    const double amp =
        std::pow(10.0, -1.0 + 2.0 * static_cast<double>(i) /
                                  std::max<std::size_t>(1, n_samples - 1));
    const SpectralField u = random_smooth_field(
        grid, amp, 1.5, CounterRng::derive_key(seed, 2 * i));
    const SpectralField v = random_smooth_field(
        grid, amp, 1.5, CounterRng::derive_key(seed, 2 * i + 1));

    const bool has_B = spec.d() > 0;
    std::vector<SpectralField> Bu, Bv;
    if (has_B) {
      Bu = nemytskii_B(spec, u);
      Bv = nemytskii_B(spec, v);
      const double nu2 = norm_lp(u, 2.0);
      out.growth = std::max(
          out.growth, std::pow(gamma_norm(Bu, 2.0), 2) / (1.0 + nu2 * nu2));
      const SpectralField bu = nemytskii_b_sum(spec, u);
      const double w12u = norm_sobolev(u, 1, 2.0);
      const double w12b = norm_sobolev(bu, 1, 2.0);
      out.w12 = std::max(out.w12, w12b * w12b / (1.0 + w12u * w12u));
    }

    const double gap = norm_lp(u - v, 2.0);
    if (gap > 1e-12) {
      out.lip_F = std::max(
          out.lip_F, norm_lp(nemytskii_F(spec, u) - nemytskii_F(spec, v), 2.0) / gap);
      if (has_B) {
        std::vector<SpectralField> diff;
        diff.reserve(Bu.size());
        for (std::size_t c = 0; c < Bu.size(); ++c)
          diff.push_back(Bu[c] - Bv[c]);
        out.lip_B = std::max(out.lip_B, gamma_norm(diff, 2.0) / gap);
      }
    }
  }
  return out;
}

double mu_threshold(double c_w12) {
  if (!(c_w12 > 0.0)) throw std::invalid_argument("mu_threshold: C must be > 0");
  return std::sqrt(2.0 / c_w12);
}

Trajectory picard_solve(const ProblemSpec& spec, const SolveConfig& cfg,
                        const BrownianIncrements& incs) {
  check_solver_inputs(spec, cfg, incs);
  Trajectory traj;
  traj.path = picard_segment(spec, cfg, incs, spec.u0.realize(cfg.grid), 0.0, 0,
                             traj.log);
  attach_diagnostics(traj, cfg);
  return traj;
}

Trajectory euler_solve(const ProblemSpec& spec, const SolveConfig& cfg,
                       const BrownianIncrements& incs) {
  check_solver_inputs(spec, cfg, incs);
  const TorusGrid& grid = cfg.grid;
  const std::size_t n = incs.n_steps;
  const std::size_t nm = grid.n_modes();
  const double dt = cfg.dt;
  const int d = spec.d();
  const bool has_drift = spec.F.kind != FunctionSpec::Kind::zero;
  const bool has_noise = d > 0 && spec.mu != 0.0;

  std::vector<double> step(nm), drift_w(nm), noise_w(nm);
  for (std::size_t m = 0; m < nm; ++m) {
    const double lam = grid.lambda(m);
    step[m] = std::exp(-lam * dt);
    drift_w[m] = dt * std::exp(spec.delta0 * std::log(lam) - lam * dt);
    noise_w[m] = std::exp(0.5 * spec.delta1 * std::log(lam) - lam * dt);
  }

  Trajectory traj;
  traj.path = PathOfFields(grid, dt, n + 1);
  traj.path.set(0, spec.u0.realize(grid));
  std::vector<double> scratch;
  const double cap2 = cfg.blowup_cap * cfg.blowup_cap;
  const double vol = std::pow(2.0 * std::numbers::pi, grid.dim());

  for (std::size_t j = 0; j < n; ++j) {
    const SpectralField uj = traj.path.field_at(j);
    const auto phys = physical_values(uj);
    auto next = traj.path.at(j + 1);
    const auto prev = traj.path.at(j);
    for (std::size_t m = 0; m < nm; ++m) next[m] = step[m] * prev[m];
    if (has_drift) {
      const SpectralField Fj = drift_image(spec, grid, phys, scratch);
      for (std::size_t m = 0; m < nm; ++m) next[m] += drift_w[m] * Fj.coeffs[m];
    }
    if (has_noise) {
      const auto images = diffusion_images(spec, grid, phys, scratch);
      for (int c = 0; c < d; ++c) {
        const double w = spec.mu * incs.at(c, j);
        const auto& src = images[static_cast<std::size_t>(c)].coeffs;
        for (std::size_t m = 0; m < nm; ++m) next[m] += w * noise_w[m] * src[m];
      }
    }
    double sq = 0.0;
    for (std::size_t m = 0; m < nm; ++m) sq += std::norm(next[m]);
    if (vol * sq > cap2)
      throw BlowUp("euler_solve: norm passed blow-up cap at t=" +
                   std::to_string(dt * static_cast<double>(j + 1)));
  }
  attach_diagnostics(traj, cfg);
  return traj;
}

SobolevSeries sobolev_track(const PathOfFields& path, int m, double p) {
  if (m < 1) throw std::invalid_argument("sobolev_track: m must be >= 1");
  SobolevSeries out;
  out.wmp.resize(path.n_times);
  out.w1mp.resize(path.n_times);
  for (std::size_t i = 0; i < path.n_times; ++i) {
    const SpectralField f = path.field_at(i);
    out.wmp[i] = norm_sobolev(f, m, p);
    out.w1mp[i] = norm_sobolev(f, 1, static_cast<double>(m) * p);
  }
  out.sup_wmp = *std::max_element(out.wmp.begin(), out.wmp.end());
  out.sup_w1mp = *std::max_element(out.w1mp.begin(), out.w1mp.end());
  return out;
}

}  // namespace spdelab
