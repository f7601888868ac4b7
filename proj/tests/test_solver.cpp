#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "spdelab/conv.hpp"
#include "spdelab/multiplier.hpp"
#include "spdelab/norms.hpp"
#include "spdelab/solver.hpp"

using namespace spdelab;

namespace {
constexpr double kPi = std::numbers::pi;

SolveConfig basic_config(const TorusGrid& g, double dt, double q = 8.0) {
  SolveConfig cfg;
  cfg.grid = g;
  cfg.dt = dt;
  cfg.q = q;
  return cfg;
}
}  // namespace

TEST_CASE("nemytskii operators") {
  const TorusGrid g = make_grid(1, 16, 32);

  SUBCASE("identity drift reproduces the field") {
    ProblemSpec spec;
    spec.F = FunctionSpec::identity();
    const SpectralField u = random_smooth_field(g, 0.7, 1.5, 2);
    const SpectralField img = nemytskii_F(spec, u);
    for (std::size_t i = 0; i < u.coeffs.size(); ++i)
      CHECK(std::abs(img.coeffs[i] - u.coeffs[i]) < 1e-12);
  }

  SUBCASE("sin of the zero field vanishes, cos gives the constant one") {
    ProblemSpec spec;
    spec.F = FunctionSpec::sine();
    spec.B = {FunctionSpec::cosine()};
    CHECK(norm_lp(nemytskii_F(spec, zero_field(g)), 2.0) == 0.0);
    const auto images = nemytskii_B(spec, zero_field(g));
    REQUIRE(images.size() == 1);
    CHECK(images[0].mode({0, 0}).real() == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(gamma_norm(images, 2.0) ==
          doctest::Approx(std::sqrt(2.0 * kPi)).epsilon(1e-12));
  }

  SUBCASE("images stay real and alias-controlled") {
    ProblemSpec spec;
    spec.F = FunctionSpec::polynomial({0.0, 1.0, 0.5});  // x + x^2/2
    const SpectralField u = random_smooth_field(g, 1.0, 1.2, 9);
    const SpectralField img = nemytskii_F(spec, u);
    CHECK(hermitian_defect(img) < 1e-12);
  }
}

TEST_CASE("growth constants") {
  const TorusGrid g = make_grid(1, 16, 32);

  SUBCASE("constant diffusion keeps a finite growth constant") {
    ProblemSpec spec;
    spec.B = {FunctionSpec::constant(2.0), FunctionSpec::constant(-1.0)};
    const GrowthConstants gc = growth_constants(spec, g, 32, 4);
    CHECK(gc.growth > 0.0);
    CHECK(gc.growth <= (4.0 + 1.0) * 2.0 * kPi + 1e-9);
    CHECK(gc.lip_B == doctest::Approx(0.0));
  }

  SUBCASE("identity drift is 1-Lipschitz") {
    ProblemSpec spec;
    spec.F = FunctionSpec::identity();
    const GrowthConstants gc = growth_constants(spec, g, 24, 5);
    CHECK(gc.lip_F == doctest::Approx(1.0).epsilon(1e-10));
  }

  SUBCASE("sin diffusion W12 constant is stable across disjoint batches") {
    ProblemSpec spec;
    spec.B = {FunctionSpec::sine()};
    const GrowthConstants a = growth_constants(spec, g, 48, 1000);
    const GrowthConstants b = growth_constants(spec, g, 48, 2000);
    INFO("batch constants ", a.w12, " ", b.w12);
    CHECK(std::abs(a.w12 - b.w12) <= 0.10 * std::max(a.w12, b.w12));
    CHECK(mu_threshold(a.w12) == doctest::Approx(std::sqrt(2.0 / a.w12)));
  }
}

TEST_CASE("picard_solve") {
  const TorusGrid g = make_grid(1, 16, 32);

  SUBCASE("pure heat flow converges immediately") {
    ProblemSpec spec;
    spec.T = 0.5;
    spec.u0 = InitialCondition::function_of_x(FunctionSpec::sine(), 1.0);
    SolveConfig cfg = basic_config(g, 1e-2);
    const auto incs = sample_increments(NoiseDriver{1, 1}, 0, 50, 1e-2);
    const Trajectory traj = picard_solve(spec, cfg, incs);
    CHECK(traj.log.total_iterations == 1);
    const SpectralField expect =
        apply(semigroup_symbol(g, 0.5), spec.u0.realize(g));
    for (std::size_t i = 0; i < expect.coeffs.size(); ++i)
      CHECK(std::abs(traj.path.at(50)[i] - expect.coeffs[i]) < 1e-12);
  }

  SUBCASE("linear drift against the scalar ODE oracle") {
    // F(xi) = lambda xi with delta0 = 0: mode zero solves u' = (lambda-1) u
    const double lam = 0.95, T = 0.2, dt = 1e-4, c = 1.3;
    ProblemSpec spec;
    spec.T = T;
    spec.F = FunctionSpec::polynomial({0.0, lam});
    spec.u0 = InitialCondition::function_of_x(FunctionSpec::constant(1.0), c);
    SolveConfig cfg = basic_config(g, dt);
    cfg.picard_tol = 1e-12;
    const auto n = static_cast<std::size_t>(std::llround(T / dt));
    const auto incs = sample_increments(NoiseDriver{2, 1}, 0, n, dt);
    const Trajectory traj = picard_solve(spec, cfg, incs);
    const double got = traj.path.at(n)[g.index_of({0, 0})].real();
    const double oracle = c * std::exp((lam - 1.0) * T);
    CHECK(std::abs(got - oracle) < 1e-6);
  }

  SUBCASE("additive noise fixes the point in at most two sweeps") {
    ProblemSpec spec;
    spec.T = 0.5;
    spec.mu = 1.0;
    spec.delta1 = 0.5;
    spec.B = {FunctionSpec::constant(1.0)};
    spec.u0 = InitialCondition::function_of_x(FunctionSpec::sine(), 1.0);
    SolveConfig cfg = basic_config(g, 1e-2);
    const auto incs = sample_increments(NoiseDriver{3, 1}, 0, 50, 1e-2);
    const Trajectory traj = picard_solve(spec, cfg, incs);
    CHECK(traj.log.total_iterations <= 2);

    const SpectralField B = constant_field(g, 1.0);
    const DiffusionPath bpath =
        constant_diffusion_path(std::span(&B, 1), 50, 1e-2);
    const PathOfFields conv = direct_conv(bpath, incs, 0.5);
    double worst = 0.0;
    for (std::size_t j = 0; j <= 50; ++j) {
      const SpectralField heat = apply(
          semigroup_symbol(g, 1e-2 * static_cast<double>(j)), spec.u0.realize(g));
      const auto row = traj.path.at(j);
      const auto crow = conv.at(j);
      for (std::size_t i = 0; i < row.size(); ++i)
        worst = std::max(worst,
                         std::abs(row[i] - crow[i] - heat.coeffs[i]));
    }
    CHECK(worst < 1e-12);
  }

  SUBCASE("smooth benchmark contracts geometrically") {
    const ProblemSpec spec = smooth_benchmark_spec();
    SolveConfig cfg = basic_config(make_grid(1, 32, 64), 1e-3);
    const auto n = static_cast<std::size_t>(std::llround(spec.T / cfg.dt));
    const auto incs =
        sample_increments(NoiseDriver{99, 1}, 0, n, cfg.dt);
    const Trajectory traj = picard_solve(spec, cfg, incs);
    REQUIRE(traj.log.segments.size() == 1);
    const auto& d = traj.log.segments[0].distances;
    REQUIRE(d.size() >= 3);
    for (std::size_t i = 2; i + 1 < d.size(); ++i) {
      if (d[i] == 0.0) break;
      CHECK(d[i + 1] / d[i] < 0.8);
    }
    // fixed-point residual: one more application of the mild map moves the
    // trajectory by less than 2 tol
    PathOfFields F_path(cfg.grid, cfg.dt, n + 1);
    DiffusionPath B_path(cfg.grid, cfg.dt, n + 1, 1);
    for (std::size_t j = 0; j <= n; ++j) {
      const SpectralField uj = traj.path.field_at(j);
      F_path.set(j, nemytskii_F(spec, uj));
      const auto images = nemytskii_B(spec, uj);
      auto dst = B_path.at(j, 0);
      std::copy(images[0].coeffs.begin(), images[0].coeffs.end(), dst.begin());
    }
    PathOfFields mapped(cfg.grid, cfg.dt, n + 1);
    const SpectralField u0 = spec.u0.realize(cfg.grid);
    mapped.set(0, u0);
    const Multiplier step = semigroup_symbol(cfg.grid, cfg.dt);
    for (std::size_t j = 0; j < n; ++j) {
      auto next = mapped.at(j + 1);
      const auto prev = mapped.at(j);
      for (std::size_t i = 0; i < next.size(); ++i)
        next[i] = step.symbol[i] * prev[i];
    }
    const PathOfFields drift = drift_conv(F_path, spec.delta0);
    const PathOfFields stoch = direct_conv(B_path, incs, spec.delta1);
    double residual = 0.0;
    const double vol = 2.0 * kPi;
    for (std::size_t j = 0; j <= n; ++j) {
      double sq = 0.0;
      const auto m = mapped.at(j);
      const auto dr = drift.at(j);
      const auto st = stoch.at(j);
      const auto tr = traj.path.at(j);
      for (std::size_t i = 0; i < m.size(); ++i)
        sq += std::norm(m[i] + dr[i] + spec.mu * st[i] - tr[i]);
      residual = std::max(residual, std::sqrt(vol * sq));
    }
    double sup = 0.0;
    for (double v : traj.norms_lp) sup = std::max(sup, v);
    CHECK(residual < 2.0 * cfg.picard_tol * (1.0 + sup));
  }

  SUBCASE("strong drift splits the horizon and still matches the oracle") {
    const double lam = 2.5, T = 2.0, dt = 1e-3, c = 0.2;
    ProblemSpec spec;
    spec.T = T;
    spec.F = FunctionSpec::polynomial({0.0, lam});
    spec.u0 = InitialCondition::function_of_x(FunctionSpec::constant(1.0), c);
    SolveConfig cfg = basic_config(g, dt);
    const auto n = static_cast<std::size_t>(std::llround(T / dt));
    const auto incs = sample_increments(NoiseDriver{4, 1}, 0, n, dt);
    const Trajectory traj = picard_solve(spec, cfg, incs);
    CHECK(traj.log.split);
    CHECK(traj.log.segments.size() > 1);
    const double got = traj.path.at(n)[g.index_of({0, 0})].real();
    const double oracle = c * std::exp((lam - 1.0) * T);
    CHECK(std::abs(got - oracle) < 0.02 * oracle);

    SolveConfig rigid = cfg;
    rigid.allow_horizon_split = false;
    CHECK_THROWS_AS(picard_solve(spec, rigid, incs), NonContraction);
  }

  SUBCASE("mu = 0 ignores the noise seed") {
    ProblemSpec spec = smooth_benchmark_spec();
    spec.mu = 0.0;
    SolveConfig cfg = basic_config(g, 1e-2);
    const auto n = static_cast<std::size_t>(std::llround(spec.T / cfg.dt));
    const Trajectory a = picard_solve(
        spec, cfg, sample_increments(NoiseDriver{10, 1}, 0, n, cfg.dt));
    const Trajectory b = picard_solve(
        spec, cfg, sample_increments(NoiseDriver{20, 1}, 5, n, cfg.dt));
    CHECK(a.path.data == b.path.data);
  }

  SUBCASE("hypothesis gate on the moment index") {
    ProblemSpec spec = smooth_benchmark_spec();
    spec.delta1 = 0.5;
    SolveConfig cfg = basic_config(g, 1e-2, 4.0);  // needs q > 4
    const auto incs = sample_increments(NoiseDriver{1, 1}, 0, 25, 1e-2);
    CHECK_THROWS_AS(picard_solve(spec, cfg, incs), std::invalid_argument);
  }
}

TEST_CASE("euler_solve") {
  const TorusGrid g = make_grid(1, 16, 32);

  SUBCASE("linear drift matches the ODE oracle to first order") {
    const double lam = 0.5, T = 0.5, c = 1.0;
    ProblemSpec spec;
    spec.T = T;
    spec.F = FunctionSpec::polynomial({0.0, lam});
    spec.u0 = InitialCondition::function_of_x(FunctionSpec::constant(1.0), c);
    double prev_err = 0.0;
    for (double dt : {1e-2, 5e-3, 2.5e-3}) {
      SolveConfig cfg = basic_config(g, dt);
      const auto n = static_cast<std::size_t>(std::llround(T / dt));
      const Trajectory traj =
          euler_solve(spec, cfg, sample_increments(NoiseDriver{1, 1}, 0, n, dt));
      const double got = traj.path.at(n)[g.index_of({0, 0})].real();
      const double err = std::abs(got - c * std::exp((lam - 1.0) * T));
      if (prev_err > 0.0) CHECK(err < 0.7 * prev_err);
      prev_err = err;
    }
  }

  SUBCASE("cross-scheme agreement on the smooth benchmark") {
    const ProblemSpec spec = smooth_benchmark_spec();
    SolveConfig cfg = basic_config(make_grid(1, 32, 64), 1e-3);
    const auto n = static_cast<std::size_t>(std::llround(spec.T / cfg.dt));
    const auto incs = sample_increments(NoiseDriver{7, 1}, 0, n, cfg.dt);
    const Trajectory pic = picard_solve(spec, cfg, incs);
    const Trajectory eul = euler_solve(spec, cfg, incs);
    CHECK(relative_l2_distance(eul.path, pic.path) < 0.05);
  }

  SUBCASE("blow-up detection") {
    ProblemSpec spec;
    spec.T = 1.0;
    spec.F = FunctionSpec::polynomial({0.0, 40.0});
    spec.u0 = InitialCondition::function_of_x(FunctionSpec::constant(1.0), 1.0);
    SolveConfig cfg = basic_config(g, 1e-2);
    cfg.blowup_cap = 1e3;
    const auto incs = sample_increments(NoiseDriver{1, 1}, 0, 100, 1e-2);
    CHECK_THROWS_AS(euler_solve(spec, cfg, incs), BlowUp);
  }
}

TEST_CASE("two-dimensional solve exercises the full stack") {
  ProblemSpec spec;
  spec.delta0 = 0.2;
  spec.delta1 = 0.3;
  spec.mu = 0.4;
  spec.F = FunctionSpec::sine();
  spec.B = {FunctionSpec::cosine()};
  spec.u0 = InitialCondition::random(0.5, 2.0, 12);
  spec.T = 0.1;
  SolveConfig cfg = basic_config(make_grid(2, 8, 16), 2e-3);
  const auto n = static_cast<std::size_t>(std::llround(spec.T / cfg.dt));
  const auto incs = sample_increments(NoiseDriver{8, 1}, 0, n, cfg.dt);
  const Trajectory pic = picard_solve(spec, cfg, incs);
  const Trajectory eul = euler_solve(spec, cfg, incs);
  for (std::size_t j = 0; j <= n; ++j) {
    CHECK(hermitian_defect(pic.path.field_at(j)) < 1e-11);
    CHECK(std::isfinite(pic.norms_wmp[j]));
  }
  CHECK(relative_l2_distance(eul.path, pic.path) < 0.05);
}

TEST_CASE("nonlinear specs demand the dealiasing margin") {
  ProblemSpec spec = smooth_benchmark_spec();
  SolveConfig cfg = basic_config(make_grid(1, 16, 16), 1e-2);
  const auto incs = sample_increments(NoiseDriver{1, 1}, 0, 25, 1e-2);
  CHECK_THROWS_WITH_AS(picard_solve(spec, cfg, incs),
                       doctest::Contains("dealiasing"), std::invalid_argument);
}

TEST_CASE("truncation stability of the smooth benchmark") {
  const ProblemSpec spec = smooth_benchmark_spec();
  auto solve_norm = [&](int K) {
    SolveConfig cfg = basic_config(make_grid(1, K, 2 * K), 1e-3);
    const auto n = static_cast<std::size_t>(std::llround(spec.T / cfg.dt));
    const auto incs = sample_increments(NoiseDriver{31, 1}, 0, n, cfg.dt);
    const Trajectory traj = picard_solve(spec, cfg, incs);
    double sup = 0.0;
    for (double v : traj.norms_lp) sup = std::max(sup, v);
    return sup;
  };
  const double coarse = solve_norm(16);
  const double fine = solve_norm(32);
  CHECK(std::abs(fine - coarse) < 0.01 * std::max(coarse, fine));
}

TEST_CASE("sobolev_track") {
  const TorusGrid g = make_grid(1, 16, 32);

  SUBCASE("constant trajectory") {
    PathOfFields path(g, 0.1, 6);
    for (std::size_t j = 0; j < 6; ++j) path.set(j, constant_field(g, 2.0));
    const SobolevSeries s = sobolev_track(path, 2, 2.0);
    for (double v : s.wmp)
      CHECK(v == doctest::Approx(2.0 * std::sqrt(2.0 * kPi)).epsilon(1e-13));
    CHECK(s.sup_w1mp ==
          doctest::Approx(2.0 * std::pow(2.0 * kPi, 0.25)).epsilon(1e-12));
  }

  SUBCASE("m = 1, p = 2 equals the Bessel norm") {
    PathOfFields path(g, 0.1, 3);
    for (std::size_t j = 0; j < 3; ++j)
      path.set(j, random_smooth_field(g, 1.0, 1.1, 40 + j));
    const SobolevSeries s = sobolev_track(path, 1, 2.0);
    for (std::size_t j = 0; j < 3; ++j)
      CHECK(std::abs(s.wmp[j] - norm_bessel(path.field_at(j), 1.0, 2.0)) <
            1e-10);
  }
}

TEST_CASE("divergence-form noise") {
  SUBCASE("constant vector fields have zero divergence image") {
    ProblemSpec spec = div_noise_spec(
        {{FunctionSpec::constant(1.0), FunctionSpec::constant(2.0)}}, 2);
    const TorusGrid g = make_grid(2, 8, 16);
    const auto images = nemytskii_B(spec, random_smooth_field(g, 1.0, 1.5, 3));
    REQUIRE(images.size() == 1);
    CHECK(norm_lp(images[0], 2.0) < 1e-12);
  }

  SUBCASE("B(xi) = (xi, 0) on a single mode") {
    ProblemSpec spec = div_noise_spec(
        {{FunctionSpec::identity(), FunctionSpec::zero()}}, 2);
    CHECK(spec.delta1 == 1.0);
    const TorusGrid g = make_grid(2, 8, 16);
    SpectralField u(g);
    u.set_mode({1, 0}, 0.5);
    u.set_mode({-1, 0}, 0.5);
    const auto images = nemytskii_B(spec, u);
    const std::complex<double> expect =
        std::complex<double>(0.0, 1.0 / std::numbers::sqrt2) * 0.5;
    CHECK(std::abs(images[0].mode({1, 0}) - expect) < 1e-12);
  }

  SUBCASE("outer power composed with the inner inverse root stays bounded") {
    // |k| (|k|^2+1)^{(d1-1)/2} <= (|k|^2+1)^{d1/2}: the divergence part costs
    // a factor at most one relative to the bare fractional symbol
    const TorusGrid g = make_grid(1, 64, 64);
    for (double d1 : {0.5, 1.0}) {
      const Multiplier outer = frac_power_symbol(g, d1);
      const auto inner = inv_sqrt_div_symbol(g);
      for (std::size_t i = 0; i < g.n_modes(); ++i)
        CHECK(std::abs(outer.symbol[i]) * std::abs(inner.symbols[0][i]) <=
              std::abs(outer.symbol[i]) * (1.0 + 1e-15));
    }
  }

  SUBCASE("component count mismatch is rejected") {
    CHECK_THROWS_AS(div_noise_spec({{FunctionSpec::identity()}}, 2),
                    std::invalid_argument);
  }
}
