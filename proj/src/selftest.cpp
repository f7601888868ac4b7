#include <cmath>
#include <numbers>

#include "spdelab/conv.hpp"
#include "spdelab/experiments.hpp"
#include "spdelab/multiplier.hpp"
#include "spdelab/norms.hpp"
#include "spdelab/runner.hpp"
#include "spdelab/solver.hpp"

// Quick closed-form checks behind the selftest command: one entry per module
// example that has a pencil-and-paper answer. Everything here runs in well
// under a second; the statistical and oracle-driven studies live in the test
// suites instead.

namespace spdelab {

namespace {
constexpr double kPi = std::numbers::pi;

bool close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}
}  // namespace

std::vector<SelftestEntry> run_selftest() {
  std::vector<SelftestEntry> out;
  auto check = [&out](const std::string& name, bool pass,
                      const std::string& detail = "") {
    out.push_back({name, pass, pass ? "" : detail});
  };

  const TorusGrid g1 = make_grid(1, 8, 8);
  const TorusGrid g2 = make_grid(2, 4, 4);

  check("grid.lattice_1d",
        g1.n_modes() == 8 && g1.wavevector(0)[0] == -3 &&
            g1.wavevector(7)[0] == 4,
        "lattice should run -3..4");
  check("grid.weights_sum",
        close(g1.cell_weight() * static_cast<double>(g1.n_points()), 2.0 * kPi,
              1e-14),
        "quadrature weights must sum to 2pi");
  check("grid.lattice_2d", g2.n_modes() == 16, "product lattice has 16 sites");

  {
    std::vector<double> v(g1.n_points(), 3.0);
    const SpectralField f = transform(g1, v);
    bool only_zero = close(f.mode({0, 0}).real(), 3.0, 1e-14);
    for (std::size_t i = 0; i < g1.n_modes(); ++i)
      if (g1.wavevector(i)[0] != 0 && std::abs(f.coeffs[i]) > 1e-13)
        only_zero = false;
    check("transform.constant", only_zero, "constant maps to the zero mode");
  }
  {
    std::vector<double> v(g1.n_points());
    for (std::size_t i = 0; i < g1.n_points(); ++i)
      v[i] = std::cos(g1.point(i)[0]);
    const SpectralField f = transform(g1, v);
    check("transform.cosine",
          close(f.mode({1, 0}).real(), 0.5, 1e-13) &&
              close(f.mode({-1, 0}).real(), 0.5, 1e-13) &&
              std::abs(f.mode({1, 0}).imag()) < 1e-13,
          "cos x splits into equal real +-1 coefficients");
  }
  {
    const Multiplier id = semigroup_symbol(g1, 0.0);
    bool ok = true;
    for (const auto& s : id.symbol) ok = ok && close(s.real(), 1.0, 1e-15);
    check("semigroup.identity_at_t0", ok, "S_0 must be the identity");
    const SpectralField c = constant_field(g1, 1.0);
    const SpectralField sc = apply(semigroup_symbol(g1, 1.0), c);
    check("semigroup.constant_decay",
          close(sc.mode({0, 0}).real(), std::exp(-1.0), 1e-14),
          "constant field scales by e^{-1}");
  }
  {
    const SpectralField c = constant_field(g1, 2.5);
    check("frac_power.identity",
          close(apply(frac_power_symbol(g1, 0.0), c).mode({0, 0}).real(), 2.5,
                1e-15) &&
              close(apply(frac_power_symbol(g1, 0.7), c).mode({0, 0}).real(),
                    2.5, 1e-15),
          "delta=0 and constant fields are unchanged");
  }
  {
    std::vector<SpectralField> components(1, constant_field(g1, 4.0));
    const SpectralField dv = spdelab::apply(inv_sqrt_div_symbol(g1), std::span<const SpectralField>(components));
    double biggest = 0.0;
    for (const auto& c : dv.coeffs) biggest = std::max(biggest, std::abs(c));
    check("inv_sqrt_div.constant", biggest < 1e-14,
          "divergence of a constant vector field vanishes");
  }
  {
    SpectralField u = random_smooth_field(g1, 1.0, 1.0, 11);
    const SpectralField a =
        apply(semigroup_symbol(g1, 0.3), apply(semigroup_symbol(g1, 0.4), u));
    const SpectralField b = apply(semigroup_symbol(g1, 0.7), u);
    double gap = 0.0;
    for (std::size_t i = 0; i < u.coeffs.size(); ++i)
      gap = std::max(gap, std::abs(a.coeffs[i] - b.coeffs[i]));
    check("semigroup.composition", gap < 1e-12, "S_t S_s = S_{t+s}");
    const SpectralField c = apply(frac_power_symbol(g1, -0.6),
                                  apply(frac_power_symbol(g1, 0.6), u));
    gap = 0.0;
    for (std::size_t i = 0; i < u.coeffs.size(); ++i)
      gap = std::max(gap, std::abs(c.coeffs[i] - u.coeffs[i]));
    check("frac_power.inverse", gap < 1e-12, "opposite powers cancel");
  }
  {
    const SpectralField c = constant_field(g1, -2.0);
    check("norm.constant_lp",
          close(norm_lp(c, 3.0), 2.0 * std::pow(2.0 * kPi, 1.0 / 3.0), 1e-12),
          "|c| (2pi)^{1/p}");
    check("norm.constant_bessel",
          close(norm_bessel(c, 1.7, 2.0), norm_lp(c, 2.0), 1e-13),
          "only the k=0 symbol acts on constants");
  }

  {
    const NoiseDriver driver{42, 2};
    const auto a = sample_increments(driver, 5, 16, 0.25, 0);
    const auto b = sample_increments(driver, 5, 16, 0.25, 0);
    check("noise.deterministic", a.table == b.table,
          "same (seed, index) must reproduce the table");
    const SpectralField z = zero_field(g1);
    std::vector<SpectralField> zs = {z, z};
    check("noise.gamma_zero", gamma_norm(zs, 2.0) == 0.0, "zero fields");
    std::vector<SpectralField> one = {constant_field(g1, 3.0)};
    check("noise.gamma_single",
          close(gamma_norm(one, 2.0), norm_lp(one[0], 2.0), 1e-15),
          "d=1 reduces to the L^p norm");
  }

  {
    check("beta.substitution_invariance",
          close(beta_identity(0.3, 0.0, 1.0, 256),
                beta_identity(0.3, 0.3, 2.7, 256), 1e-10),
          "affine substitution leaves the value unchanged");
    const TorusGrid g = make_grid(1, 8, 8);
    const SpectralField zero = zero_field(g);
    const DiffusionPath zpath =
        constant_diffusion_path(std::span(&zero, 1), 16, 0.01);
    const auto incs = sample_increments(NoiseDriver{7, 1}, 0, 16, 0.01, 0);
    check("conv.direct_zero",
          relative_l2_distance(direct_conv(zpath, incs, 0.5),
                               direct_conv(zpath, incs, 0.5)) == 0.0 &&
              norm_lp(direct_conv(zpath, incs, 0.5).field_at(16), 2.0) == 0.0,
          "B=0 gives the zero path");
    check("conv.factor_zero",
          norm_lp(factor_conv(zpath, incs, FactorizationConfig{0.3, 0.5})
                      .field_at(16),
                  2.0) == 0.0,
          "B=0 gives the zero path");
    const SpectralField B = constant_field(g, 1.0);
    const DiffusionPath bpath =
        constant_diffusion_path(std::span(&B, 1), 16, 0.01);
    const PathOfFields y =
        factor_Y(bpath, incs, 1e-4, QuadratureRule::kernel_averaged);
    const PathOfFields d0 = direct_conv(bpath, incs, 0.0);
    check("conv.factor_Y_alpha_to_zero",
          relative_l2_distance(y, d0) < 1e-3,
          "kernel tends to 1 as alpha -> 0");
  }
  {
    const TorusGrid g = make_grid(1, 8, 8);
    PathOfFields fpath(g, 0.05, 21);
    for (std::size_t j = 0; j < 21; ++j)
      fpath.set(j, constant_field(g, 2.0));
    const PathOfFields drift = drift_conv(fpath, 0.0);
    const double got = drift.field_at(20).mode({0, 0}).real();
    check("conv.drift_constant_exact",
          close(got, 2.0 * (1.0 - std::exp(-1.0)), 1e-13),
          "mode zero integrates the scalar ODE exactly");
    const PathOfFields empty = drift_conv(PathOfFields(g, 0.05, 21), 0.3);
    check("conv.drift_zero", norm_lp(empty.field_at(20), 2.0) == 0.0, "F=0");
  }

  {
    const TorusGrid g = make_grid(1, 16, 32);
    ProblemSpec spec;
    spec.F = FunctionSpec::identity();
    const SpectralField u = random_smooth_field(g, 0.8, 1.5, 3);
    const SpectralField img = nemytskii_F(spec, u);
    double gap = 0.0;
    for (std::size_t i = 0; i < u.coeffs.size(); ++i)
      gap = std::max(gap, std::abs(img.coeffs[i] - u.coeffs[i]));
    check("nemytskii.identity", gap < 1e-12, "F = id reproduces the field");

    spec.F = FunctionSpec::sine();
    check("nemytskii.sin_of_zero",
          norm_lp(nemytskii_F(spec, zero_field(g)), 2.0) == 0.0, "sin(0)=0");

    ProblemSpec cos_spec;
    cos_spec.B = {FunctionSpec::cosine()};
    const auto images = nemytskii_B(cos_spec, zero_field(g));
    check("nemytskii.cos_of_zero",
          close(images[0].mode({0, 0}).real(), 1.0, 1e-13) &&
              close(gamma_norm(images, 2.0), std::sqrt(2.0 * kPi), 1e-12),
          "cos(0) = 1 with gamma norm (2pi)^{1/2}");

    ProblemSpec lin;
    lin.F = FunctionSpec::identity();
    const GrowthConstants gc = growth_constants(lin, g, 24, 99);
    check("growth.identity_lipschitz", close(gc.lip_F, 1.0, 1e-10),
          "identity has Lipschitz constant 1");
  }
  {
    const TorusGrid g = make_grid(1, 16, 32);
    SolveConfig cfg;
    cfg.grid = g;
    cfg.dt = 1e-2;
    cfg.q = 8;
    ProblemSpec spec;
    spec.T = 0.5;
    spec.u0 = InitialCondition::function_of_x(FunctionSpec::sine(), 1.0);
    const auto incs = sample_increments(NoiseDriver{1, 1}, 0, 50, 1e-2, 0);
    const Trajectory traj = picard_solve(spec, cfg, incs);
    check("picard.heat_flow_one_iteration",
          traj.log.total_iterations == 1 && traj.log.segments.size() == 1,
          "F=B=0 converges immediately");
    const Trajectory euler = euler_solve(spec, cfg, incs);
    const SpectralField expect =
        apply(semigroup_symbol(g, 0.5),
              InitialCondition::function_of_x(FunctionSpec::sine(), 1.0)
                  .realize(g));
    double gap = 0.0;
    for (std::size_t i = 0; i < expect.coeffs.size(); ++i)
      gap = std::max(gap,
                     std::abs(euler.path.at(50)[i] - expect.coeffs[i]));
    check("euler.pure_heat_exact", gap < 1e-12, "u_n = S_{n dt} u0 exactly");

    ProblemSpec additive = spec;
    additive.mu = 1.0;
    additive.delta1 = 0.5;
    additive.B = {FunctionSpec::constant(1.0)};
    const Trajectory t2 = picard_solve(additive, cfg, incs);
    const SpectralField B = constant_field(g, 1.0);
    const DiffusionPath bpath =
        constant_diffusion_path(std::span(&B, 1), 50, 1e-2);
    const PathOfFields conv = direct_conv(bpath, incs, 0.5);
    double gap2 = 0.0;
    for (std::size_t j = 0; j <= 50; ++j) {
      const auto a = t2.path.at(j);
      const auto b = conv.at(j);
      const auto c = apply(semigroup_symbol(g, 1e-2 * j),
                           spec.u0.realize(g));
      for (std::size_t i = 0; i < a.size(); ++i)
        gap2 = std::max(gap2, std::abs(a[i] - b[i] - c.coeffs[i]));
    }
    check("picard.additive_fixed_point",
          gap2 < 1e-12 && t2.log.total_iterations <= 2,
          "K is constant in u for additive noise");
  }

  {
    std::vector<double> flat(11, 1.0);
    const auto det = mc_sup_moment(
        [&](std::size_t) { return flat; }, 2.0, 8, 1);
    check("mc.deterministic_sup", close(det.mean, 1.0, 1e-15) && det.se == 0.0,
          "mu=0 gives the single-path supremum with zero SE");
    const TorusGrid g = make_grid(1, 8, 8);
    PathOfFields constant_path(g, 0.1, 11);
    for (std::size_t j = 0; j < 11; ++j)
      constant_path.set(j, constant_field(g, 1.0));
    check("frac_sobolev.constant_path",
          frac_time_sobolev(constant_path, 0.25).sq_semi == 0.0,
          "constant paths have zero seminorm");
    const auto incs = sample_increments(NoiseDriver{3, 1}, 0, 200, 5e-3, 0);
    const SpectralField B = unit_coefficient_field(g);
    const DiffusionPath bpath =
        constant_diffusion_path(std::span(&B, 1), 200, 5e-3);
    const PathOfFields conv = direct_conv(bpath, incs, 0.5);
    const double s1 = frac_time_sobolev(conv, 0.1).sq_semi;
    const double s2 = frac_time_sobolev(conv, 0.25).sq_semi;
    const double s3 = frac_time_sobolev(conv, 0.4).sq_semi;
    check("frac_sobolev.alpha_monotone", s1 < s2 && s2 < s3,
          "more singular kernels grow the seminorm (T <= 1)");
    bool threw = false;
    try {
      assembled_constant(0.35, 8.0, 0.5);
    } catch (const std::invalid_argument&) {
      threw = true;
    }
    check("assembled_constant.lambda_gate", threw,
          "lambda >= 1 must be rejected");
    const AlphaOptimum opt = minimize_assembled_constant(8.0, 0.5);
    check("assembled_constant.interior_optimum",
          opt.alpha > 0.375 && opt.alpha < 0.5 &&
              opt.value < assembled_constant(0.38, 8.0, 0.5) &&
              opt.value < assembled_constant(0.499, 8.0, 0.5),
          "optimum sits inside the feasible window");
  }

  {
    bool threw = false;
    try {
      maxineq_scaling(make_grid(1, 8, 8), NoiseDriver{1, 1}, 0.5, 4.0,
                      {0.1, 0.2, 0.4, 0.8}, 4,
                      constant_field(make_grid(1, 8, 8), 1.0), 0.05, 1);
    } catch (const std::invalid_argument&) {
      threw = true;
    }
    check("maxineq.hypothesis_gate", threw,
          "q <= 2/(1-delta) must be refused");
  }

  return out;
}

}  // namespace spdelab
