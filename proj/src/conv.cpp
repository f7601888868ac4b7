#include "spdelab/conv.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace spdelab {

namespace {

// 16-point Gauss-Legendre nodes/weights on [-1,1].
constexpr double kGlNode[16] = {
    -0.9894009349916499, -0.9445750230732326, -0.8656312023878318,
    -0.7554044083550030, -0.6178762444026438, -0.4580167776572274,
    -0.2816035507792589, -0.0950125098376374, 0.0950125098376374,
    0.2816035507792589,  0.4580167776572274,  0.6178762444026438,
    0.7554044083550030,  0.8656312023878318,  0.9445750230732326,
    0.9894009349916499};
constexpr double kGlWeight[16] = {
    0.0271524594117541, 0.0622535239386479, 0.0951585116824928,
    0.1246289712555339, 0.1495959888165767, 0.1691565193950025,
    0.1826034150449236, 0.1894506104550685, 0.1894506104550685,
    0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
    0.1246289712555339, 0.0951585116824928, 0.0622535239386479,
    0.0271524594117541};

template <typename F>
double gauss_composite(F&& f, double a, double b, int panels) {
  double sum = 0.0;
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    double acc = 0.0;
    for (int i = 0; i < 16; ++i)
      acc += kGlWeight[i] * f(mid + 0.5 * h * kGlNode[i]);
    sum += 0.5 * h * acc;
  }
  return sum;
}

void check_pair(const DiffusionPath& B_path, const BrownianIncrements& incs) {
  if (B_path.n_times != incs.n_steps + 1)
    throw std::invalid_argument("convolution: path/increment time grids differ");
  if (std::abs(B_path.dt - incs.dt) >
      1e-12 * std::max(std::abs(B_path.dt), std::abs(incs.dt)))
    throw std::invalid_argument("convolution: path/increment dt differ");
  if (B_path.d != incs.d)
    throw std::invalid_argument("convolution: component counts differ");
}

// Noise image per time cell: g_j = sum_i B_i(t_j) dW^i_j, time-major.
std::vector<std::complex<double>> noise_images(const DiffusionPath& B_path,
                                               const BrownianIncrements& incs) {
  const std::size_t nm = B_path.grid.n_modes();
  const std::size_t n = incs.n_steps;
  std::vector<std::complex<double>> g(n * nm, 0.0);
  for (std::size_t j = 0; j < n; ++j)
    for (int c = 0; c < B_path.d; ++c) {
      const double w = incs.at(c, j);
      const auto b = B_path.at(j, c);
      for (std::size_t m = 0; m < nm; ++m) g[j * nm + m] += w * b[m];
    }
  return g;
}

PathOfFields direct_conv_impl(const DiffusionPath& B_path,
                              const BrownianIncrements& incs,
                              double exponent) {
  check_pair(B_path, incs);
  const auto& grid = B_path.grid;
  const std::size_t nm = grid.n_modes();
  const std::size_t n = incs.n_steps;
  const double dt = incs.dt;

  PathOfFields out(grid, dt, n + 1);
  std::vector<double> step(nm), inject(nm);
  for (std::size_t m = 0; m < nm; ++m) {
    const double lam = grid.lambda(m);
    step[m] = std::exp(-lam * dt);
    inject[m] = std::exp(0.5 * exponent * std::log(lam) - lam * dt);
  }
  const auto g = noise_images(B_path, incs);
  for (std::size_t j = 0; j < n; ++j) {
    const auto prev = out.at(j);
    auto next = out.at(j + 1);
    for (std::size_t m = 0; m < nm; ++m)
      next[m] = step[m] * prev[m] + inject[m] * g[j * nm + m];
  }
  return out;
}

// Lag weights of the Y kernel (s-sigma)^(-alpha); the final singular cell
// (m = 1) is exact under both rules.
std::vector<double> y_weights(std::size_t n, double dt, double alpha,
                              QuadratureRule rule) {
  std::vector<double> w(n + 1, 0.0);
  const double dpow = std::pow(dt, -alpha);
  for (std::size_t m = 1; m <= n; ++m) {
    if (rule == QuadratureRule::kernel_averaged || m == 1) {
      w[m] = dpow *
             (std::pow(static_cast<double>(m), 1.0 - alpha) -
              std::pow(static_cast<double>(m - 1), 1.0 - alpha)) /
             (1.0 - alpha);
    } else {
      w[m] = std::pow(static_cast<double>(m) * dt, -alpha);
    }
  }
  return w;
}

// Cell integrals of the G kernel (t-s)^(alpha-1); exact under both rules
// (this is the product-integration weight), m = 1 is the singular cell.
std::vector<double> g_weights(std::size_t n, double dt, double alpha,
                              QuadratureRule rule) {
  std::vector<double> v(n + 1, 0.0);
  const double dpow = std::pow(dt, alpha);
  for (std::size_t m = 1; m <= n; ++m) {
    if (rule == QuadratureRule::kernel_averaged || m == 1) {
      v[m] = dpow *
             (std::pow(static_cast<double>(m), alpha) -
              std::pow(static_cast<double>(m - 1), alpha)) /
             alpha;
    } else {
      v[m] = dt * std::pow(static_cast<double>(m) * dt, alpha - 1.0);
    }
  }
  return v;
}

}  // namespace

double beta_identity(double alpha, double sigma, double t, int n_quad) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("beta_identity: alpha must be in (0,1)");
  if (!(sigma < t))
    throw std::invalid_argument("beta_identity: requires sigma < t");
  if (n_quad < 1) throw std::invalid_argument("beta_identity: n_quad < 1");
  // Affine substitution maps to int_0^1 v^(-alpha) (1-v)^(alpha-1) dv; the
  // two endpoint singularities are removed by the power substitutions
  // v = x^(1/(1-alpha)) on [0,1/2] and 1-v = y^(1/alpha) on [1/2,1].
  const int panels = std::max(1, n_quad / 16);
  const double left = gauss_composite(
      [alpha](double x) {
        return std::pow(1.0 - std::pow(x, 1.0 / (1.0 - alpha)), alpha - 1.0);
      },
      0.0, std::pow(0.5, 1.0 - alpha), panels);
  const double right = gauss_composite(
      [alpha](double y) {
        return std::pow(1.0 - std::pow(y, 1.0 / alpha), -alpha);
      },
      0.0, std::pow(0.5, alpha), panels);
  return left / (1.0 - alpha) + right / alpha;
}

double factorization_lambda(double alpha, double delta, double p) {
  if (!(p > 1.0))
    throw std::invalid_argument("factorization_lambda: p must be > 1");
  return p / (p - 1.0) * (1.0 + 0.5 * delta - alpha);
}

PathOfFields direct_conv(const DiffusionPath& B_path,
                         const BrownianIncrements& incs, double delta1) {
  if (!(delta1 >= 0.0 && delta1 < 1.0))
    throw std::invalid_argument("direct_conv: delta1 must be in [0,1)");
  return direct_conv_impl(B_path, incs, delta1);
}

PathOfFields direct_conv_exponent(const DiffusionPath& B_path,
                                  const BrownianIncrements& incs,
                                  double exponent) {
  if (!std::isfinite(exponent))
    throw std::invalid_argument("direct_conv_exponent: non-finite exponent");
  return direct_conv_impl(B_path, incs, exponent);
}

PathOfFields factor_Y(const DiffusionPath& B_path,
                      const BrownianIncrements& incs, double alpha,
                      QuadratureRule rule) {
  if (!(alpha > 0.0 && alpha < 0.5))
    throw std::invalid_argument("factor_Y: alpha must be in (0,1/2)");
  check_pair(B_path, incs);
  const auto& grid = B_path.grid;
  const std::size_t nm = grid.n_modes();
  const std::size_t n = incs.n_steps;
  const double dt = incs.dt;

  PathOfFields out(grid, dt, n + 1);
  const auto g = noise_images(B_path, incs);
  const auto w = y_weights(n, dt, alpha, rule);

  std::vector<double> pw(n + 1);
  std::vector<std::complex<double>> gk(n);
  for (std::size_t m = 0; m < nm; ++m) {
    const double rho = std::exp(-grid.lambda(m) * dt);
    pw[0] = 1.0;
    for (std::size_t i = 1; i <= n; ++i) pw[i] = pw[i - 1] * rho;
    for (std::size_t l = 0; l < n; ++l) gk[l] = g[l * nm + m];
    for (std::size_t j = 1; j <= n; ++j) {
      std::complex<double> acc = 0.0;
      for (std::size_t lag = 1; lag <= j; ++lag)
        acc += w[lag] * pw[lag] * gk[j - lag];
      out.data[j * nm + m] = acc;
    }
  }
  return out;
}

PathOfFields factor_G(const PathOfFields& f_path, double alpha, double delta,
                      QuadratureRule rule) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("factor_G: alpha must be in (0,1)");
  const auto& grid = f_path.grid;
  const std::size_t nm = grid.n_modes();
  const std::size_t n = f_path.n_steps();
  const double dt = f_path.dt;

  PathOfFields out(grid, dt, n + 1);
  const auto v = g_weights(n, dt, alpha, rule);
  const bool right_aligned = rule == QuadratureRule::kernel_averaged;

  std::vector<double> pw(n + 1);
  std::vector<std::complex<double>> fk(n + 1);
  for (std::size_t m = 0; m < nm; ++m) {
    const double lam = grid.lambda(m);
    const double rho = std::exp(-lam * dt);
    const double fracpow = std::exp(0.5 * delta * std::log(lam));
    pw[0] = 1.0;
    for (std::size_t i = 1; i <= n; ++i) pw[i] = pw[i - 1] * rho;
    for (std::size_t l = 0; l <= n; ++l) fk[l] = f_path.data[l * nm + m];
    for (std::size_t j = 1; j <= n; ++j) {
      std::complex<double> acc = 0.0;
      if (right_aligned) {
        for (std::size_t lag = 1; lag <= j; ++lag)
          acc += v[lag] * pw[lag - 1] * fk[j - lag + 1];
      } else {
        for (std::size_t lag = 1; lag <= j; ++lag)
          acc += v[lag] * pw[lag] * fk[j - lag];
      }
      out.data[j * nm + m] = fracpow * acc;
    }
  }
  return out;
}

PathOfFields factor_conv(const DiffusionPath& B_path,
                         const BrownianIncrements& incs,
                         const FactorizationConfig& cfg) {
  if (!(cfg.delta >= 0.0 && cfg.delta < 1.0))
    throw std::invalid_argument("factor_conv: delta must be in [0,1)");
  const double scale = std::sin(std::numbers::pi * cfg.alpha) / std::numbers::pi;
  PathOfFields out =
      factor_G(factor_Y(B_path, incs, cfg.alpha, cfg.rule), cfg.alpha,
               cfg.delta, cfg.rule);
  for (auto& c : out.data) c *= scale;

  if (cfg.rule == QuadratureRule::kernel_averaged) {
    // Lag-one coefficient of G(Y) is the product of the two singular cell
    // integrals, scale/(alpha(1-alpha)); its exact value is the full beta
    // integral, i.e. 1. Close the corner cell in closed form.
    const double correction = 1.0 - scale / (cfg.alpha * (1.0 - cfg.alpha));
    const auto& grid = B_path.grid;
    const std::size_t nm = grid.n_modes();
    const double dt = incs.dt;
    std::vector<double> inject(nm);
    for (std::size_t m = 0; m < nm; ++m) {
      const double lam = grid.lambda(m);
      inject[m] =
          correction * std::exp(0.5 * cfg.delta * std::log(lam) - lam * dt);
    }
    const auto g = noise_images(B_path, incs);
    for (std::size_t j = 0; j < incs.n_steps; ++j) {
      auto row = out.at(j + 1);
      for (std::size_t m = 0; m < nm; ++m)
        row[m] += inject[m] * g[j * nm + m];
    }
  }
  return out;
}

PathOfFields drift_conv(const PathOfFields& F_path, double delta0) {
  if (!(delta0 >= 0.0 && delta0 < 1.0))
    throw std::invalid_argument("drift_conv: delta0 must be in [0,1)");
  const auto& grid = F_path.grid;
  const std::size_t nm = grid.n_modes();
  const std::size_t n = F_path.n_steps();
  const double dt = F_path.dt;

  PathOfFields out(grid, dt, n + 1);
  std::vector<double> step(nm), cell(nm);
  for (std::size_t m = 0; m < nm; ++m) {
    const double lam = grid.lambda(m);
    step[m] = std::exp(-lam * dt);
    // exact cell integral: lam^delta0 int_cell e^{-(t-s)lam} ds
    cell[m] = std::exp((delta0 - 1.0) * std::log(lam)) * (-std::expm1(-lam * dt));
  }
  for (std::size_t j = 0; j < n; ++j) {
    const auto prev = out.at(j);
    const auto f = F_path.at(j);
    auto next = out.at(j + 1);
    for (std::size_t m = 0; m < nm; ++m)
      next[m] = step[m] * prev[m] + cell[m] * f[m];
  }
  return out;
}

}  // namespace spdelab
