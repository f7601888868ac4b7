#include "spdelab/norms.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "spdelab/multiplier.hpp"

namespace spdelab {

namespace {
double volume(const TorusGrid& grid) {
  return std::pow(2.0 * std::numbers::pi, grid.dim());
}
}  // namespace

double norm_lp(const SpectralField& field, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("norm_lp: p must be >= 1");
  if (p == 2.0) {
    double sum = 0.0;
    for (const auto& c : field.coeffs) sum += std::norm(c);
    return std::sqrt(volume(field.grid) * sum);
  }
  const auto values = inverse_transform(field);
  double sum = 0.0;
  for (double v : values) sum += std::pow(std::abs(v), p);
  return std::pow(field.grid.cell_weight() * sum, 1.0 / p);
}

double norm_sobolev(const SpectralField& field, int m, double p) {
  if (m < 0) throw std::invalid_argument("norm_sobolev: m must be >= 0");
  if (!(p >= 1.0)) throw std::invalid_argument("norm_sobolev: p must be >= 1");
  const auto& grid = field.grid;
  const int nyq = grid.modes_per_dim() / 2;

  double total = 0.0;
  auto add_term = [&](int b1, int b2) {
    SpectralField deriv(grid);
    for (std::size_t i = 0; i < grid.n_modes(); ++i) {
      const auto k = grid.wavevector(i);
      if ((b1 > 0 && k[0] == nyq) || (b2 > 0 && k[1] == nyq)) continue;
      std::complex<double> factor(1.0, 0.0);
      const std::complex<double> ik1(0.0, static_cast<double>(k[0]));
      const std::complex<double> ik2(0.0, static_cast<double>(k[1]));
      for (int b = 0; b < b1; ++b) factor *= ik1;
      for (int b = 0; b < b2; ++b) factor *= ik2;
      deriv.coeffs[i] = factor * field.coeffs[i];
    }
    total += std::pow(norm_lp(deriv, p), p);
  };

  if (grid.dim() == 1) {
    for (int b = 0; b <= m; ++b) add_term(b, 0);
  } else {
    for (int b1 = 0; b1 <= m; ++b1)
      for (int b2 = 0; b1 + b2 <= m; ++b2) add_term(b1, b2);
  }
  return std::pow(total, 1.0 / p);
}

double norm_bessel(const SpectralField& field, double alpha, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("norm_bessel: p must be >= 1");
  if (p == 2.0) {
    double sum = 0.0;
    for (std::size_t i = 0; i < field.coeffs.size(); ++i)
      sum += std::pow(field.grid.lambda(i), alpha) * std::norm(field.coeffs[i]);
    return std::sqrt(volume(field.grid) * sum);
  }
  return norm_lp(apply(frac_power_symbol(field.grid, alpha), field), p);
}

}  // namespace spdelab
