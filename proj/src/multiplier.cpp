#include "spdelab/multiplier.hpp"

#include <cmath>
#include <stdexcept>

namespace spdelab {

Multiplier semigroup_symbol(const TorusGrid& grid, double t) {
  if (!(t >= 0.0))
    throw std::invalid_argument("semigroup_symbol: t must be >= 0");
  Multiplier m(grid);
  for (std::size_t i = 0; i < grid.n_modes(); ++i)
    m.symbol[i] = std::exp(-t * grid.lambda(i));
  return m;
}

Multiplier frac_power_symbol(const TorusGrid& grid, double delta) {
  if (!std::isfinite(delta))
    throw std::invalid_argument("frac_power_symbol: delta must be finite");
  Multiplier m(grid);
  for (std::size_t i = 0; i < grid.n_modes(); ++i)
    m.symbol[i] = std::exp(0.5 * delta * std::log(grid.lambda(i)));
  return m;
}

Multiplier frac_semigroup_symbol(const TorusGrid& grid, double delta, double t) {
  if (!(t >= 0.0))
    throw std::invalid_argument("frac_semigroup_symbol: t must be >= 0");
  Multiplier m(grid);
  for (std::size_t i = 0; i < grid.n_modes(); ++i) {
    const double lam = grid.lambda(i);
    m.symbol[i] = std::exp(0.5 * delta * std::log(lam) - t * lam);
  }
  return m;
}

Multiplier derivative_symbol(const TorusGrid& grid, int axis) {
  if (axis < 0 || axis >= grid.dim())
    throw std::invalid_argument("derivative_symbol: axis outside dimension");
  Multiplier m(grid);
  const int nyq = grid.modes_per_dim() / 2;
  for (std::size_t i = 0; i < grid.n_modes(); ++i) {
    const auto k = grid.wavevector(i);
    m.symbol[i] = (k[axis] == nyq)
                      ? std::complex<double>(0.0, 0.0)
                      : std::complex<double>(0.0, static_cast<double>(k[axis]));
  }
  return m;
}

VectorMultiplier inv_sqrt_div_symbol(const TorusGrid& grid) {
  VectorMultiplier m;
  m.grid = grid;
  m.symbols.resize(static_cast<std::size_t>(grid.dim()));
  const int nyq = grid.modes_per_dim() / 2;
  for (int axis = 0; axis < grid.dim(); ++axis) {
    auto& sym = m.symbols[static_cast<std::size_t>(axis)];
    sym.resize(grid.n_modes());
    for (std::size_t i = 0; i < grid.n_modes(); ++i) {
      const auto k = grid.wavevector(i);
      if (k[axis] == nyq) {
        sym[i] = 0.0;
        continue;
      }
      const double damp = std::exp(-0.5 * std::log(grid.lambda(i)));
      sym[i] = std::complex<double>(0.0, static_cast<double>(k[axis]) * damp);
    }
  }
  return m;
}

SpectralField apply(const Multiplier& m, const SpectralField& f) {
  if (!m.grid.compatible(f.grid))
    throw std::invalid_argument("apply: multiplier/field grid mismatch");
  SpectralField out(f.grid);
  for (std::size_t i = 0; i < out.coeffs.size(); ++i)
    out.coeffs[i] = m.symbol[i] * f.coeffs[i];
  return out;
}

SpectralField apply(const VectorMultiplier& m,
                    std::span<const SpectralField> components) {
  if (components.size() != static_cast<std::size_t>(m.grid.dim()))
    throw std::invalid_argument(
        "apply: component count does not match grid dimension");
  SpectralField out(m.grid);
  for (std::size_t a = 0; a < components.size(); ++a) {
    const auto& f = components[a];
    if (!m.grid.compatible(f.grid))
      throw std::invalid_argument("apply: vector multiplier grid mismatch");
    const auto& sym = m.symbols[a];
    for (std::size_t i = 0; i < out.coeffs.size(); ++i)
      out.coeffs[i] += sym[i] * f.coeffs[i];
  }
  return out;
}

}  // namespace spdelab
