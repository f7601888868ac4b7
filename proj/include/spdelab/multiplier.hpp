#pragma once

#include <complex>
#include <span>
#include <vector>

#include "spdelab/field.hpp"
#include "spdelab/grid.hpp"

namespace spdelab {

/// Fourier multiplier: one complex symbol value per retained lattice site.
/// Real-to-real operators satisfy symbol(-k) = conj(symbol(k)).
struct Multiplier {
  TorusGrid grid;
  std::vector<std::complex<double>> symbol;

  Multiplier() = default;
  explicit Multiplier(TorusGrid g)
      : grid(std::move(g)), symbol(grid.n_modes(), 1.0) {}
};

/// Symbol of S_t = exp(t(Delta - 1)): exp(-t(|k|^2+1)). Contraction for all
/// t >= 0; t = 0 is the identity. Negative t rejected.
Multiplier semigroup_symbol(const TorusGrid& grid, double t);

/// Symbol of (-Delta+1)^(delta/2): (|k|^2+1)^(delta/2), evaluated in
/// log-space. Any finite real delta (negative powers smooth).
Multiplier frac_power_symbol(const TorusGrid& grid, double delta);

/// Composition of exp(-t(|k|^2+1)) with (|k|^2+1)^(delta/2) in one symbol;
/// equals applying the two factors separately.
Multiplier frac_semigroup_symbol(const TorusGrid& grid, double delta, double t);

/// First derivative symbol (i k_axis) with the Nyquist mode zeroed (it has no
/// conjugate partner, so keeping it would break reality).
Multiplier derivative_symbol(const TorusGrid& grid, int axis);

/// Vector -> scalar symbol of (-Delta+1)^(-1/2) div: component j carries
/// (i k_j)(|k|^2+1)^(-1/2). Per-component modulus |k|(|k|^2+1)^(-1/2) <= 1.
struct VectorMultiplier {
  TorusGrid grid;
  std::vector<std::vector<std::complex<double>>> symbols;  // one per component
};

VectorMultiplier inv_sqrt_div_symbol(const TorusGrid& grid);

/// Pointwise product on the lattice. Grids must match.
SpectralField apply(const Multiplier& m, const SpectralField& f);

/// Applies a vector symbol to an N-vector of fields and sums components.
/// Rejects component count != grid dimension.
SpectralField apply(const VectorMultiplier& m,
                    std::span<const SpectralField> components);

}  // namespace spdelab
