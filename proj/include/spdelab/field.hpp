#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "spdelab/grid.hpp"

namespace spdelab {

/// Real-valued function on the torus stored as truncated Fourier coefficients
/// in lexicographic lattice order. Reality is encoded as the Hermitian
/// symmetry coeffs(-k) = conj(coeffs(k)).
struct SpectralField {
  TorusGrid grid;
  std::vector<std::complex<double>> coeffs;

  SpectralField() = default;
  explicit SpectralField(TorusGrid g)
      : grid(std::move(g)), coeffs(grid.n_modes(), 0.0) {}

  std::complex<double> mode(std::array<int, 2> k) const;
  void set_mode(std::array<int, 2> k, std::complex<double> v);

  SpectralField& operator+=(const SpectralField& rhs);
  SpectralField& operator-=(const SpectralField& rhs);
  SpectralField& operator*=(double s);
};

SpectralField operator+(SpectralField lhs, const SpectralField& rhs);
SpectralField operator-(SpectralField lhs, const SpectralField& rhs);
SpectralField operator*(double s, SpectralField f);

SpectralField zero_field(const TorusGrid& grid);
SpectralField constant_field(const TorusGrid& grid, double value);

/// Field with every retained non-Nyquist coefficient equal to `amplitude`
/// (spatially white additive forcing; Hermitian by construction).
SpectralField unit_coefficient_field(const TorusGrid& grid, double amplitude = 1.0);

/// Seeded random real field with coefficient decay |c(k)| = amplitude *
/// (1+|k|^2)^(-decay_r) and uniformly random phases.
SpectralField random_smooth_field(const TorusGrid& grid, double amplitude,
                                  double decay_r, std::uint64_t seed);

/// Forward transform of real collocation values (size M^dim) to the retained
/// coefficient table. Rejects inputs not sized to the grid.
SpectralField transform(const TorusGrid& grid, std::span<const double> values);

/// Evaluates the truncated Fourier series on the collocation grid.
std::vector<double> inverse_transform(const SpectralField& field);

/// Max |coeffs(-k) - conj(coeffs(k))| over the lattice (0 for real fields).
double hermitian_defect(const SpectralField& field);

/// Discrete L2 norm computed two ways must agree (Plancherel); returns the
/// relative gap between quadrature and coefficient sums.
double plancherel_defect(const SpectralField& field);

// Snapshot layout: "# spdelab field v1", "# dim=<N> K=<K> M=<M>", header row,
// then one line per lattice site "k1,k2,re,im" in lexicographic order.
void write_field_csv(std::ostream& os, const SpectralField& field);
std::string field_to_csv(const SpectralField& field);
SpectralField read_field_csv(std::istream& is);

}  // namespace spdelab
