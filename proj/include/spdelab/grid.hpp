#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace spdelab {

/// Uniform grid on the torus [0,2pi)^N with a truncated frequency lattice.
///
/// The retained lattice per dimension is {-K/2+1, ..., K/2} for an even mode
/// count K; physical collocation uses M >= K points per dimension. Handles are
/// cheap to copy: the lattice tables and FFT plans live in a shared immutable
/// implementation, so grids can be passed around and used from several threads
/// at once.
class TorusGrid {
 public:
  TorusGrid() = default;

  int dim() const;
  int modes_per_dim() const;
  int points_per_dim() const;
  std::size_t n_modes() const;   // K^dim
  std::size_t n_points() const;  // M^dim

  /// Wavevector of the flat lattice index (lexicographic order, k1 fastest
  /// varying last; unused components are zero for dim == 1).
  std::array<int, 2> wavevector(std::size_t idx) const;

  /// |k|^2 + 1 at the flat lattice index (spectrum of -Delta + 1).
  double lambda(std::size_t idx) const;
  std::span<const double> lambdas() const;

  /// True if any component of the wavevector equals K/2 (the mode with no
  /// conjugate partner on the lattice).
  bool is_nyquist(std::size_t idx) const;

  /// Flat index of the wavevector, or npos if outside the lattice.
  std::size_t index_of(std::array<int, 2> k) const;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  /// Quadrature weight of one collocation cell, (2pi/M)^dim. Weights sum to
  /// (2pi)^dim.
  double cell_weight() const;

  /// Collocation point coordinates of a flat point index.
  std::array<double, 2> point(std::size_t idx) const;

  bool compatible(const TorusGrid& other) const;
  explicit operator bool() const { return impl_ != nullptr; }

  // Full-size discrete Fourier transform between M^dim real samples and the
  // retained coefficient table. Used by transform()/inverse_transform().
  void dft_forward(std::span<const double> values,
                   std::span<std::complex<double>> coeffs) const;
  void dft_inverse(std::span<const std::complex<double>> coeffs,
                   std::span<double> values) const;

 private:
  struct Impl;
  explicit TorusGrid(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;

  friend TorusGrid make_grid(int dim, int modes_per_dim, int points_per_dim);
};

/// Builds a grid. Rejects dim outside {1,2}, odd or undersized mode counts
/// (K even, >= 4) and M < K.
TorusGrid make_grid(int dim, int modes_per_dim, int points_per_dim);

}  // namespace spdelab
