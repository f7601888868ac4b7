#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "spdelab/field.hpp"
#include "spdelab/grid.hpp"

namespace spdelab {

/// Field-valued path on the uniform grid t_i = i*dt, i = 0..n_times-1.
/// Coefficients are stored contiguously, time-major.
struct PathOfFields {
  TorusGrid grid;
  double dt = 0.0;
  std::size_t n_times = 0;
  std::vector<std::complex<double>> data;  // n_times * n_modes

  PathOfFields() = default;
  PathOfFields(TorusGrid g, double step, std::size_t times)
      : grid(std::move(g)),
        dt(step),
        n_times(times),
        data(times * grid.n_modes(), 0.0) {}

  std::size_t n_steps() const { return n_times == 0 ? 0 : n_times - 1; }
  double time(std::size_t i) const { return dt * static_cast<double>(i); }

  std::span<std::complex<double>> at(std::size_t i) {
    return {data.data() + i * grid.n_modes(), grid.n_modes()};
  }
  std::span<const std::complex<double>> at(std::size_t i) const {
    return {data.data() + i * grid.n_modes(), grid.n_modes()};
  }

  SpectralField field_at(std::size_t i) const;
  void set(std::size_t i, const SpectralField& f);
};

/// d-tuple-of-fields path (one field per Brownian component per time).
struct DiffusionPath {
  TorusGrid grid;
  double dt = 0.0;
  std::size_t n_times = 0;
  int d = 1;
  std::vector<std::complex<double>> data;  // n_times * d * n_modes

  DiffusionPath() = default;
  DiffusionPath(TorusGrid g, double step, std::size_t times, int components)
      : grid(std::move(g)),
        dt(step),
        n_times(times),
        d(components),
        data(times * static_cast<std::size_t>(components) * grid.n_modes(),
             0.0) {}

  std::size_t n_steps() const { return n_times == 0 ? 0 : n_times - 1; }

  std::span<std::complex<double>> at(std::size_t i, int component) {
    const std::size_t nm = grid.n_modes();
    return {data.data() + (i * static_cast<std::size_t>(d) +
                           static_cast<std::size_t>(component)) *
                              nm,
            nm};
  }
  std::span<const std::complex<double>> at(std::size_t i, int component) const {
    const std::size_t nm = grid.n_modes();
    return {data.data() + (i * static_cast<std::size_t>(d) +
                           static_cast<std::size_t>(component)) *
                              nm,
            nm};
  }
};

/// Path that repeats the same d fields at every time (additive coefficients).
DiffusionPath constant_diffusion_path(std::span<const SpectralField> fields,
                                      std::size_t n_steps, double dt);

/// Per-time L^p norms of the path.
std::vector<double> path_norms_lp(const PathOfFields& path, double p);

/// Relative L^2([0,T] x torus) distance between two paths on one grid.
double relative_l2_distance(const PathOfFields& a, const PathOfFields& b);

/// Keeps every stride-th time (always including t = 0); the result is a path
/// with step stride*dt.
PathOfFields thin_path(const PathOfFields& path, std::size_t stride);

/// Export layout: header, then one "time,k1,k2,re,im" row per (time, mode).
void write_path_csv(std::ostream& os, const PathOfFields& path);

}  // namespace spdelab
