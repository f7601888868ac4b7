#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace spdelab {

struct SpectralField;

/// Counter-based generator: every draw is a pure function of (key, counter),
/// so streams can be sampled in any order, in parallel, and in chunks without
/// carrying state. Mixing is the 64-bit splitmix finalizer.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(key) {}

  static std::uint64_t mix(std::uint64_t z);
  /// Stream key for substream `index` of `master_seed`.
  static std::uint64_t derive_key(std::uint64_t master_seed, std::uint64_t index);

  /// Uniform in (0,1), indexed by a (counter, slot) pair.
  double uniform(std::uint64_t counter, std::uint64_t slot) const;

  /// Standard normal via Box-Muller on two indexed uniforms.
  double normal(std::uint64_t counter, std::uint64_t slot) const;

 private:
  std::uint64_t key_;
};

/// Source of reproducible d-dimensional Brownian increment streams. Sample i
/// depends only on (master_seed, i); distinct indices give independent
/// streams regardless of scheduling.
struct NoiseDriver {
  std::uint64_t master_seed = 0;
  int d = 1;
};

/// Table of Brownian increments: entry (i, j) is the increment of beta^i over
/// time cell j, distributed N(0, dt).
struct BrownianIncrements {
  int d = 1;
  std::size_t n_steps = 0;
  double dt = 0.0;
  std::vector<double> table;  // d * n_steps, component-major

  double at(int component, std::size_t step) const {
    return table[static_cast<std::size_t>(component) * n_steps + step];
  }

  /// Contiguous increments of one Brownian component.
  std::span<const double> component(int i) const {
    return {table.data() + static_cast<std::size_t>(i) * n_steps, n_steps};
  }

  /// Sub-block [first, first+count) of time cells, same components.
  BrownianIncrements slice(std::size_t first, std::size_t count) const;
};

/// Draws the increment table for one sample index. The stream advances by
/// absolute step index: the table for steps [0, n) equals the concatenation
/// of the tables for [0, n/2) and [n/2, n) requested via `first_step`.
BrownianIncrements sample_increments(const NoiseDriver& driver,
                                     std::uint64_t sample_index,
                                     std::size_t n_steps, double dt,
                                     std::size_t first_step = 0);

/// Finite-dimensional realization of the gamma-radonifying norm of the
/// diffusion image: (sum_i ||field_i||_{L^p}^2)^(1/2). Coincides with the
/// Hilbert-Schmidt norm L_2(U, L^2) at p = 2.
double gamma_norm(std::span<const SpectralField> fields, double p);

/// Replay layout: header + one "step,component,value" row per entry.
void write_increments_csv(std::ostream& os, const BrownianIncrements& incs);

}  // namespace spdelab
