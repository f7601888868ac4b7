#include "spdelab/noise.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "spdelab/field.hpp"
#include "spdelab/norms.hpp"

namespace spdelab {

std::uint64_t CounterRng::mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t CounterRng::derive_key(std::uint64_t master_seed,
                                     std::uint64_t index) {
  return mix(mix(master_seed) ^ (index + 0x632be59bd9b4e019ULL));
}

double CounterRng::uniform(std::uint64_t counter, std::uint64_t slot) const {
  std::uint64_t z = mix(key_ ^ mix(counter + 0x8bb84b93962eacc9ULL * slot));
  // 53 mantissa bits, shifted away from 0 so log() below stays finite
  return (static_cast<double>(z >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::normal(std::uint64_t counter, std::uint64_t slot) const {
  const double u1 = uniform(counter, 2 * slot);
  const double u2 = uniform(counter, 2 * slot + 1);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

BrownianIncrements BrownianIncrements::slice(std::size_t first,
                                             std::size_t count) const {
  if (first + count > n_steps)
    throw std::invalid_argument("BrownianIncrements::slice: out of range");
  BrownianIncrements out;
  out.d = d;
  out.n_steps = count;
  out.dt = dt;
  out.table.resize(static_cast<std::size_t>(d) * count);
  for (int i = 0; i < d; ++i)
    for (std::size_t j = 0; j < count; ++j)
      out.table[static_cast<std::size_t>(i) * count + j] = at(i, first + j);
  return out;
}

BrownianIncrements sample_increments(const NoiseDriver& driver,
                                     std::uint64_t sample_index,
                                     std::size_t n_steps, double dt,
                                     std::size_t first_step) {
  if (n_steps < 1) throw std::invalid_argument("sample_increments: n_steps < 1");
  if (!(dt > 0.0)) throw std::invalid_argument("sample_increments: dt <= 0");
  if (driver.d < 1) throw std::invalid_argument("sample_increments: d < 1");

  BrownianIncrements incs;
  incs.d = driver.d;
  incs.n_steps = n_steps;
  incs.dt = dt;
  incs.table.resize(static_cast<std::size_t>(driver.d) * n_steps);
  const CounterRng rng(CounterRng::derive_key(driver.master_seed, sample_index));
  const double scale = std::sqrt(dt);
  for (int i = 0; i < driver.d; ++i)
    for (std::size_t j = 0; j < n_steps; ++j)
      incs.table[static_cast<std::size_t>(i) * n_steps + j] =
          scale * rng.normal(first_step + j, static_cast<std::uint64_t>(i));
  return incs;
}

double gamma_norm(std::span<const SpectralField> fields, double p) {
  if (fields.empty()) throw std::invalid_argument("gamma_norm: empty list");
  double sum = 0.0;
  for (const auto& f : fields) {
    const double n = norm_lp(f, p);
    sum += n * n;
  }
  return std::sqrt(sum);
}

void write_increments_csv(std::ostream& os, const BrownianIncrements& incs) {
  os << "# spdelab increments v1\n";
  os << "# d=" << incs.d << " n_steps=" << incs.n_steps << " dt=" << incs.dt
     << "\n";
  os << "step,component,value\n";
  char line[64];
  for (std::size_t j = 0; j < incs.n_steps; ++j)
    for (int i = 0; i < incs.d; ++i) {
      std::snprintf(line, sizeof line, "%zu,%d,%.17g\n", j, i, incs.at(i, j));
      os << line;
    }
}

}  // namespace spdelab
