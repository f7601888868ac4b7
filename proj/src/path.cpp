#include "spdelab/path.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "spdelab/norms.hpp"

namespace spdelab {

SpectralField PathOfFields::field_at(std::size_t i) const {
  SpectralField f(grid);
  const auto src = at(i);
  std::copy(src.begin(), src.end(), f.coeffs.begin());
  return f;
}

void PathOfFields::set(std::size_t i, const SpectralField& f) {
  if (!grid.compatible(f.grid))
    throw std::invalid_argument("PathOfFields::set: grid mismatch");
  auto dst = at(i);
  std::copy(f.coeffs.begin(), f.coeffs.end(), dst.begin());
}

DiffusionPath constant_diffusion_path(std::span<const SpectralField> fields,
                                      std::size_t n_steps, double dt) {
  if (fields.empty())
    throw std::invalid_argument("constant_diffusion_path: no fields");
  DiffusionPath path(fields[0].grid, dt, n_steps + 1,
                     static_cast<int>(fields.size()));
  for (std::size_t i = 0; i < path.n_times; ++i)
    for (int c = 0; c < path.d; ++c) {
      auto dst = path.at(i, c);
      const auto& src = fields[static_cast<std::size_t>(c)].coeffs;
      std::copy(src.begin(), src.end(), dst.begin());
    }
  return path;
}

std::vector<double> path_norms_lp(const PathOfFields& path, double p) {
  std::vector<double> out(path.n_times);
  if (p == 2.0) {
    const double vol = std::pow(2.0 * std::numbers::pi, path.grid.dim());
    for (std::size_t i = 0; i < path.n_times; ++i) {
      double sum = 0.0;
      for (const auto& c : path.at(i)) sum += std::norm(c);
      out[i] = std::sqrt(vol * sum);
    }
    return out;
  }
  for (std::size_t i = 0; i < path.n_times; ++i)
    out[i] = norm_lp(path.field_at(i), p);
  return out;
}

double relative_l2_distance(const PathOfFields& a, const PathOfFields& b) {
  if (!a.grid.compatible(b.grid) || a.n_times != b.n_times)
    throw std::invalid_argument("relative_l2_distance: incompatible paths");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    num += std::norm(a.data[i] - b.data[i]);
    den += std::norm(b.data[i]);
  }
  if (den == 0.0) return num == 0.0 ? 0.0 : INFINITY;
  return std::sqrt(num / den);
}

PathOfFields thin_path(const PathOfFields& path, std::size_t stride) {
  if (stride < 1) throw std::invalid_argument("thin_path: stride must be >= 1");
  const std::size_t n_out = (path.n_times + stride - 1) / stride;
  PathOfFields out(path.grid, path.dt * static_cast<double>(stride), n_out);
  for (std::size_t i = 0; i < n_out; ++i) {
    const auto src = path.at(i * stride);
    auto dst = out.at(i);
    std::copy(src.begin(), src.end(), dst.begin());
  }
  return out;
}

void write_path_csv(std::ostream& os, const PathOfFields& path) {
  const auto& g = path.grid;
  os << "# spdelab path v1\n";
  os << "# dim=" << g.dim() << " K=" << g.modes_per_dim()
     << " M=" << g.points_per_dim() << " dt=" << path.dt
     << " n_times=" << path.n_times << "\n";
  os << "time,k1,k2,re,im\n";
  char line[128];
  for (std::size_t i = 0; i < path.n_times; ++i) {
    const auto row = path.at(i);
    for (std::size_t m = 0; m < g.n_modes(); ++m) {
      const auto k = g.wavevector(m);
      std::snprintf(line, sizeof line, "%.17g,%d,%d,%.17g,%.17g\n",
                    path.time(i), k[0], k[1], row[m].real(), row[m].imag());
      os << line;
    }
  }
}

}  // namespace spdelab
