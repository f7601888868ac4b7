#include "spdelab/field.hpp"

#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "spdelab/noise.hpp"

namespace spdelab {

namespace {
void require_same_grid(const SpectralField& a, const SpectralField& b,
                       const char* what) {
  if (!a.grid.compatible(b.grid))
    throw std::invalid_argument(std::string(what) + ": grid mismatch");
}
}  // namespace

std::complex<double> SpectralField::mode(std::array<int, 2> k) const {
  const std::size_t idx = grid.index_of(k);
  if (idx == TorusGrid::npos)
    throw std::invalid_argument("mode: wavevector outside lattice");
  return coeffs[idx];
}

void SpectralField::set_mode(std::array<int, 2> k, std::complex<double> v) {
  const std::size_t idx = grid.index_of(k);
  if (idx == TorusGrid::npos)
    throw std::invalid_argument("set_mode: wavevector outside lattice");
  coeffs[idx] = v;
}

SpectralField& SpectralField::operator+=(const SpectralField& rhs) {
  require_same_grid(*this, rhs, "field +=");
  for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] += rhs.coeffs[i];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& rhs) {
  require_same_grid(*this, rhs, "field -=");
  for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] -= rhs.coeffs[i];
  return *this;
}

SpectralField& SpectralField::operator*=(double s) {
  for (auto& c : coeffs) c *= s;
  return *this;
}

SpectralField operator+(SpectralField lhs, const SpectralField& rhs) {
  lhs += rhs;
  return lhs;
}

SpectralField operator-(SpectralField lhs, const SpectralField& rhs) {
  lhs -= rhs;
  return lhs;
}

SpectralField operator*(double s, SpectralField f) {
  f *= s;
  return f;
}

SpectralField zero_field(const TorusGrid& grid) { return SpectralField(grid); }

SpectralField constant_field(const TorusGrid& grid, double value) {
  SpectralField f(grid);
  f.set_mode({0, 0}, value);
  return f;
}

SpectralField unit_coefficient_field(const TorusGrid& grid, double amplitude) {
  SpectralField f(grid);
  for (std::size_t i = 0; i < grid.n_modes(); ++i)
    f.coeffs[i] = grid.is_nyquist(i) ? 0.0 : amplitude;
  return f;
}

SpectralField random_smooth_field(const TorusGrid& grid, double amplitude,
                                  double decay_r, std::uint64_t seed) {
  SpectralField f(grid);
  CounterRng rng(seed);
  for (std::size_t i = 0; i < grid.n_modes(); ++i) {
    if (grid.is_nyquist(i)) continue;
    const auto k = grid.wavevector(i);
    // fill each Hermitian pair once, from its k >= 0 representative
    if (k[0] < 0 || (k[0] == 0 && k[1] < 0)) continue;
    const double mag = amplitude * std::pow(grid.lambda(i), -decay_r);
    const double phase =
        2.0 * std::numbers::pi * rng.uniform(i, 0);
    const std::complex<double> c = std::polar(mag, phase);
    if (k[0] == 0 && k[1] == 0) {
      f.coeffs[i] = mag;  // mean stays real
      continue;
    }
    f.coeffs[i] = c;
    const std::size_t j = grid.index_of({-k[0], -k[1]});
    f.coeffs[j] = std::conj(c);
  }
  return f;
}

SpectralField transform(const TorusGrid& grid, std::span<const double> values) {
  if (values.size() != grid.n_points())
    throw std::invalid_argument("transform: values not sized to grid");
  SpectralField f(grid);
  grid.dft_forward(values, f.coeffs);
  return f;
}

std::vector<double> inverse_transform(const SpectralField& field) {
  std::vector<double> values(field.grid.n_points());
  field.grid.dft_inverse(field.coeffs, values);
  return values;
}

double hermitian_defect(const SpectralField& field) {
  const auto& g = field.grid;
  double worst = 0.0;
  for (std::size_t i = 0; i < g.n_modes(); ++i) {
    const auto k = g.wavevector(i);
    const std::size_t j = g.index_of({-k[0], -k[1]});
    if (j == TorusGrid::npos) {
      // Nyquist: self-conjugate only through aliasing, so require realness
      worst = std::max(worst, std::abs(field.coeffs[i].imag()));
      continue;
    }
    worst = std::max(worst,
                     std::abs(field.coeffs[i] - std::conj(field.coeffs[j])));
  }
  return worst;
}

double plancherel_defect(const SpectralField& field) {
  const auto values = inverse_transform(field);
  double quad = 0.0;
  for (double v : values) quad += v * v;
  quad *= field.grid.cell_weight();
  const double vol = std::pow(2.0 * std::numbers::pi, field.grid.dim());
  double spec = 0.0;
  for (const auto& c : field.coeffs) spec += std::norm(c);
  spec *= vol;
  const double scale = std::max(quad, spec);
  if (scale == 0.0) return 0.0;
  return std::abs(quad - spec) / scale;
}

void write_field_csv(std::ostream& os, const SpectralField& field) {
  const auto& g = field.grid;
  os << "# spdelab field v1\n";
  os << "# dim=" << g.dim() << " K=" << g.modes_per_dim()
     << " M=" << g.points_per_dim() << "\n";
  os << "k1,k2,re,im\n";
  char line[96];
  for (std::size_t i = 0; i < g.n_modes(); ++i) {
    const auto k = g.wavevector(i);
    std::snprintf(line, sizeof line, "%d,%d,%.17g,%.17g\n", k[0], k[1],
                  field.coeffs[i].real(), field.coeffs[i].imag());
    os << line;
  }
}

std::string field_to_csv(const SpectralField& field) {
  std::ostringstream os;
  write_field_csv(os, field);
  return os.str();
}

SpectralField read_field_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("# spdelab field", 0) != 0)
    throw std::runtime_error("read_field_csv: missing header");
  if (!std::getline(is, line))
    throw std::runtime_error("read_field_csv: missing size line");
  int dim = 0, K = 0, M = 0;
  if (std::sscanf(line.c_str(), "# dim=%d K=%d M=%d", &dim, &K, &M) != 3)
    throw std::runtime_error("read_field_csv: bad size line");
  std::getline(is, line);  // column names
  SpectralField f(make_grid(dim, K, M));
  for (std::size_t i = 0; i < f.grid.n_modes(); ++i) {
    if (!std::getline(is, line))
      throw std::runtime_error("read_field_csv: truncated table");
    int k1 = 0, k2 = 0;
    double re = 0.0, im = 0.0;
    if (std::sscanf(line.c_str(), "%d,%d,%lg,%lg", &k1, &k2, &re, &im) != 4)
      throw std::runtime_error("read_field_csv: bad row");
    f.coeffs[f.grid.index_of({k1, k2})] = {re, im};
  }
  return f;
}

}  // namespace spdelab
