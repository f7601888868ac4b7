#include "spdelab/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace spdelab {

namespace {
// FFTW plan creation is not thread safe; executing distinct plans (or the
// new-array interface on one plan) is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct TorusGrid::Impl {
  int dim = 0;
  int K = 0;
  int M = 0;
  std::size_t n_modes = 0;
  std::size_t n_points = 0;
  std::vector<std::array<int, 2>> wavevectors;  // lexicographic lattice order
  std::vector<double> lambdas;                  // |k|^2 + 1
  std::vector<bool> nyquist;
  std::vector<std::size_t> fft_bin;  // lattice index -> bin in the M^dim DFT
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;

  ~Impl() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (inverse) fftw_destroy_plan(inverse);
  }
};

TorusGrid make_grid(int dim, int modes_per_dim, int points_per_dim) {
  if (dim != 1 && dim != 2)
    throw std::invalid_argument("make_grid: dim must be 1 or 2");
  if (modes_per_dim < 4 || modes_per_dim % 2 != 0)
    throw std::invalid_argument("make_grid: modes_per_dim must be even and >= 4");
  if (points_per_dim < modes_per_dim)
    throw std::invalid_argument("make_grid: points_per_dim must be >= modes_per_dim");

  auto impl = std::make_shared<TorusGrid::Impl>();
  impl->dim = dim;
  impl->K = modes_per_dim;
  impl->M = points_per_dim;
  const int K = modes_per_dim, M = points_per_dim;
  impl->n_modes = 1;
  impl->n_points = 1;
  for (int d = 0; d < dim; ++d) {
    impl->n_modes *= static_cast<std::size_t>(K);
    impl->n_points *= static_cast<std::size_t>(M);
  }

  impl->wavevectors.resize(impl->n_modes);
  impl->lambdas.resize(impl->n_modes);
  impl->nyquist.resize(impl->n_modes);
  impl->fft_bin.resize(impl->n_modes);
  const int kmin = -K / 2 + 1;
  for (std::size_t idx = 0; idx < impl->n_modes; ++idx) {
    std::array<int, 2> k{0, 0};
    if (dim == 1) {
      k[0] = kmin + static_cast<int>(idx);
    } else {
      k[0] = kmin + static_cast<int>(idx / static_cast<std::size_t>(K));
      k[1] = kmin + static_cast<int>(idx % static_cast<std::size_t>(K));
    }
    impl->wavevectors[idx] = k;
    impl->lambdas[idx] = 1.0 + static_cast<double>(k[0]) * k[0] +
                         static_cast<double>(k[1]) * k[1];
    impl->nyquist[idx] = (k[0] == K / 2) || (dim == 2 && k[1] == K / 2);
    const int b0 = ((k[0] % M) + M) % M;
    if (dim == 1) {
      impl->fft_bin[idx] = static_cast<std::size_t>(b0);
    } else {
      const int b1 = ((k[1] % M) + M) % M;
      impl->fft_bin[idx] =
          static_cast<std::size_t>(b0) * static_cast<std::size_t>(M) +
          static_cast<std::size_t>(b1);
    }
  }

  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    std::vector<std::complex<double>> a(impl->n_points), b(impl->n_points);
    auto* ap = reinterpret_cast<fftw_complex*>(a.data());
    auto* bp = reinterpret_cast<fftw_complex*>(b.data());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    if (dim == 1) {
      impl->forward = fftw_plan_dft_1d(M, ap, bp, FFTW_FORWARD, flags);
      impl->inverse = fftw_plan_dft_1d(M, ap, bp, FFTW_BACKWARD, flags);
    } else {
      impl->forward = fftw_plan_dft_2d(M, M, ap, bp, FFTW_FORWARD, flags);
      impl->inverse = fftw_plan_dft_2d(M, M, ap, bp, FFTW_BACKWARD, flags);
    }
  }
  return TorusGrid(std::move(impl));
}

int TorusGrid::dim() const { return impl_->dim; }
int TorusGrid::modes_per_dim() const { return impl_->K; }
int TorusGrid::points_per_dim() const { return impl_->M; }
std::size_t TorusGrid::n_modes() const { return impl_->n_modes; }
std::size_t TorusGrid::n_points() const { return impl_->n_points; }

std::array<int, 2> TorusGrid::wavevector(std::size_t idx) const {
  return impl_->wavevectors[idx];
}

double TorusGrid::lambda(std::size_t idx) const { return impl_->lambdas[idx]; }

std::span<const double> TorusGrid::lambdas() const {
  return {impl_->lambdas.data(), impl_->lambdas.size()};
}

bool TorusGrid::is_nyquist(std::size_t idx) const { return impl_->nyquist[idx]; }

std::size_t TorusGrid::index_of(std::array<int, 2> k) const {
  const int K = impl_->K;
  const int kmin = -K / 2 + 1;
  for (int d = 0; d < impl_->dim; ++d)
    if (k[d] < kmin || k[d] > K / 2) return npos;
  std::size_t idx = static_cast<std::size_t>(k[0] - kmin);
  if (impl_->dim == 2)
    idx = idx * static_cast<std::size_t>(K) + static_cast<std::size_t>(k[1] - kmin);
  return idx;
}

double TorusGrid::cell_weight() const {
  const double w = 2.0 * std::numbers::pi / impl_->M;
  return impl_->dim == 1 ? w : w * w;
}

std::array<double, 2> TorusGrid::point(std::size_t idx) const {
  const double h = 2.0 * std::numbers::pi / impl_->M;
  if (impl_->dim == 1) return {h * static_cast<double>(idx), 0.0};
  const std::size_t M = static_cast<std::size_t>(impl_->M);
  return {h * static_cast<double>(idx / M), h * static_cast<double>(idx % M)};
}

bool TorusGrid::compatible(const TorusGrid& other) const {
  if (impl_ == other.impl_) return true;
  if (!impl_ || !other.impl_) return false;
  return impl_->dim == other.impl_->dim && impl_->K == other.impl_->K &&
         impl_->M == other.impl_->M;
}

void TorusGrid::dft_forward(std::span<const double> values,
                            std::span<std::complex<double>> coeffs) const {
  const auto& g = *impl_;
  if (values.size() != g.n_points || coeffs.size() != g.n_modes)
    throw std::invalid_argument("dft_forward: size mismatch with grid");
  std::vector<std::complex<double>> in(g.n_points), out(g.n_points);
  for (std::size_t i = 0; i < g.n_points; ++i) in[i] = values[i];
  fftw_execute_dft(g.forward, reinterpret_cast<fftw_complex*>(in.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
  const double scale = 1.0 / static_cast<double>(g.n_points);
  const bool oversampled = g.M > g.K;
  for (std::size_t idx = 0; idx < g.n_modes; ++idx) {
    // A Nyquist mode k = K/2 has no conjugate partner on the retained lattice.
    // With M == K the bin is self-aliased and real for real input; on
    // oversampled grids it is dropped so truncation keeps fields real.
    if (oversampled && g.nyquist[idx]) {
      coeffs[idx] = 0.0;
    } else {
      coeffs[idx] = out[g.fft_bin[idx]] * scale;
    }
  }
}

void TorusGrid::dft_inverse(std::span<const std::complex<double>> coeffs,
                            std::span<double> values) const {
  const auto& g = *impl_;
  if (values.size() != g.n_points || coeffs.size() != g.n_modes)
    throw std::invalid_argument("dft_inverse: size mismatch with grid");
  std::vector<std::complex<double>> in(g.n_points, 0.0), out(g.n_points);
  for (std::size_t idx = 0; idx < g.n_modes; ++idx)
    in[g.fft_bin[idx]] += coeffs[idx];
  fftw_execute_dft(g.inverse, reinterpret_cast<fftw_complex*>(in.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
  for (std::size_t i = 0; i < g.n_points; ++i) values[i] = out[i].real();
}

}  // namespace spdelab
