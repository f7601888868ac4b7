#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "spdelab/noise.hpp"
#include "spdelab/path.hpp"
#include "spdelab/problem.hpp"
#include "spdelab/solver.hpp"
#include "spdelab/stats.hpp"

namespace spdelab {

/// Monte Carlo estimate of E[ (sup over grid times of the supplied norm
/// path)^q ]. The factory maps a sample index to that sample's per-time norm
/// series; results are reduced in a fixed pairwise tree, so the estimate is
/// bit-reproducible for a given master seed and independent of thread count.
/// Rejects n_samples < 2.
MeanSe mc_sup_moment(
    const std::function<std::vector<double>(std::size_t)>& norm_path_factory,
    double q, std::size_t n_samples, int threads);

struct MomentReport {
  std::string label;
  double q = 0.0;
  double delta = 0.0;
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
  std::vector<double> T_grid;
  std::vector<double> estimates;  // E[sup_{t<=T} ||I_t||_{L^2}^q]
  std::vector<double> ses;
  double envelope_C = 0.0;        // max estimate / T^{q(1-delta)/2}
  double bound_exponent = 0.0;    // q(1-delta)/2
  double slope = 0.0;             // log-log fit across the T grid
  double slope_se = 0.0;
  bool envelope_monotone_2se = false;
};

/// Scaling study of the maximal inequality for the stochastic convolution
/// with additive diffusion coefficient `additive_B` (one Brownian component).
/// Refuses q <= 2/(1-delta), the hypothesis of the inequality. One path per
/// sample spans max(T_list); every T reads its running supremum off that
/// path, so estimates across T are coupled.
MomentReport maxineq_scaling(const TorusGrid& grid, const NoiseDriver& driver,
                             double delta, double q,
                             const std::vector<double>& T_list,
                             std::size_t n_samples,
                             const SpectralField& additive_B, double dt,
                             int threads);

/// C_{alpha,p,delta} = (1/(1-2alpha))^{p/2} * 1/(p/2 (1-2alpha)+1)
///                     * (1/(1-lambda))^{(p-1)/p}, with the front factor set
/// to one. Rejects lambda >= 1 and alpha outside (0, 1/2).
double assembled_constant(double alpha, double p, double delta);

struct AlphaOptimum {
  double alpha = 0.0;
  double value = 0.0;
};
/// Grid search of assembled_constant over the feasible alpha window
/// (lambda < 1 and alpha < 1/2).
AlphaOptimum minimize_assembled_constant(double p, double delta,
                                         int grid_points = 512);

struct EnergyBalanceReport {
  std::vector<double> times;
  std::vector<double> mean_sq;      // E||u_t||_{L^2}^2
  std::vector<double> mean_sq_se;
  std::vector<double> dissipation;  // 2 E int_0^t ||u||^2 + ||grad u||^2
  std::vector<double> qv;           // mu^2 E int_0^t sum_i ||(-A)^{d1/2} B_i(u)||^2
  std::vector<double> residual;     // Ito balance defect per time
  std::vector<double> residual_se;
  double mu = 0.0;
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
};

/// Monte Carlo Ito energy balance for a drift-free spec (F must be the zero
/// function; the estimate follows the critical-equation form). The sampled
/// discrete martingale term and the quadratic-variation fluctuation are
/// subtracted per path, which removes the dominant Monte Carlo noise from the
/// residual without biasing it.
EnergyBalanceReport energy_balance(const ProblemSpec& spec,
                                   const SolveConfig& cfg,
                                   const NoiseDriver& driver,
                                   std::size_t n_samples, int threads);

struct FracSobolevNorm {
  double sq_l2 = 0.0;    // sum_n ||f(t_n)||^2 dt
  double sq_semi = 0.0;  // off-diagonal Gagliardo double sum
  double norm() const;
};

/// Discrete W^{alpha,2}([0,T], H^{space_exponent,2}) norm of a path on its
/// own time grid; diagonal cells excluded. Rejects alpha outside (0, 1/2)
/// (at 1/2 the double sum diverges on Brownian-regularity paths).
FracSobolevNorm frac_time_sobolev(const PathOfFields& path, double alpha,
                                  double space_exponent = -1.0);

struct TrendTest {
  double slope = 0.0;
  double slope_se = 0.0;
  double zscore = 0.0;
  bool significant_increase = false;  // at the 99% level
};

/// Weighted regression slope test for an increasing trend across a parameter
/// grid.
TrendTest trend_test(std::span<const double> xs, std::span<const double> ys,
                     std::span<const double> ses);

struct CriticalReport {
  std::vector<double> delta_grid;
  double mu = 0.0;
  double c_w12 = 0.0;
  double mu_threshold_value = 0.0;
  bool mu_below_threshold = false;
  double alpha = 0.0;              // time-Sobolev exponent
  std::size_t gagliardo_stride = 1;
  std::vector<std::vector<double>> mean_sq_series;  // per delta, per time
  std::vector<double> times;
  std::vector<double> dissipation_integral;  // E int_0^T ||u||_{W^{1,2}}^2 dt
  std::vector<double> dissipation_se;
  std::vector<double> gagliardo;  // E ||u||^2_{W^{alpha,2}([0,T], H^{-1})}
  std::vector<double> gagliardo_se;
  std::vector<double> coupled_distance;  // between consecutive delta levels
  TrendTest w12_trend;
  TrendTest gagliardo_trend;
  double w12_band = 0.0;        // max/min across the delta grid
  double gagliardo_band = 0.0;
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
};

/// Sweeps the diffusion exponent toward the critical value on coupled noise
/// (same increments per sample index across delta). Solves use the Picard
/// solver; the moment index of `cfg` is raised automatically to keep
/// q > 2/(1-delta) at every grid point. If mu exceeds the measured threshold
/// the sweep still runs but the report marks the energy bound inapplicable.
CriticalReport critical_sweep(const ProblemSpec& base,
                              const std::vector<double>& delta_grid, double mu,
                              const SolveConfig& cfg, const NoiseDriver& driver,
                              std::size_t n_samples, int threads,
                              double alpha = 0.35,
                              std::size_t gagliardo_stride = 4);

/// Per-delta Gagliardo uniformity check on an existing sweep: band and trend
/// over the delta grid (the second a priori bound).
struct APriori2Check {
  double band = 0.0;
  TrendTest trend;
  std::vector<double> values;
  std::vector<double> ses;
};
APriori2Check a_priori_2_check(const CriticalReport& report);

struct RegularityReport {
  double delta = 0.0;
  double p = 2.0;
  int K = 0;
  std::vector<double> alphas;
  std::vector<double> norm_coarse, se_coarse;  // grid K
  std::vector<double> norm_fine, se_fine;      // grid 2K
  std::vector<double> refinement_ratio;        // fine / coarse
  std::vector<bool> flagged;                   // alpha <= delta - 1
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
};

/// Distributional regularity of the delta >= 1 convolution: for each alpha
/// the H^{-alpha,p} sup-norm is realized through the smoothed exponent
/// delta - alpha applied inside the convolution, estimated on grids K and 2K.
/// alpha <= delta-1 runs but is flagged (expected to grow under refinement).
RegularityReport regularity_report(int K, const NoiseDriver& driver,
                                   double delta,
                                   const std::vector<double>& alpha_list,
                                   double p, double T, double dt,
                                   std::size_t n_samples, int threads);

}  // namespace spdelab
