#pragma once

#include <cstdint>
#include <vector>

#include "spdelab/noise.hpp"
#include "spdelab/path.hpp"
#include "spdelab/problem.hpp"

namespace spdelab {

/// Pointwise drift image F(u), evaluated on the collocation grid and
/// transformed back (the grid's oversampling margin is the dealiasing
/// control). Throws BlowUp on non-finite values.
SpectralField nemytskii_F(const ProblemSpec& spec, const SpectralField& u);

/// Diffusion images B_1(u), ..., B_d(u); in divergence form each image is
/// (-Delta+1)^{-1/2} div of the pointwise vector evaluation.
std::vector<SpectralField> nemytskii_B(const ProblemSpec& spec,
                                       const SpectralField& u);

/// Pointwise sum b(u) = sum_i B_i(u) (the scalar Nemytskii operator of the
/// energy estimate).
SpectralField nemytskii_b_sum(const ProblemSpec& spec, const SpectralField& u);

/// Empirical coefficient constants over seeded random smooth fields:
///   lip_F, lip_B  — max difference quotients on paired samples,
///   growth        — max ||B(u)||_gamma^2 / (1 + ||u||_2^2),
///   w12           — max ||b(u)||_{W^{1,2}}^2 / (1 + ||u||_{W^{1,2}}^2).
struct GrowthConstants {
  double lip_F = 0.0;
  double lip_B = 0.0;
  double growth = 0.0;
  double w12 = 0.0;
};
GrowthConstants growth_constants(const ProblemSpec& spec, const TorusGrid& grid,
                                 std::size_t n_samples, std::uint64_t seed);

/// Noise amplitude threshold mu_0 = sqrt(2/C) of the energy estimate, with C
/// the measured W^{1,2} growth constant.
double mu_threshold(double c_w12);

struct PicardLog {
  struct Segment {
    double t0 = 0.0, t1 = 0.0;
    int iterations = 0;
    std::vector<double> distances;  // sup-in-time L^p distance per iteration
  };
  std::vector<Segment> segments;
  bool split = false;
  int total_iterations = 0;
};

struct Trajectory {
  PathOfFields path;
  std::vector<double> norms_lp;   // per time, exponent cfg.p
  std::vector<double> norms_w1p;  // W^{1,p}
  std::vector<double> norms_wmp;  // W^{m,p}
  PicardLog log;
};

/// Pathwise Picard iteration of the mild map
///   (K u)_t = S_t u0 + drift_conv(F(u), delta0)_t + mu direct_conv(B(u))_t
/// on fixed increments, started from the heat flow of u0. Stops when the
/// sup-in-time L^p update drops below tol*(1 + sup-in-time L^p of the
/// iterate). If the update ratios stay >= 1 for three consecutive iterations
/// (or iterations run out), the horizon is bisected and the halves chained;
/// with splitting disabled this throws NonContraction.
Trajectory picard_solve(const ProblemSpec& spec, const SolveConfig& cfg,
                        const BrownianIncrements& incs);

/// Exponential Euler cross-check scheme:
///   u_{n+1} = S_dt u_n + dt (-A)^{delta0} S_dt F(u_n)
///             + mu (-A)^{delta1/2} S_dt sum_i B_i(u_n) dW^i_n.
/// Independent time quadrature from the Picard fixed point (plain left-point
/// drift weight instead of exact cell integrals). Throws BlowUp when the L^2
/// norm passes cfg.blowup_cap.
Trajectory euler_solve(const ProblemSpec& spec, const SolveConfig& cfg,
                       const BrownianIncrements& incs);

struct SobolevSeries {
  std::vector<double> wmp;   // ||u_t||_{W^{m,p}}
  std::vector<double> w1mp;  // ||u_t||_{W^{1,mp}}
  double sup_wmp = 0.0;
  double sup_w1mp = 0.0;
};

/// Per-time W^{m,p} and W^{1,mp} norms with their suprema.
SobolevSeries sobolev_track(const PathOfFields& path, int m, double p);

}  // namespace spdelab
