#pragma once

#include <cstddef>

#include "spdelab/noise.hpp"
#include "spdelab/path.hpp"

namespace spdelab {

// Convolution machinery for the mild form: the discretized stochastic
// convolution, its factorization representation through the operators Y and
// G, and the singular deterministic drift convolution. All quadratures treat
// the power kernels (t-s)^(alpha-1) and (s-sigma)^(-alpha) by product
// integration: kernel cell integrals are exact, so no rule ever samples a
// kernel at its singular endpoint.

/// Singularity-adapted quadrature of int_sigma^t (t-s)^(alpha-1)(s-sigma)^(-alpha) ds.
/// Converges to pi/sin(pi*alpha) as n_quad grows, for any sigma < t (the
/// integral is invariant under affine substitution). Rejects sigma >= t and
/// alpha outside (0,1).
double beta_identity(double alpha, double sigma, double t, int n_quad);

/// How the singular-kernel quadratures sample their integrand:
///  - left_point: kernels evaluated at cell left endpoints (except the final
///    singular cell of each operator, which is always integrated exactly);
///    the path argument of G is taken at cell left endpoints.
///  - kernel_averaged: kernel cell integrals are exact everywhere and the
///    path argument of G is taken at cell right endpoints, which aligns the
///    composed G(Y) quadrature with the beta-identity cells; the doubly
///    singular corner cell of the composition is integrated in closed form.
enum class QuadratureRule { left_point, kernel_averaged };

struct FactorizationConfig {
  double alpha = 0.35;  // default sits inside (0,1/2) away from both limits
  double delta = 0.0;
  QuadratureRule rule = QuadratureRule::kernel_averaged;
};

/// lambda = (p/(p-1)) (1 + delta/2 - alpha); the G bound needs lambda < 1.
double factorization_lambda(double alpha, double delta, double p);

/// Ito left-point discretization of t -> int_0^t (-A)^(delta1/2) S_{t-s} B(u_s) dW_s:
/// I(t_n) = sum_{j<n} (-A)^(delta1/2) S_{t_n - t_j} (sum_i B_i(t_j) dW^i_j),
/// evaluated per mode through the exact semigroup recursion
/// I(t_{n+1}) = S_dt I(t_n) + (-A)^(delta1/2) S_dt (sum_i B_i(t_n) dW^i_n).
/// Rejects grid/time mismatches and delta1 outside [0,1).
PathOfFields direct_conv(const DiffusionPath& B_path,
                         const BrownianIncrements& incs, double delta1);

/// Same recursion with an unrestricted multiplier exponent. Diagnostic entry
/// point for the distributional-regularity study, where the smoothed exponent
/// may sit at or above 1.
PathOfFields direct_conv_exponent(const DiffusionPath& B_path,
                                  const BrownianIncrements& incs,
                                  double exponent);

/// (Yu)_s = int_0^s (s-sigma)^(-alpha) S_{s-sigma} B(u_sigma) dW_sigma with
/// the sigma -> s singularity handled per QuadratureRule. Rejects alpha
/// outside (0, 1/2).
PathOfFields factor_Y(const DiffusionPath& B_path,
                      const BrownianIncrements& incs, double alpha,
                      QuadratureRule rule = QuadratureRule::kernel_averaged);

/// (G_t f) = int_0^t (t-s)^(alpha-1) (-A)^(delta/2) S_{t-s} f(s) ds by
/// product integration: the kernel integral over cell j is exact, f is
/// sampled at the cell endpoint selected by the rule. Rejects alpha outside
/// (0, 1).
PathOfFields factor_G(const PathOfFields& f_path, double alpha, double delta,
                      QuadratureRule rule = QuadratureRule::kernel_averaged);

/// Factorization representation (sin(pi alpha)/pi) G(Y); converges to
/// direct_conv on a common noise path as dt -> 0. Under kernel_averaged the
/// doubly singular corner cell (the lag-one coefficient, whose exact value is
/// the full beta integral) is replaced by its closed form.
PathOfFields factor_conv(const DiffusionPath& B_path,
                         const BrownianIncrements& incs,
                         const FactorizationConfig& cfg);

/// int_0^t (-A)^(delta0) S_{t-s} F(u_s) ds by product integration: the
/// per-mode cell integral of the semigroup kernel is exact, F is sampled at
/// cell left endpoints. Rejects delta0 outside [0,1).
PathOfFields drift_conv(const PathOfFields& F_path, double delta0);

}  // namespace spdelab
