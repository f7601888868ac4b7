#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "spdelab/conv.hpp"
#include "spdelab/field.hpp"
#include "spdelab/functions.hpp"
#include "spdelab/grid.hpp"

namespace spdelab {

/// Raised when a solve fails numerically (maps to CLI exit code 3).
struct NumericalFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NonContraction : NumericalFailure {
  using NumericalFailure::NumericalFailure;
};
struct BlowUp : NumericalFailure {
  using NumericalFailure::NumericalFailure;
};

/// Initial state: either a catalog function of x (amplitude * f(x1), constant
/// across the second axis in 2d) or a seeded random field with coefficient
/// decay (1+|k|^2)^(-decay_r). Both realize consistently across grid
/// resolutions, so refinement studies can share one u0.
struct InitialCondition {
  enum class Kind { function_of_x, random_recipe };
  Kind kind = Kind::function_of_x;
  FunctionSpec fn = FunctionSpec::zero();
  double amplitude = 1.0;
  double decay_r = 2.0;
  std::uint64_t seed = 0;

  SpectralField realize(const TorusGrid& grid) const;

  static InitialCondition function_of_x(FunctionSpec f, double amplitude = 1.0);
  static InitialCondition random(double amplitude, double decay_r,
                                 std::uint64_t seed);
};

/// One instance of the equation
///   du = (Delta-1) u dt + (-Delta+1)^{delta0} F(u) dt
///        + mu (-Delta+1)^{delta1/2} sum_i B_i(u) dbeta^i.
/// In divergence form the i-th diffusion image is
/// (-Delta+1)^{-1/2} div(B_i(u)) with B_i vector-valued and delta1 = 1
/// structurally (reachable only through the critical sweep).
struct ProblemSpec {
  double delta0 = 0.0;
  double delta1 = 0.0;
  double mu = 0.0;
  FunctionSpec F = FunctionSpec::zero();
  std::vector<FunctionSpec> B;                   // scalar form, one per component
  bool div_form = false;
  std::vector<std::vector<FunctionSpec>> B_vec;  // div form: d x dim entries
  InitialCondition u0;
  double T = 1.0;

  int d() const {
    return static_cast<int>(div_form ? B_vec.size() : B.size());
  }

  /// Checks exponent ranges; delta1 = 1 passes only when the critical-sweep
  /// entry point asks for it.
  void validate(bool allow_critical_delta1 = false) const;
};

/// Divergence-driven noise: du = (Delta-1)u dt + mu sum_i div(B_i(u)) dbeta^i,
/// realized as the delta1 = 1 structure (-Delta+1)^{1/2} (-Delta+1)^{-1/2} div.
/// `components` holds d entries of `dim` catalog functions each.
ProblemSpec div_noise_spec(std::vector<std::vector<FunctionSpec>> components,
                           int dim);

struct SolveConfig {
  TorusGrid grid;
  double dt = 1e-3;
  double picard_tol = 1e-8;
  int picard_max_iters = 25;
  double q = 4.0;
  double p = 2.0;
  int m = 1;
  FactorizationConfig factorization;
  double blowup_cap = 1e8;
  bool allow_horizon_split = true;

  /// Enforces q > 2/(1-delta1) and p >= 2, and that T sits on the dt grid.
  void validate(const ProblemSpec& spec) const;
};

/// Smooth benchmark used across the regularity and contraction studies:
/// F = sin, B = (cos), delta0 = delta1 = 0.3, mu = 0.5, u0 = sin x, T = 0.25.
ProblemSpec smooth_benchmark_spec();

}  // namespace spdelab
