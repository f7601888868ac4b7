#include "spdelab/problem.hpp"

#include <cmath>
#include <string>

namespace spdelab {

SpectralField InitialCondition::realize(const TorusGrid& grid) const {
  if (kind == Kind::random_recipe)
    return random_smooth_field(grid, amplitude, decay_r, seed);
  std::vector<double> values(grid.n_points());
  for (std::size_t i = 0; i < grid.n_points(); ++i)
    values[i] = amplitude * fn(grid.point(i)[0]);
  return transform(grid, values);
}

InitialCondition InitialCondition::function_of_x(FunctionSpec f,
                                                 double amplitude) {
  InitialCondition ic;
  ic.kind = Kind::function_of_x;
  ic.fn = std::move(f);
  ic.amplitude = amplitude;
  return ic;
}

InitialCondition InitialCondition::random(double amplitude, double decay_r,
                                          std::uint64_t seed) {
  InitialCondition ic;
  ic.kind = Kind::random_recipe;
  ic.amplitude = amplitude;
  ic.decay_r = decay_r;
  ic.seed = seed;
  return ic;
}

void ProblemSpec::validate(bool allow_critical_delta1) const {
  if (!(delta0 >= 0.0 && delta0 < 1.0))
    throw std::invalid_argument("ProblemSpec: delta0 must be in [0,1)");
  const double d1_max = allow_critical_delta1 ? 1.0 + 1e-12 : 1.0;
  if (!(delta1 >= 0.0) || delta1 >= d1_max)
    throw std::invalid_argument(
        allow_critical_delta1 ? "ProblemSpec: delta1 must be in [0,1]"
                              : "ProblemSpec: delta1 must be in [0,1)");
  if (!(T > 0.0)) throw std::invalid_argument("ProblemSpec: T must be > 0");
  if (!std::isfinite(mu)) throw std::invalid_argument("ProblemSpec: mu not finite");
  if (d() < 1 && mu != 0.0)
    throw std::invalid_argument("ProblemSpec: noise amplitude without B components");
}

ProblemSpec div_noise_spec(std::vector<std::vector<FunctionSpec>> components,
                           int dim) {
  for (const auto& comp : components)
    if (comp.size() != static_cast<std::size_t>(dim))
      throw std::invalid_argument(
          "div_noise_spec: each B_i needs one entry per space dimension");
  ProblemSpec spec;
  spec.div_form = true;
  spec.B_vec = std::move(components);
  spec.delta1 = 1.0;  // outer exponent of the delta1 = 1 structure
  return spec;
}

void SolveConfig::validate(const ProblemSpec& spec) const {
  if (!grid) throw std::invalid_argument("SolveConfig: grid not set");
  if (!(dt > 0.0)) throw std::invalid_argument("SolveConfig: dt must be > 0");
  if (!(p >= 2.0)) throw std::invalid_argument("SolveConfig: p must be >= 2");
  if (m < 1) throw std::invalid_argument("SolveConfig: m must be >= 1");
  if (picard_max_iters < 1)
    throw std::invalid_argument("SolveConfig: picard_max_iters must be >= 1");
  if (!(picard_tol > 0.0))
    throw std::invalid_argument("SolveConfig: picard_tol must be > 0");
  if (spec.delta1 < 1.0 && !(q > 2.0 / (1.0 - spec.delta1)))
    throw std::invalid_argument(
        "SolveConfig: moment index q must exceed 2/(1-delta1), got q=" +
        std::to_string(q));
  const double n_real = spec.T / dt;
  const double n_round = std::round(n_real);
  if (n_round < 1.0 || std::abs(n_real - n_round) > 1e-9 * n_real)
    throw std::invalid_argument("SolveConfig: T must be a multiple of dt");
}

ProblemSpec smooth_benchmark_spec() {
  ProblemSpec spec;
  spec.delta0 = 0.3;
  spec.delta1 = 0.3;
  spec.mu = 0.5;
  spec.F = FunctionSpec::sine();
  spec.B = {FunctionSpec::cosine()};
  spec.u0 = InitialCondition::function_of_x(FunctionSpec::sine(), 1.0);
  spec.T = 0.25;
  return spec;
}

}  // namespace spdelab
