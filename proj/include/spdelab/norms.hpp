#pragma once

#include "spdelab/field.hpp"

namespace spdelab {

/// Collocation quadrature of |u|^p to the 1/p. p = 2 is evaluated from the
/// coefficients (Plancherel, exact for band-limited fields); other p need
/// M >= 2K on the grid when u is the image of a nonlinearity (aliasing).
/// Rejects p < 1.
double norm_lp(const SpectralField& field, double p);

/// (sum_{|beta| <= m} ||d^beta u||_p^p)^(1/p) with derivatives as (ik)^beta
/// multipliers (Nyquist zeroed).
double norm_sobolev(const SpectralField& field, int m, double p);

/// Bessel potential norm ||(-Delta+1)^(alpha/2) u||_p; any real alpha.
double norm_bessel(const SpectralField& field, double alpha, double p);

}  // namespace spdelab
