#pragma once

#include <string>
#include <vector>

namespace spdelab {

/// Pointwise scalar function picked from the registered catalog. User
/// functions come from this catalog (and coefficient lists), never from
/// parsed code.
struct FunctionSpec {
  enum class Kind { zero, identity, sine, cosine, constant, polynomial };
  Kind kind = Kind::zero;
  double value = 0.0;               // constant
  std::vector<double> coeffs;       // polynomial, ascending powers

  double operator()(double xi) const;

  static FunctionSpec zero();
  static FunctionSpec identity();
  static FunctionSpec sine();
  static FunctionSpec cosine();
  static FunctionSpec constant(double c);
  static FunctionSpec polynomial(std::vector<double> ascending_coeffs);

  /// Catalog lookup by name: zero, identity, sin, cos, constant, polynomial.
  static FunctionSpec from_name(const std::string& name,
                                const std::vector<double>& coeffs = {},
                                double constant_value = 0.0);
  std::string name() const;

  /// True when pointwise evaluation can widen the spectrum (anything beyond
  /// an affine map), which is what the dealiasing margin guards against.
  bool nonlinear() const;
};

}  // namespace spdelab
