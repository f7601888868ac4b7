#include "spdelab/functions.hpp"

#include <cmath>
#include <stdexcept>

namespace spdelab {

double FunctionSpec::operator()(double xi) const {
  switch (kind) {
    case Kind::zero:
      return 0.0;
    case Kind::identity:
      return xi;
    case Kind::sine:
      return std::sin(xi);
    case Kind::cosine:
      return std::cos(xi);
    case Kind::constant:
      return value;
    case Kind::polynomial: {
      double acc = 0.0;
      for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * xi + coeffs[i];
      return acc;
    }
  }
  return 0.0;
}

FunctionSpec FunctionSpec::zero() { return {}; }

FunctionSpec FunctionSpec::identity() {
  FunctionSpec f;
  f.kind = Kind::identity;
  return f;
}

FunctionSpec FunctionSpec::sine() {
  FunctionSpec f;
  f.kind = Kind::sine;
  return f;
}

FunctionSpec FunctionSpec::cosine() {
  FunctionSpec f;
  f.kind = Kind::cosine;
  return f;
}

FunctionSpec FunctionSpec::constant(double c) {
  FunctionSpec f;
  f.kind = Kind::constant;
  f.value = c;
  return f;
}

FunctionSpec FunctionSpec::polynomial(std::vector<double> ascending_coeffs) {
  FunctionSpec f;
  f.kind = Kind::polynomial;
  f.coeffs = std::move(ascending_coeffs);
  return f;
}

FunctionSpec FunctionSpec::from_name(const std::string& name,
                                     const std::vector<double>& coeffs,
                                     double constant_value) {
  if (name == "zero") return zero();
  if (name == "identity") return identity();
  if (name == "sin") return sine();
  if (name == "cos") return cosine();
  if (name == "constant") return constant(constant_value);
  if (name == "polynomial") return polynomial(coeffs);
  throw std::invalid_argument("unknown catalog function: " + name);
}

bool FunctionSpec::nonlinear() const {
  switch (kind) {
    case Kind::sine:
    case Kind::cosine:
      return true;
    case Kind::polynomial:
      return coeffs.size() > 2;
    default:
      return false;
  }
}

std::string FunctionSpec::name() const {
  switch (kind) {
    case Kind::zero:
      return "zero";
    case Kind::identity:
      return "identity";
    case Kind::sine:
      return "sin";
    case Kind::cosine:
      return "cos";
    case Kind::constant:
      return "constant";
    case Kind::polynomial:
      return "polynomial";
  }
  return "?";
}

}  // namespace spdelab
