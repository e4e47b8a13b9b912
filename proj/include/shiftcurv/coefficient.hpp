#pragma once

#include <Eigen/Core>

#include <string>

#include "shiftcurv/hypersurface.hpp"

namespace shiftcurv {

/// Pointwise scalar a coefficient is a function of.
enum class CoefficientSource { r, V, V_minus_u };

enum class Monotonicity { constant, increasing, decreasing };

/// Named one-parameter families used for weights and coefficient functions:
///
///   const:c      c
///   pow:p        s^p            (p >= 0)
///   exp:a        exp(a s)
///   affine:a:b   a + b s
///
/// where s is the value of `source`. The text form may carry the source as a
/// suffix, e.g. "exp:-1@r", "pow:2@V", "affine:1:0.5@V-u".
struct Coefficient {
  enum class Family { constant, power, exponential, affine };
  Family family = Family::constant;
  double a = 1.0;
  double b = 0.0;
  CoefficientSource source = CoefficientSource::V;

  static Coefficient constant(double c, CoefficientSource src = CoefficientSource::V);
  static Coefficient power(double p, CoefficientSource src = CoefficientSource::V);
  static Coefficient exponential(double a, CoefficientSource src = CoefficientSource::V);
  static Coefficient affine(double a, double b, CoefficientSource src = CoefficientSource::V);

  double value(double s) const;
  double derivative(double s) const;
  /// Monotonicity on s > 0 (every source is positive on a valid surface).
  Monotonicity monotonicity() const;
  bool strictly_increasing() const { return monotonicity() == Monotonicity::increasing; }
  bool non_decreasing() const { return monotonicity() != Monotonicity::decreasing; }
  bool non_increasing() const { return monotonicity() != Monotonicity::increasing; }

  std::string to_string() const;
};

/// Parses the text form above; `fallback` is used when no "@source" suffix is given.
Coefficient parse_coefficient(const std::string& text, CoefficientSource fallback = CoefficientSource::V);

CoefficientSource parse_source(const std::string& text);
std::string to_string(CoefficientSource source);
std::string to_string(Monotonicity m);

/// Samples of the source scalar at every node.
Eigen::VectorXd source_values(const PointwiseCurvature& c, CoefficientSource source);

/// Tangential gradient (frame components, nodes x n) of the source scalar:
/// grad r, grad V = sinh r grad r, grad (V - u) = -(W - I) grad V.
Eigen::MatrixXd source_gradient(const GeometryField& geom, CoefficientSource source);

/// coefficient(source) at every node; throws DomainError when a value is not finite.
Eigen::VectorXd coefficient_values(const Coefficient& coef, const PointwiseCurvature& c);

/// Gradient of coefficient(source) at every node (nodes x n).
Eigen::MatrixXd coefficient_gradient(const Coefficient& coef, const GeometryField& geom);

}  // namespace shiftcurv
