#pragma once

#include <Eigen/Core>
#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/eigen.hpp>

#include <cstdint>
#include <random>
#include <type_traits>

namespace shiftcurv {

/// Arbitrary-precision rational scalar. Expression templates are off so the
/// type behaves like a plain value inside Eigen expressions.
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

enum class NumericMode { float64, exact_rational };

template <class Scalar>
inline constexpr NumericMode numeric_mode_v =
    std::is_same_v<Scalar, Rational> ? NumericMode::exact_rational : NumericMode::float64;

template <class Scalar>
inline constexpr bool is_exact_v = numeric_mode_v<Scalar> == NumericMode::exact_rational;

/// Uniform random rational p/q with |p| <= max_num, 1 <= q <= max_den.
template <class Rng>
Rational random_rational(Rng& rng, int max_num = 9, int max_den = 7) {
  std::uniform_int_distribution<int> num(-max_num, max_num);
  std::uniform_int_distribution<int> den(1, max_den);
  return Rational(num(rng), den(rng));
}

template <class Rng>
Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic> random_symmetric_rational(Rng& rng, int n) {
  Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic> a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      a(i, j) = random_rational(rng);
      a(j, i) = a(i, j);
    }
  }
  return a;
}

}  // namespace shiftcurv
