#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <random>

#include "shiftcurv/errors.hpp"
#include "shiftcurv/exact_sweep.hpp"
#include "shiftcurv/rational.hpp"
#include "shiftcurv/symfun.hpp"
#include "test_support.hpp"

using namespace shiftcurv;
using doctest::Approx;

namespace {

Vec<double> vec(std::initializer_list<double> v) {
  Vec<double> out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

/// sigma_k by enumerating k-subsets.
template <class Scalar>
Scalar sigma_by_subsets(const Vec<Scalar>& lam, int k) {
  const int n = static_cast<int>(lam.size());
  Scalar sum(0);
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (__builtin_popcount(mask) != k) continue;
    Scalar p(1);
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) p *= lam(i);
    sum += p;
  }
  return sum;
}

Mat<double> random_symmetric(std::mt19937_64& rng, int n) {
  Mat<double> a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) a(i, j) = a(j, i) = test::uniform(rng, -2.0, 2.0);
  return a;
}

}  // namespace

TEST_CASE("elementary symmetric functions of eigenvalue lists") {
  CHECK(elementary_symmetric(vec({1, 2, 3}), 2) == Approx(11.0));
  for (int n = 1; n <= 6; ++n) {
    const Vec<double> lam = Vec<double>::Constant(n, 1.7);
    for (int k = 0; k <= n; ++k)
      CHECK(elementary_symmetric(lam, k) == Approx(binomial<double>(n, k) * std::pow(1.7, k)));
  }
  CHECK(elementary_symmetric(vec({-4, 0.5}), 0) == 1.0);
  CHECK_THROWS_AS(elementary_symmetric(vec({1, 2}), 3), ArgumentError);
  CHECK_THROWS_AS(elementary_symmetric(vec({1, 2}), -1), ArgumentError);
}

TEST_CASE("recurrence agrees exactly with subset enumeration for n <= 8") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + trial % 8;
    Vec<Rational> lam(n);
    for (int i = 0; i < n; ++i) lam(i) = random_rational(rng);
    const Vec<Rational> all = elementary_symmetric_all(lam);
    for (int k = 0; k <= n; ++k) CHECK(all(k) == sigma_by_subsets(lam, k));
  }
}

TEST_CASE("matrix sigma_k by Kronecker contraction") {
  Mat<double> d = Mat<double>::Zero(3, 3);
  d.diagonal() << 1, 2, 3;
  CHECK(elementary_symmetric_of_matrix(d, 2) == Approx(11.0));
  for (int n = 1; n <= 5; ++n)
    for (int k = 0; k <= n; ++k)
      CHECK(elementary_symmetric_of_matrix(Mat<double>(Mat<double>::Identity(n, n)), k) ==
            Approx(binomial<double>(n, k)));

  std::mt19937_64 rng(3);
  for (int n = 2; n <= 6; ++n) {
    const Mat<double> a = random_symmetric(rng, n);
    const Vec<double> eig = Eigen::SelfAdjointEigenSolver<Mat<double>>(a).eigenvalues();
    for (int k = 1; k <= n; ++k) {
      const double by_eig = elementary_symmetric(eig, k);
      const double by_delta = elementary_symmetric_of_matrix(a, k);
      CHECK(std::abs(by_delta - by_eig) <= 1e-10 * (1.0 + std::abs(by_eig)));
    }
  }
  Mat<double> ns(2, 2);
  ns << 1, 2, 3, 4;
  CHECK_THROWS_AS(elementary_symmetric_of_matrix(ns, 1), ArgumentError);
}

TEST_CASE("Newton tensor and trace identities") {
  Mat<double> a = Mat<double>::Zero(3, 3);
  a.diagonal() << 1, 2, 3;
  const Mat<double> t1 = newton_tensor(a, 1);
  CHECK(t1(0, 0) == Approx(5.0));
  CHECK(t1(1, 1) == Approx(4.0));
  CHECK(t1(2, 2) == Approx(3.0));
  CHECK((t1 * a).trace() == Approx(22.0));
  for (int k = 1; k <= 2; ++k) CHECK(newton_tensor(Mat<double>(Mat<double>::Zero(3, 3)), k).norm() == 0.0);
  CHECK_THROWS_AS(newton_tensor(a, 3), ArgumentError);

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 1 + trial % 5;
    const Mat<Rational> r = random_symmetric_rational(rng, n);
    const Vec<Rational> sigma = elementary_symmetric_all_of_matrix(r);
    for (int k = 1; k <= n; ++k) {
      const Mat<Rational> t = newton_tensor(r, k - 1);
      CHECK(Rational((t * r).trace()) == Rational(k) * sigma(k));
      CHECK(Rational(t.trace()) == Rational(n - k + 1) * sigma(k - 1));
    }
  }
}

TEST_CASE("Garding cones") {
  CHECK(in_cone(vec({3, -1}), 1));
  CHECK_FALSE(in_cone(vec({3, -1}), 2));
  CHECK(elementary_symmetric(vec({3, -1}), 2) == Approx(-3.0));
  CHECK(in_cone(vec({1, 1, 1, 1}), 4));
  const Vec<double> boundary = vec({0, 1, 2});
  CHECK(in_closed_cone(boundary, 3));
  CHECK_FALSE(in_cone(boundary, 3));
  const ConeReport rep = cone_report(boundary);
  CHECK(rep.max_k == 2);
  CHECK(rep.max_closed_k == 3);
  CHECK_THROWS_AS(in_cone(vec({1, 2}), 3), ArgumentError);
}

TEST_CASE("Newton-Maclaurin gaps") {
  const NewtonMaclaurinGap g = newton_maclaurin_gap(vec({1, 2, 3}), 2, 1);
  CHECK(g.power_gap == Approx(2.0 - std::sqrt(11.0 / 3.0)));
  CHECK(g.power_gap == Approx(0.0851).epsilon(1e-3));
  const NewtonMaclaurinGap eq = newton_maclaurin_gap(Vec<double>::Constant(5, 0.7), 4, 2);
  CHECK(std::abs(eq.product_gap) < 1e-14);
  CHECK(std::abs(eq.power_gap) < 1e-14);
  CHECK_THROWS_AS(newton_maclaurin_gap(vec({3, -2, -2}), 2, 1), PreconditionError);
  CHECK_THROWS_AS(newton_maclaurin_gap(vec({1, 2}), 2, 2), ArgumentError);
}

TEST_CASE("shift transform") {
  // kappa = (2, 3)
  const Vec<double> h = vec({1.0, 2.5, 6.0});
  CHECK(shift_transform(h, 2, ShiftDirection::to_shifted) == Approx(2.0));
  CHECK(sym_table(vec({1, 2})).H(2) == Approx(2.0));
  const Vec<double> ones = sym_table(Vec<double>(Vec<double>::Ones(4))).normalized;
  for (int k = 1; k <= 4; ++k) CHECK(std::abs(shift_transform(ones, k, ShiftDirection::to_shifted)) < 1e-15);
  CHECK_THROWS_AS(shift_transform(h, 3, ShiftDirection::to_shifted), ArgumentError);

  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const int m = 1 + trial % 7;
    Vec<Rational> list(m + 1);
    for (int i = 0; i <= m; ++i) list(i) = random_rational(rng);
    Vec<Rational> shifted(m + 1);
    for (int k = 0; k <= m; ++k) shifted(k) = shift_transform(list, k, ShiftDirection::to_shifted);
    for (int k = 0; k <= m; ++k) CHECK(shift_transform(shifted, k, ShiftDirection::from_shifted) == list(k));
  }
}

TEST_CASE("Gauss-Bonnet curvatures") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const double k1 = test::uniform(rng, -1, 3), k2 = test::uniform(rng, -1, 3);
    Mat<double> w = Mat<double>::Zero(2, 2);
    w.diagonal() << k1, k2;
    CHECK(gauss_bonnet_bruteforce(w, 1) == Approx(2.0 * (k1 * k2 - 1.0)));
    CHECK(gauss_bonnet_from_weingarten(w, 1) == Approx(2.0 * (k1 * k2 - 1.0)));
  }
  const double rho = 0.8;
  const Mat<double> round = Mat<double>::Identity(2, 2) * test::coth(rho);
  CHECK(gauss_bonnet_bruteforce(round, 1) == Approx(2.0 / std::pow(std::sinh(rho), 2)));
  CHECK(gauss_bonnet_from_weingarten(Mat<double>(Mat<double>::Identity(4, 4)), 1) == 0.0);
  for (int n = 2; n <= 6; ++n)
    for (int k = 1; 2 * k <= n && k <= 2; ++k)
      CHECK(gauss_bonnet_bruteforce(Mat<double>(Mat<double>::Identity(n, n)), k) == 0.0);
  for (int trial = 0; trial < 12; ++trial) {
    const int n = 2 + trial % 5;
    const Mat<Rational> w = random_symmetric_rational(rng, n);
    for (int k = 1; 2 * k <= n && k <= 2; ++k)
      CHECK(gauss_bonnet_bruteforce(w, k) == gauss_bonnet_from_weingarten(w, k));
  }
  CHECK_THROWS_AS(gauss_bonnet_expand(Vec<double>(Vec<double>::Zero(4)), 3, 2), ArgumentError);
  CHECK_THROWS_AS(gauss_bonnet_bruteforce(Mat<double>(Mat<double>::Identity(7, 7)), 1), CapabilityError);
}

TEST_CASE("randomized exact identity sweep") {
  ExactSweepOptions opts;
  opts.cases = 20;
  for (const auto& r : exact_identity_sweep(opts)) {
    INFO(r.name);
    CHECK(r.pass);
    CHECK(r.lhs == r.rhs);
  }
  opts.exact = false;
  for (const auto& r : exact_identity_sweep(opts)) {
    INFO(r.name);
    CHECK(r.pass);
  }
}
