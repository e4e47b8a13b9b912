#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "shiftcurv/errors.hpp"
#include "shiftcurv/rational.hpp"

namespace shiftcurv {

template <class Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <class Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

inline std::uint64_t binomial_u64(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t c = 1;
  for (int i = 1; i <= k; ++i) c = c * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return c;
}

template <class Scalar>
Scalar binomial(int n, int k) {
  return Scalar(binomial_u64(n, k));
}

template <class Scalar>
Scalar factorial(int m) {
  Scalar f(1);
  for (int i = 2; i <= m; ++i) f *= Scalar(i);
  return f;
}

/// sigma_0..sigma_n of lam: the coefficients of prod_i (t + lam_i), built one
/// factor at a time. O(n^2), no subset enumeration.
template <class Scalar>
Vec<Scalar> elementary_symmetric_all(const Vec<Scalar>& lam) {
  const int n = static_cast<int>(lam.size());
  Vec<Scalar> sigma = Vec<Scalar>::Zero(n + 1);
  sigma(0) = Scalar(1);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j >= 1; --j) sigma(j) += lam(i) * sigma(j - 1);
  }
  return sigma;
}

template <class Scalar>
Scalar elementary_symmetric(const Vec<Scalar>& lam, int k) {
  const int n = static_cast<int>(lam.size());
  if (n < 1) throw ArgumentError("elementary_symmetric: empty eigenvalue list");
  if (k < 0 || k > n) {
    throw ArgumentError("elementary_symmetric: k=" + std::to_string(k) + " outside [0," +
                        std::to_string(n) + "]");
  }
  return elementary_symmetric_all(lam)(k);
}

/// sigma_k and the normalized H_k = sigma_k / C(n,k) of one curvature vector.
template <class Scalar>
struct SymTable {
  int n = 0;
  Vec<Scalar> sigma;
  Vec<Scalar> normalized;

  /// H_k with the conventions H_0 = 1 and H_{-1} = 0.
  Scalar H(int k) const {
    if (k == -1) return Scalar(0);
    if (k < -1 || k > n) throw ArgumentError("SymTable::H: index " + std::to_string(k) + " out of range");
    return normalized(k);
  }
};

template <class Scalar>
SymTable<Scalar> sym_table(const Vec<Scalar>& lam) {
  SymTable<Scalar> t;
  t.n = static_cast<int>(lam.size());
  t.sigma = elementary_symmetric_all(lam);
  t.normalized.resize(t.n + 1);
  for (int k = 0; k <= t.n; ++k) t.normalized(k) = t.sigma(k) / binomial<Scalar>(t.n, k);
  return t;
}

namespace detail {

inline int permutation_sign(const std::vector<int>& p) {
  int sign = 1;
  std::vector<char> seen(p.size(), 0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (seen[i]) continue;
    std::size_t len = 0;
    for (std::size_t j = i; !seen[j]; j = static_cast<std::size_t>(p[j])) {
      seen[j] = 1;
      ++len;
    }
    if (len % 2 == 0) sign = -sign;
  }
  return sign;
}

template <class Scalar>
bool is_symmetric(const Mat<Scalar>& a) {
  if (a.rows() != a.cols()) return false;
  if constexpr (is_exact_v<Scalar>) {
    return a == a.transpose();
  } else {
    const double scale = 1.0 + a.cwiseAbs().maxCoeff();
    return (a - a.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale;
  }
}

}  // namespace detail

/// Generalized Kronecker delta: det[delta^{upper_a}_{lower_b}].
inline int generalized_kronecker(const std::vector<int>& upper, const std::vector<int>& lower) {
  const std::size_t p = upper.size();
  if (lower.size() != p) throw ArgumentError("generalized_kronecker: index lists differ in length");
  std::vector<int> perm(p);
  std::iota(perm.begin(), perm.end(), 0);
  int det = 0;
  do {
    bool nonzero = true;
    for (std::size_t a = 0; a < p && nonzero; ++a) nonzero = upper[a] == lower[static_cast<std::size_t>(perm[a])];
    if (nonzero) det += detail::permutation_sign(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return det;
}

/// Visits every (upper, lower) pair of p-tuples over {0..n-1} with a nonzero
/// generalized Kronecker delta. All other tuples contribute zero.
template <class Visitor>
void for_each_kronecker_term(int n, int p, Visitor&& visit) {
  std::vector<int> subset(static_cast<std::size_t>(p));
  std::vector<int> upper(static_cast<std::size_t>(p)), lower(static_cast<std::size_t>(p));
  std::vector<int> pi(static_cast<std::size_t>(p)), pj(static_cast<std::size_t>(p));
  // combinations of p distinct indices
  std::vector<char> mask(static_cast<std::size_t>(n), 0);
  std::fill(mask.begin(), mask.begin() + p, 1);
  do {
    int c = 0;
    for (int i = 0; i < n; ++i)
      if (mask[static_cast<std::size_t>(i)]) subset[static_cast<std::size_t>(c++)] = i;
    std::iota(pi.begin(), pi.end(), 0);
    do {
      const int si = detail::permutation_sign(pi);
      for (int a = 0; a < p; ++a) upper[static_cast<std::size_t>(a)] = subset[static_cast<std::size_t>(pi[static_cast<std::size_t>(a)])];
      std::iota(pj.begin(), pj.end(), 0);
      do {
        const int sj = detail::permutation_sign(pj);
        for (int a = 0; a < p; ++a) lower[static_cast<std::size_t>(a)] = subset[static_cast<std::size_t>(pj[static_cast<std::size_t>(a)])];
        visit(upper, lower, si * sj);
      } while (std::next_permutation(pj.begin(), pj.end()));
    } while (std::next_permutation(pi.begin(), pi.end()));
  } while (std::prev_permutation(mask.begin(), mask.end()));
}

/// sigma_k(A) = (1/k!) delta^{i_1..i_k}_{j_1..j_k} A_{i_1 j_1} ... A_{i_k j_k}.
/// Cost grows like C(n,k) (k!)^2; meant for n <= 8.
template <class Scalar>
Scalar elementary_symmetric_of_matrix(const Mat<Scalar>& a, int k) {
  if (!detail::is_symmetric(a)) throw ArgumentError("elementary_symmetric_of_matrix: matrix is not symmetric");
  const int n = static_cast<int>(a.rows());
  if (k < 0 || k > n) throw ArgumentError("elementary_symmetric_of_matrix: k out of range");
  if (k == 0) return Scalar(1);
  Scalar sum(0);
  for_each_kronecker_term(n, k, [&](const std::vector<int>& up, const std::vector<int>& lo, int sign) {
    Scalar term(sign);
    for (int m = 0; m < k; ++m) term *= a(up[static_cast<std::size_t>(m)], lo[static_cast<std::size_t>(m)]);
    sum += term;
  });
  return sum / factorial<Scalar>(k);
}

/// sigma_0..sigma_n of a square matrix from power traces (Newton's
/// identities). Exact in rational mode; works for non-symmetric input.
template <class Scalar>
Vec<Scalar> elementary_symmetric_all_of_matrix(const Mat<Scalar>& a) {
  const int n = static_cast<int>(a.rows());
  Vec<Scalar> p(n + 1);
  Mat<Scalar> power = Mat<Scalar>::Identity(n, n);
  for (int i = 1; i <= n; ++i) {
    power = power * a;
    p(i) = power.trace();
  }
  Vec<Scalar> sigma = Vec<Scalar>::Zero(n + 1);
  sigma(0) = Scalar(1);
  for (int k = 1; k <= n; ++k) {
    Scalar acc(0);
    for (int i = 1; i <= k; ++i) {
      const Scalar term = sigma(k - i) * p(i);
      if (i % 2 == 1) acc += term; else acc -= term;
    }
    sigma(k) = acc / Scalar(k);
  }
  return sigma;
}

/// k-th Newton transformation T_k(A) = dsigma_{k+1}/dA, via
/// T_0 = I, T_k = sigma_k(A) I - A T_{k-1}.
///
/// With this (hypersurface-dimension n) indexing the contractions are
///   tr(T_{k-1} A) = k sigma_k(A),   tr(T_{k-1}) = (n - k + 1) sigma_{k-1}(A),
/// verified exactly in rational arithmetic by the unit tests.
template <class Scalar>
Mat<Scalar> newton_tensor(const Mat<Scalar>& a, int k) {
  const int n = static_cast<int>(a.rows());
  if (a.rows() != a.cols()) throw ArgumentError("newton_tensor: matrix is not square");
  if (k < 0 || k > n - 1) {
    throw ArgumentError("newton_tensor: k=" + std::to_string(k) + " outside [0," + std::to_string(n - 1) + "]");
  }
  const Vec<Scalar> sigma = elementary_symmetric_all_of_matrix(a);
  Mat<Scalar> t = Mat<Scalar>::Identity(n, n);
  for (int m = 1; m <= k; ++m) {
    Mat<Scalar> next = -(a * t);
    for (int i = 0; i < n; ++i) next(i, i) += sigma(m);
    t = std::move(next);
  }
  return t;
}

// ---------------------------------------------------------------------------
// Garding cones

struct ConeReport {
  int max_k = 0;             ///< largest k with lam in the open cone Gamma_k
  int max_closed_k = 0;      ///< same for the closure, under tolerance
  std::vector<int> sigma_signs;  ///< sign of sigma_1..sigma_n (-1, 0, +1)
};

namespace detail {

template <class Scalar>
Scalar closure_tolerance(const Vec<Scalar>& lam, int i) {
  if constexpr (is_exact_v<Scalar>) {
    return Scalar(0);
  } else {
    const double m = lam.size() ? lam.cwiseAbs().maxCoeff() : 0.0;
    return 1e-12 * (1.0 + static_cast<double>(binomial_u64(static_cast<int>(lam.size()), i)) * std::pow(m, i));
  }
}

}  // namespace detail

template <class Scalar>
ConeReport cone_report(const Vec<Scalar>& lam) {
  const int n = static_cast<int>(lam.size());
  const Vec<Scalar> sigma = elementary_symmetric_all(lam);
  ConeReport rep;
  rep.sigma_signs.resize(static_cast<std::size_t>(n));
  bool open = true, closed = true;
  for (int i = 1; i <= n; ++i) {
    const Scalar tol = detail::closure_tolerance(lam, i);
    const Scalar s = sigma(i);
    rep.sigma_signs[static_cast<std::size_t>(i - 1)] = s > tol ? 1 : (s < -tol ? -1 : 0);
    open = open && s > Scalar(0);
    closed = closed && s >= -tol;
    if (open) rep.max_k = i;
    if (closed) rep.max_closed_k = i;
  }
  return rep;
}

/// lam in Gamma_k^+ : sigma_1..sigma_k > 0.
template <class Scalar>
bool in_cone(const Vec<Scalar>& lam, int k) {
  if (k < 1 || k > lam.size()) throw ArgumentError("in_cone: k out of range");
  const Vec<Scalar> sigma = elementary_symmetric_all(lam);
  for (int i = 1; i <= k; ++i)
    if (!(sigma(i) > Scalar(0))) return false;
  return true;
}

/// lam in the closure of Gamma_k^+, each sigma_i >= 0 up to a tolerance
/// scaled by the size of the terms in sigma_i (exact in rational mode).
template <class Scalar>
bool in_closed_cone(const Vec<Scalar>& lam, int k) {
  if (k < 1 || k > lam.size()) throw ArgumentError("in_closed_cone: k out of range");
  const Vec<Scalar> sigma = elementary_symmetric_all(lam);
  for (int i = 1; i <= k; ++i)
    if (sigma(i) < -detail::closure_tolerance(lam, i)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Newton-Maclaurin

struct NewtonMaclaurinGap {
  double product_gap = 0.0;  ///< H_{k-1} H_l - H_k H_{l-1}
  double power_gap = 0.0;    ///< H_l - H_k^{l/k}
};

/// Both Newton-Maclaurin gaps for 1 <= l < k <= n. Throws PreconditionError
/// when lam is outside the closed cone, where the inequalities may fail.
inline NewtonMaclaurinGap newton_maclaurin_gap(const Vec<double>& lam, int k, int l) {
  const int n = static_cast<int>(lam.size());
  if (!(1 <= l && l < k && k <= n)) {
    throw ArgumentError("newton_maclaurin_gap: need 1 <= l < k <= n, got k=" + std::to_string(k) +
                        " l=" + std::to_string(l));
  }
  if (!in_closed_cone(lam, k)) throw PreconditionError("newton_maclaurin_gap: lambda outside closed Garding cone");
  const SymTable<double> t = sym_table(lam);
  NewtonMaclaurinGap g;
  g.product_gap = t.H(k - 1) * t.H(l) - t.H(k) * t.H(l - 1);
  const double hk = std::max(t.H(k), 0.0);
  g.power_gap = t.H(l) - std::pow(hk, static_cast<double>(l) / static_cast<double>(k));
  return g;
}

// ---------------------------------------------------------------------------
// Shift by the identity and Gauss-Bonnet curvatures

enum class ShiftDirection { to_shifted, from_shifted };

/// to_shifted:   H_k(kappa - 1) = sum_i (-1)^{k-i} C(k,i) H_i(kappa)
/// from_shifted: H_k(kappa)     = sum_i C(k,i) H_i(kappa - 1)
/// h_list holds H_0..H_m of the source vector with m >= k.
template <class Scalar>
Scalar shift_transform(const Vec<Scalar>& h_list, int k, ShiftDirection direction) {
  if (k < 0) throw ArgumentError("shift_transform: negative k");
  if (h_list.size() < k + 1) throw ArgumentError("shift_transform: H list shorter than k+1");
  Scalar sum(0);
  for (int i = 0; i <= k; ++i) {
    Scalar term = binomial<Scalar>(k, i) * h_list(i);
    if (direction == ShiftDirection::to_shifted && (k - i) % 2 == 1) term = -term;
    sum += term;
  }
  return sum;
}

/// L_k = C(n,2k) (2k)! sum_{j=0}^{k} 2^j C(k,j) H_{2k-j}(shifted).
/// h_shifted is indexed from 0 and must reach index 2k.
template <class Scalar>
Scalar gauss_bonnet_expand(const Vec<Scalar>& h_shifted, int n, int k) {
  if (k < 1) throw ArgumentError("gauss_bonnet_expand: k must be >= 1");
  if (2 * k > n) throw ArgumentError("gauss_bonnet_expand: 2k > n, L_k undefined");
  if (h_shifted.size() < 2 * k + 1) throw ArgumentError("gauss_bonnet_expand: shifted H list shorter than 2k+1");
  Scalar sum(0);
  Scalar pow2(1);
  for (int j = 0; j <= k; ++j) {
    sum += pow2 * binomial<Scalar>(k, j) * h_shifted(2 * k - j);
    pow2 *= Scalar(2);
  }
  return binomial<Scalar>(n, 2 * k) * factorial<Scalar>(2 * k) * sum;
}

/// Intrinsic curvature R_{ij}^{sl} of a hypersurface in H^{n+1} from its
/// Weingarten matrix (Gauss equation, ambient curvature -1), flattened as
/// ((i*n + j)*n + s)*n + l.
template <class Scalar>
std::vector<Scalar> gauss_curvature_tensor(const Mat<Scalar>& w) {
  const int n = static_cast<int>(w.rows());
  std::vector<Scalar> r(static_cast<std::size_t>(n) * n * n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int s = 0; s < n; ++s)
        for (int l = 0; l < n; ++l) {
          Scalar v = w(i, s) * w(j, l) - w(i, l) * w(j, s);
          if (i == s && j == l) v -= Scalar(1);
          if (i == l && j == s) v += Scalar(1);
          r[static_cast<std::size_t>(((i * n + j) * n + s) * n + l)] = v;
        }
  return r;
}

/// L_k by direct contraction of the generalized Kronecker delta against k
/// copies of the Gauss-equation curvature tensor. n <= 6, k <= 2.
template <class Scalar>
Scalar gauss_bonnet_bruteforce(const Mat<Scalar>& w, int k) {
  const int n = static_cast<int>(w.rows());
  if (n > 6 || k > 2) throw CapabilityError("gauss_bonnet_bruteforce: limited to n <= 6, k <= 2");
  if (k < 1 || 2 * k > n) throw ArgumentError("gauss_bonnet_bruteforce: need 1 <= k and 2k <= n");
  const std::vector<Scalar> r = gauss_curvature_tensor(w);
  auto at = [&](int i, int j, int s, int l) -> const Scalar& {
    return r[static_cast<std::size_t>(((i * n + j) * n + s) * n + l)];
  };
  Scalar sum(0);
  for_each_kronecker_term(n, 2 * k, [&](const std::vector<int>& up, const std::vector<int>& lo, int sign) {
    Scalar term(sign);
    for (int m = 0; m < k; ++m) {
      const auto a = static_cast<std::size_t>(2 * m);
      term *= at(up[a], up[a + 1], lo[a], lo[a + 1]);
    }
    sum += term;
  });
  Scalar denom(1);
  for (int m = 0; m < k; ++m) denom *= Scalar(2);
  return sum / denom;
}

/// L_k from a Weingarten matrix through the shifted-curvature expansion.
template <class Scalar>
Scalar gauss_bonnet_from_weingarten(const Mat<Scalar>& w, int k) {
  const int n = static_cast<int>(w.rows());
  const Mat<Scalar> shifted = w - Mat<Scalar>::Identity(n, n);
  const Vec<Scalar> sigma = elementary_symmetric_all_of_matrix(shifted);
  Vec<Scalar> h(n + 1);
  for (int i = 0; i <= n; ++i) h(i) = sigma(i) / binomial<Scalar>(n, i);
  return gauss_bonnet_expand(h, n, k);
}

}  // namespace shiftcurv
