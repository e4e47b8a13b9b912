#include "shiftcurv/exact_sweep.hpp"

#include <random>
#include <string>

#include "shiftcurv/rational.hpp"
#include "shiftcurv/symfun.hpp"

namespace shiftcurv {

namespace {

template <class Scalar>
Scalar convert(const Rational& q) {
  if constexpr (is_exact_v<Scalar>)
    return q;
  else
    return q.convert_to<double>();
}

template <class Scalar>
double magnitude(const Scalar& x) {
  if constexpr (is_exact_v<Scalar>)
    return boost::multiprecision::abs(x).template convert_to<double>();
  else
    return std::abs(x);
}

template <class Scalar>
class Family {
 public:
  Family(std::string name, const ExactSweepOptions& o) : name_(std::move(name)), opts_(o) {}

  void compare(const Scalar& a, const Scalar& b) {
    ++cases_;
    const double diff = magnitude<Scalar>(Scalar(a - b));
    worst_ = std::max(worst_, diff);
    if constexpr (is_exact_v<Scalar>) {
      if (a == b) ++matches_;
    } else {
      if (diff <= opts_.float_tol * (1.0 + std::max(std::abs(a), std::abs(b)))) ++matches_;
    }
  }

  IdentityReport report(int max_n) const {
    IdentityReport r = make_report(name_, CheckKind::identity, matches_, cases_, 0.0);
    r.extras = {{"cases", static_cast<double>(cases_)},
                {"worst_residual", worst_},
                {"max_n", static_cast<double>(max_n)},
                {"exact", is_exact_v<Scalar> ? 1.0 : 0.0}};
    r.n = max_n;
    r.note = is_exact_v<Scalar> ? "rational arithmetic" : "double arithmetic";
    return r;
  }

 private:
  std::string name_;
  const ExactSweepOptions& opts_;
  int cases_ = 0, matches_ = 0;
  double worst_ = 0.0;
};

template <class Scalar>
Mat<Scalar> random_symmetric(std::mt19937_64& rng, int n) {
  const auto q = random_symmetric_rational(rng, n);
  Mat<Scalar> a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = convert<Scalar>(q(i, j));
  return a;
}

template <class Scalar>
Vec<Scalar> random_vector(std::mt19937_64& rng, int n) {
  Vec<Scalar> v(n);
  for (int i = 0; i < n; ++i) v(i) = convert<Scalar>(random_rational(rng));
  return v;
}

template <class Scalar>
std::vector<IdentityReport> sweep(const ExactSweepOptions& opts) {
  std::mt19937_64 rng(opts.seed);
  std::uniform_int_distribution<int> dim5(1, 5), dim6(1, 6), dim_gb(2, 6);
  std::vector<IdentityReport> out;

  Family<Scalar> kron("sigma_kronecker", opts), trace_a("trace_newton_a", opts), trace("trace_newton", opts);
  for (int c = 0; c < opts.cases; ++c) {
    const int n = dim5(rng);
    const Mat<Scalar> a = random_symmetric<Scalar>(rng, n);
    const Vec<Scalar> sigma = elementary_symmetric_all_of_matrix(a);
    const int k = std::uniform_int_distribution<int>(1, n)(rng);
    kron.compare(elementary_symmetric_of_matrix(a, k), sigma(k));
    const Mat<Scalar> t = newton_tensor(a, k - 1);
    trace_a.compare(Scalar((t * a).trace()), Scalar(Scalar(k) * sigma(k)));
    trace.compare(Scalar(t.trace()), Scalar(Scalar(n - k + 1) * sigma(k - 1)));
  }
  out.push_back(kron.report(5));
  out.push_back(trace_a.report(5));
  out.push_back(trace.report(5));

  Family<Scalar> fwd("shift_forward", opts), inv("shift_inverse", opts);
  for (int c = 0; c < opts.cases; ++c) {
    const int n = dim6(rng);
    const Vec<Scalar> kappa = random_vector<Scalar>(rng, n);
    const Vec<Scalar> shifted = kappa - Vec<Scalar>::Ones(n);
    const SymTable<Scalar> h = sym_table(kappa), hs = sym_table(shifted);
    const int k = std::uniform_int_distribution<int>(0, n)(rng);
    fwd.compare(shift_transform(h.normalized, k, ShiftDirection::to_shifted), hs.normalized(k));
    inv.compare(shift_transform(hs.normalized, k, ShiftDirection::from_shifted), h.normalized(k));
  }
  out.push_back(fwd.report(6));
  out.push_back(inv.report(6));

  Family<Scalar> gb("gauss_bonnet", opts);
  for (int c = 0; c < opts.cases; ++c) {
    const int n = dim_gb(rng);
    const Mat<Scalar> w = random_symmetric<Scalar>(rng, n);
    const int k = std::uniform_int_distribution<int>(1, std::min(2, n / 2))(rng);
    gb.compare(gauss_bonnet_bruteforce(w, k), gauss_bonnet_from_weingarten(w, k));
  }
  out.push_back(gb.report(6));
  return out;
}

}  // namespace

std::vector<IdentityReport> exact_identity_sweep(const ExactSweepOptions& opts) {
  if (opts.cases < 1) throw ArgumentError("exact_identity_sweep: cases must be positive");
  return opts.exact ? sweep<Rational>(opts) : sweep<double>(opts);
}

}  // namespace shiftcurv
