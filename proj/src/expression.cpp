#include "shiftcurv/expression.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

#include "shiftcurv/errors.hpp"
#include "shiftcurv/symfun.hpp"

namespace shiftcurv {

CurvatureTerm CurvatureTerm::unit(double scale) { return {Kind::one, 0, 0, scale, {}}; }
CurvatureTerm CurvatureTerm::shifted(int j, double scale, std::optional<Coefficient> coef) {
  return {Kind::shifted_H, 0, j, scale, coef};
}
CurvatureTerm CurvatureTerm::unshifted(int j, double scale, std::optional<Coefficient> coef) {
  return {Kind::H, 0, j, scale, coef};
}
CurvatureTerm CurvatureTerm::h1_product(int j, double scale, std::optional<Coefficient> coef) {
  return {Kind::H1_shifted_product, 0, j, scale, coef};
}
CurvatureTerm CurvatureTerm::gauss_bonnet(int j, double scale, std::optional<Coefficient> coef) {
  return {Kind::gauss_bonnet, 0, j, scale, coef};
}
CurvatureTerm CurvatureTerm::quotient(int i, int j, double scale, std::optional<Coefficient> coef) {
  return {Kind::quotient, i, j, scale, coef};
}
CurvatureTerm CurvatureTerm::support(double scale, std::optional<Coefficient> coef) {
  return {Kind::support_ratio, 0, 0, scale, coef};
}

std::string CurvatureTerm::to_string() const {
  std::ostringstream os;
  os.precision(17);
  bool first = true;
  auto sep = [&] {
    if (!first) os << '*';
    first = false;
  };
  if (scale != 1.0 || (kind == Kind::one && !coef)) {
    sep();
    os << scale;
  }
  if (coef) {
    sep();
    os << '{' << coef->to_string() << '}';
  }
  switch (kind) {
    case Kind::one: break;
    case Kind::shifted_H: sep(); os << "Hs" << j; break;
    case Kind::H: sep(); os << 'H' << j; break;
    case Kind::H1_shifted_product: sep(); os << "H1Hs" << j; break;
    case Kind::gauss_bonnet: sep(); os << 'L' << j; break;
    case Kind::quotient: sep(); os << 'Q' << i << '_' << j; break;
    case Kind::support_ratio: sep(); os << 'U'; break;
  }
  return os.str();
}

namespace {

std::string join(const std::vector<CurvatureTerm>& terms) {
  std::string out;
  for (std::size_t t = 0; t < terms.size(); ++t) {
    if (t) out += " + ";
    out += terms[t].to_string();
  }
  return out;
}

void check_index(int j, int n, const char* what) {
  if (j < 0 || j > n)
    throw ArgumentError(std::string(what) + " index " + std::to_string(j) + " outside 0.." + std::to_string(n));
}

void validate(const CurvatureTerm& t, int n) {
  switch (t.kind) {
    case CurvatureTerm::Kind::one:
    case CurvatureTerm::Kind::support_ratio: break;
    case CurvatureTerm::Kind::shifted_H:
    case CurvatureTerm::Kind::H: check_index(t.j, n, "H"); break;
    case CurvatureTerm::Kind::H1_shifted_product:
      if (t.j < 1) throw ArgumentError("H1*H_{j-1} term needs j >= 1");
      check_index(t.j, n, "H1*H_{j-1}");
      break;
    case CurvatureTerm::Kind::gauss_bonnet:
      if (t.j < 1 || 2 * t.j > n)
        throw ArgumentError("L_" + std::to_string(t.j) + " needs 1 <= j and 2j <= n=" + std::to_string(n));
      break;
    case CurvatureTerm::Kind::quotient:
      check_index(t.i, n, "quotient");
      check_index(t.j, n, "quotient");
      if (!(t.i < t.j)) throw ArgumentError("quotient term needs i < j");
      break;
  }
}

double term_kernel(const CurvatureTerm& t, const PointwiseCurvature& c, Eigen::Index node) {
  const auto hs = [&](int j) { return c.H_shifted(node, j); };
  switch (t.kind) {
    case CurvatureTerm::Kind::one: return 1.0;
    case CurvatureTerm::Kind::shifted_H: return hs(t.j);
    case CurvatureTerm::Kind::H: return c.H(node, t.j);
    case CurvatureTerm::Kind::H1_shifted_product: return hs(1) * hs(t.j - 1);
    case CurvatureTerm::Kind::gauss_bonnet: {
      const Eigen::VectorXd row = c.H_shifted.row(node).transpose();
      return gauss_bonnet_expand<double>(row, c.n, t.j);
    }
    case CurvatureTerm::Kind::quotient: {
      const double den = hs(t.j);
      if (std::abs(den) < vanishing_floor)
        throw DomainError("quotient H_" + std::to_string(t.i) + "/H_" + std::to_string(t.j) +
                          ": denominator vanishes at node " + std::to_string(node));
      const double ratio = hs(t.i) / den;
      if (ratio < 0.0)
        throw DomainError("quotient H_" + std::to_string(t.i) + "/H_" + std::to_string(t.j) +
                          " negative at node " + std::to_string(node));
      return std::pow(ratio, 1.0 / (t.j - t.i));
    }
    case CurvatureTerm::Kind::support_ratio: {
      const double w = c.V(node) - c.u(node);
      if (std::abs(w) < vanishing_floor) throw DomainError("V - u vanishes at node " + std::to_string(node));
      return c.u(node) / w;
    }
  }
  return 0.0;
}

Eigen::VectorXd sum_terms(const std::vector<CurvatureTerm>& terms, const PointwiseCurvature& c) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(c.size());
  for (const CurvatureTerm& t : terms) {
    validate(t, c.n);
    const Eigen::VectorXd coef =
        t.coef ? coefficient_values(*t.coef, c) : Eigen::VectorXd::Ones(c.size());
    for (Eigen::Index node = 0; node < c.size(); ++node)
      out(node) += t.scale * coef(node) * term_kernel(t, c, node);
  }
  return out;
}

}  // namespace

std::string CurvatureExpr::to_string() const {
  const std::string num = numerator.empty() ? "0" : join(numerator);
  if (denominator.empty()) return num;
  return "(" + num + ") / (" + join(denominator) + ")";
}

Eigen::VectorXd evaluate(const CurvatureExpr& expr, const PointwiseCurvature& c) {
  if (expr.numerator.empty()) throw ArgumentError("curvature expression has no terms");
  Eigen::VectorXd num = sum_terms(expr.numerator, c);
  if (expr.denominator.empty()) return num;
  const Eigen::VectorXd den = sum_terms(expr.denominator, c);
  for (Eigen::Index node = 0; node < c.size(); ++node) {
    if (std::abs(den(node)) < vanishing_floor)
      throw DomainError("expression denominator vanishes at node " + std::to_string(node));
    num(node) /= den(node);
  }
  return num;
}

namespace {

class ExprParser {
 public:
  explicit ExprParser(std::string text) : text_(std::move(text)) {
    std::string compact;
    for (char ch : text_)
      if (!std::isspace(static_cast<unsigned char>(ch))) compact += ch;
    s_ = compact;
  }

  CurvatureExpr parse() {
    CurvatureExpr e;
    e.numerator = sum();
    if (peek() == '/') {
      ++pos_;
      e.denominator = sum();
    }
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  std::string text_, s_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw ArgumentError("curvature expression '" + text_ + "': " + what);
  }
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }

  std::vector<CurvatureTerm> sum() {
    std::vector<CurvatureTerm> terms;
    double sign = 1.0;
    if (peek() == '-') {
      sign = -1.0;
      ++pos_;
    }
    terms.push_back(term(sign));
    while (peek() == '+' || peek() == '-') {
      sign = peek() == '-' ? -1.0 : 1.0;
      ++pos_;
      terms.push_back(term(sign));
    }
    return terms;
  }

  int integer() {
    const std::size_t start = pos_;
    while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    if (start == pos_) fail("expected an index at position " + std::to_string(start));
    return std::stoi(s_.substr(start, pos_ - start));
  }

  CurvatureTerm term(double sign) {
    CurvatureTerm t = CurvatureTerm::unit(sign);
    bool have_kind = false;
    auto set_kind = [&](CurvatureTerm::Kind k, int i, int j) {
      if (have_kind) fail("more than one curvature factor in a term");
      have_kind = true;
      t.kind = k;
      t.i = i;
      t.j = j;
    };
    for (;;) {
      const char ch = peek();
      if (ch == '{') {
        const std::size_t close = s_.find('}', pos_);
        if (close == std::string::npos) fail("unterminated '{'");
        if (t.coef) fail("more than one coefficient in a term");
        t.coef = parse_coefficient(s_.substr(pos_ + 1, close - pos_ - 1));
        pos_ = close + 1;
      } else if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') {
        std::size_t used = 0;
        const double v = std::stod(s_.substr(pos_), &used);
        pos_ += used;
        t.scale *= v;
      } else if (s_.compare(pos_, 4, "H1Hs") == 0) {
        pos_ += 4;
        set_kind(CurvatureTerm::Kind::H1_shifted_product, 0, integer());
      } else if (s_.compare(pos_, 2, "Hs") == 0) {
        pos_ += 2;
        set_kind(CurvatureTerm::Kind::shifted_H, 0, integer());
      } else if (ch == 'H') {
        ++pos_;
        set_kind(CurvatureTerm::Kind::H, 0, integer());
      } else if (ch == 'L') {
        ++pos_;
        set_kind(CurvatureTerm::Kind::gauss_bonnet, 0, integer());
      } else if (ch == 'Q') {
        ++pos_;
        const int i = integer();
        if (peek() != '_') fail("quotient needs the form Q<i>_<j>");
        ++pos_;
        set_kind(CurvatureTerm::Kind::quotient, i, integer());
      } else if (ch == 'U') {
        ++pos_;
        set_kind(CurvatureTerm::Kind::support_ratio, 0, 0);
      } else {
        fail(ch ? "unexpected '" + std::string(1, ch) + "'" : "unexpected end");
      }
      if (peek() != '*') break;
      ++pos_;
    }
    return t;
  }
};

}  // namespace

CurvatureExpr parse_curvature_expr(const std::string& text) { return ExprParser(text).parse(); }

}  // namespace shiftcurv
