#include "shiftcurv/coefficient.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "shiftcurv/errors.hpp"

namespace shiftcurv {

Coefficient Coefficient::constant(double c, CoefficientSource src) {
  return Coefficient{Family::constant, c, 0.0, src};
}
Coefficient Coefficient::power(double p, CoefficientSource src) {
  if (!(p >= 0.0)) throw ArgumentError("pow coefficient needs p >= 0");
  return Coefficient{Family::power, p, 0.0, src};
}
Coefficient Coefficient::exponential(double a, CoefficientSource src) {
  return Coefficient{Family::exponential, a, 0.0, src};
}
Coefficient Coefficient::affine(double a, double b, CoefficientSource src) {
  return Coefficient{Family::affine, a, b, src};
}

double Coefficient::value(double s) const {
  switch (family) {
    case Family::constant: return a;
    case Family::power: return a == 0.0 ? 1.0 : std::pow(s, a);
    case Family::exponential: return std::exp(a * s);
    case Family::affine: return a + b * s;
  }
  return 0.0;
}

double Coefficient::derivative(double s) const {
  switch (family) {
    case Family::constant: return 0.0;
    case Family::power: return a == 0.0 ? 0.0 : a * std::pow(s, a - 1.0);
    case Family::exponential: return a * std::exp(a * s);
    case Family::affine: return b;
  }
  return 0.0;
}

Monotonicity Coefficient::monotonicity() const {
  double slope = 0.0;
  switch (family) {
    case Family::constant: slope = 0.0; break;
    case Family::power: slope = a; break;
    case Family::exponential: slope = a; break;
    case Family::affine: slope = b; break;
  }
  if (slope > 0.0) return Monotonicity::increasing;
  if (slope < 0.0) return Monotonicity::decreasing;
  return Monotonicity::constant;
}

namespace {

std::string number(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

double parse_number(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ArgumentError("invalid number '" + text + "' in " + what);
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

std::string Coefficient::to_string() const {
  std::string body;
  switch (family) {
    case Family::constant: body = "const:" + number(a); break;
    case Family::power: body = "pow:" + number(a); break;
    case Family::exponential: body = "exp:" + number(a); break;
    case Family::affine: body = "affine:" + number(a) + ":" + number(b); break;
  }
  return body + "@" + shiftcurv::to_string(source);
}

CoefficientSource parse_source(const std::string& text) {
  if (text == "r") return CoefficientSource::r;
  if (text == "V") return CoefficientSource::V;
  if (text == "V-u" || text == "Vu") return CoefficientSource::V_minus_u;
  throw ArgumentError("unknown coefficient source '" + text + "' (expected r, V or V-u)");
}

std::string to_string(CoefficientSource source) {
  switch (source) {
    case CoefficientSource::r: return "r";
    case CoefficientSource::V: return "V";
    case CoefficientSource::V_minus_u: return "V-u";
  }
  return "?";
}

std::string to_string(Monotonicity m) {
  switch (m) {
    case Monotonicity::constant: return "constant";
    case Monotonicity::increasing: return "increasing";
    case Monotonicity::decreasing: return "decreasing";
  }
  return "?";
}

Coefficient parse_coefficient(const std::string& text, CoefficientSource fallback) {
  std::string body = text;
  CoefficientSource src = fallback;
  if (const auto at = text.find('@'); at != std::string::npos) {
    body = text.substr(0, at);
    src = parse_source(text.substr(at + 1));
  }
  const std::vector<std::string> parts = split(body, ':');
  const std::string& fam = parts[0];
  auto need = [&](std::size_t count) {
    if (parts.size() != count)
      throw ArgumentError("coefficient '" + text + "': family '" + fam + "' takes " + std::to_string(count - 1) +
                          " parameter(s)");
  };
  if (fam == "const") {
    need(2);
    return Coefficient::constant(parse_number(parts[1], text), src);
  }
  if (fam == "pow") {
    need(2);
    return Coefficient::power(parse_number(parts[1], text), src);
  }
  if (fam == "exp") {
    need(2);
    return Coefficient::exponential(parse_number(parts[1], text), src);
  }
  if (fam == "affine") {
    need(3);
    return Coefficient::affine(parse_number(parts[1], text), parse_number(parts[2], text), src);
  }
  throw ArgumentError("unknown coefficient family '" + fam + "' (expected const, pow, exp or affine)");
}

Eigen::VectorXd source_values(const PointwiseCurvature& c, CoefficientSource source) {
  switch (source) {
    case CoefficientSource::r: return c.r;
    case CoefficientSource::V: return c.V;
    case CoefficientSource::V_minus_u: return c.V - c.u;
  }
  return {};
}

Eigen::MatrixXd source_gradient(const GeometryField& geom, CoefficientSource source) {
  switch (source) {
    case CoefficientSource::r: return geom.grad_r;
    case CoefficientSource::V: return geom.grad_V;
    case CoefficientSource::V_minus_u: {
      Eigen::MatrixXd out(geom.size(), geom.n);
      for (Eigen::Index i = 0; i < geom.size(); ++i) {
        const Eigen::MatrixXd shifted =
            geom.shape[static_cast<std::size_t>(i)] - Eigen::MatrixXd::Identity(geom.n, geom.n);
        out.row(i) = -(shifted * geom.grad_V.row(i).transpose()).transpose();
      }
      return out;
    }
  }
  return {};
}

Eigen::VectorXd coefficient_values(const Coefficient& coef, const PointwiseCurvature& c) {
  const Eigen::VectorXd s = source_values(c, coef.source);
  Eigen::VectorXd out(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    out(i) = coef.value(s(i));
    if (!std::isfinite(out(i)))
      throw DomainError("coefficient " + coef.to_string() + " not finite at node " + std::to_string(i));
  }
  return out;
}

Eigen::MatrixXd coefficient_gradient(const Coefficient& coef, const GeometryField& geom) {
  const Eigen::VectorXd s = source_values(geom.curvature, coef.source);
  Eigen::MatrixXd g = source_gradient(geom, coef.source);
  for (Eigen::Index i = 0; i < s.size(); ++i) g.row(i) *= coef.derivative(s(i));
  return g;
}

}  // namespace shiftcurv
