#pragma once

#include <Eigen/Core>

#include <optional>
#include <string>
#include <vector>

#include "shiftcurv/coefficient.hpp"
#include "shiftcurv/hypersurface.hpp"

namespace shiftcurv {

/// One summand scale * coef(source) * kind.
struct CurvatureTerm {
  enum class Kind {
    one,                 ///< 1
    shifted_H,           ///< H_j(kappa - 1)
    H,                   ///< H_j(kappa)
    H1_shifted_product,  ///< H_1(kappa - 1) H_{j-1}(kappa - 1)
    gauss_bonnet,        ///< L_j of the induced metric
    quotient,            ///< (H_i / H_j)^{1/(j-i)} of kappa - 1
    support_ratio,       ///< u / (V - u)
  };
  Kind kind = Kind::one;
  int i = 0;
  int j = 0;
  double scale = 1.0;
  std::optional<Coefficient> coef;

  static CurvatureTerm unit(double scale = 1.0);
  static CurvatureTerm shifted(int j, double scale = 1.0, std::optional<Coefficient> coef = {});
  static CurvatureTerm unshifted(int j, double scale = 1.0, std::optional<Coefficient> coef = {});
  static CurvatureTerm h1_product(int j, double scale = 1.0, std::optional<Coefficient> coef = {});
  static CurvatureTerm gauss_bonnet(int j, double scale = 1.0, std::optional<Coefficient> coef = {});
  static CurvatureTerm quotient(int i, int j, double scale = 1.0, std::optional<Coefficient> coef = {});
  static CurvatureTerm support(double scale = 1.0, std::optional<Coefficient> coef = {});

  std::string to_string() const;
};

/// sum(numerator) / sum(denominator); an empty denominator means 1.
struct CurvatureExpr {
  std::vector<CurvatureTerm> numerator;
  std::vector<CurvatureTerm> denominator;

  std::string to_string() const;
};

/// Values below this magnitude count as vanishing in quotients and denominators.
inline constexpr double vanishing_floor = 1e-12;

/// Node-wise values. ArgumentError for indices outside 0..n (2j <= n for L_j);
/// DomainError naming the node when a quotient or denominator vanishes.
Eigen::VectorXd evaluate(const CurvatureExpr& expr, const PointwiseCurvature& c);

/// Text form, e.g. "{pow:1@V}*Hs2", "Hs2/Hs1", "0.5*Hs1 + {exp:-1@r}*Hs2",
/// "Q0_1 / U". Factors: numbers, {coefficient}, Hs<j>, H<j>, H1Hs<j>, L<j>,
/// Q<i>_<j>, U. A term is a '*'-product with at most one curvature factor and
/// at most one coefficient; '-' negates the following term.
CurvatureExpr parse_curvature_expr(const std::string& text);

}  // namespace shiftcurv
