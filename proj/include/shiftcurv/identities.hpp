#pragma once

#include <Eigen/Core>

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "shiftcurv/coefficient.hpp"
#include "shiftcurv/expression.hpp"
#include "shiftcurv/hypersurface.hpp"

namespace shiftcurv {

/// identity: lhs == rhs. inequality: lhs >= rhs. hypothesis: lhs == rhs holds
/// only on surfaces satisfying the hypothesis under test.
enum class CheckKind { identity, inequality, hypothesis };

std::string to_string(CheckKind kind);

/// Below this magnitude both sides count as zero and the absolute tolerance applies.
inline constexpr double near_zero_scale = 1e-8;
inline constexpr double near_zero_abs_tol = 1e-9;

struct IdentityReport {
  std::string name;
  CheckKind kind = CheckKind::identity;
  double lhs = 0.0;
  double rhs = 0.0;
  double abs_err = 0.0;  ///< |lhs - rhs|
  double rel_err = 0.0;  ///< |lhs - rhs| / max(|lhs|, |rhs|)
  double slack = 0.0;    ///< (lhs - rhs) / max(|lhs|, |rhs|), 0 when both vanish
  double tol = 0.0;
  bool pass = false;
  bool applicable = true;
  std::string note;
  int grid = 0;   ///< nodes in the discretization
  int n = 0;
  std::vector<std::pair<std::string, double>> extras;

  double extra(const std::string& key) const;
};

/// Fills the error fields and the verdict from lhs, rhs, kind and tol.
IdentityReport make_report(std::string name, CheckKind kind, double lhs, double rhs, double tol,
                           const GeometryField* geom = nullptr);

/// Marks a report as not applicable (pass = true, so it never fails a suite).
IdentityReport not_applicable(std::string name, std::string reason, const GeometryField* geom = nullptr);

struct ResidualReport {
  std::string name;
  double sup = 0.0;
  double inf = 0.0;
  double mean = 0.0;  ///< area-weighted
  double oscillation = 0.0;
  double relative_oscillation = 0.0;  ///< oscillation / (|mean| + 1e-14)
  Eigen::Index argmin = 0;
  Eigen::Index argmax = 0;
};

ResidualReport residual_report(std::string name, const Eigen::VectorXd& values, const GeometryField& geom);

inline constexpr double default_tolerance = 1e-6;

/// int (V - u) H_{k-1} == int u H_k for 1 <= k <= n.
IdentityReport minkowski_check(const GeometryField& geom, int k, double tol = default_tolerance);

/// Test hook for the weighted formula: the correction term enters with this
/// factor (1 is the correct formula, 0 omits it, -1 flips its sign).
struct WeightedMinkowskiOptions {
  double correction_factor = 1.0;
  double tol = default_tolerance;
};

struct WeightedMinkowskiReports {
  IdentityReport equality;
  IdentityReport inequality;  ///< not applicable off the closed cone or for decreasing chi
};

/// int chi(V) u H_k == int chi(V) (V - u) H_{k-1} + (1/(k C(n,k))) int chi'(V) T_{k-1}(grad V, grad V),
/// and int chi(V) u H_k >= int chi(V) (V - u) H_{k-1} for non-decreasing chi on the closed cone.
WeightedMinkowskiReports weighted_minkowski_check(const GeometryField& geom, int k, const Coefficient& chi,
                                                  const WeightedMinkowskiOptions& opts = {});

/// Test fields for the generalized formula: a coefficient of r, V or V - u,
/// or the zonal harmonic P_m(cos theta).
struct ScalarField {
  std::optional<Coefficient> coef;
  int harmonic = -1;

  static ScalarField of(const Coefficient& c) { return {c, -1}; }
  static ScalarField zonal(int m) { return {std::nullopt, m}; }
  std::string to_string() const;
};

ScalarField parse_scalar_field(const std::string& text);

/// Values and gradient (frame components) of a scalar field.
Eigen::VectorXd field_values(const ScalarField& f, const GeometryField& geom);
Eigen::MatrixXd field_gradient(const ScalarField& f, const GeometryField& geom);

/// (1/(k C(n,k))) int T_{k-1}(W - I)(grad phi, grad V) dmu.
double newton_correction(const GeometryField& geom, int k, const Eigen::MatrixXd& grad_phi);

/// int phi u H_k == int phi (V - u) H_{k-1} + correction. The correction
/// value is in extras["correction"].
IdentityReport generalized_minkowski_check(const GeometryField& geom, int k, const ScalarField& phi,
                                           double tol = default_tolerance);

/// int (V - u)/(H - n) >= ((n+1)/n) int_Omega V. PreconditionError when H <= n somewhere.
/// extras: "umbilicity", "margin". `equality` in the note when the slack is within tol.
IdentityReport heintze_karcher_check(const GeometryField& geom, double tol = 1e-8);

/// int u dmu == (n+1) int_Omega V dvol.
IdentityReport volume_identity_check(const GeometryField& geom, double tol = 1e-8);

ResidualReport constancy_residual(const GeometryField& geom, const CurvatureExpr& expr);

struct NewtonMaclaurinFieldReport {
  bool applicable = true;
  std::vector<Eigen::Index> offending_nodes;  ///< nodes outside the closed cone
  ResidualReport product_gap;                 ///< H_{k-1} H_l - H_k H_{l-1}
  ResidualReport power_gap;                   ///< H_l - H_k^{l/k}
};

NewtonMaclaurinFieldReport newton_maclaurin_field(const GeometryField& geom, int k, int l);

/// max over nodes of max_i |kappa_i - mean| / (1 + |mean|).
double umbilicity(const GeometryField& geom);

/// Oscillation of V = cosh r over the nodes.
double centered_metric(const GeometryField& geom);

/// Largest k with kappa - 1 in the closed cone Gamma_k at every node (0 if none).
int closed_cone_order(const GeometryField& geom);

/// min over nodes of min_i (kappa_i - 1).
double min_shifted_curvature(const GeometryField& geom);

struct SuiteOptions {
  double tol = default_tolerance;
  std::vector<Coefficient> weights = {Coefficient::power(1.0), Coefficient::power(2.0)};
  bool parallel = true;
};

/// Minkowski for every k, weighted Minkowski for every k and weight,
/// Heintze-Karcher (not applicable when H <= n), volume identity. Checks run
/// concurrently; reports come back in declaration order.
std::vector<IdentityReport> verification_suite(const GeometryField& geom, const SuiteOptions& opts = {});

}  // namespace shiftcurv
