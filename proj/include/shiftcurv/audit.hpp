#pragma once

#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "shiftcurv/coefficient.hpp"
#include "shiftcurv/expression.hpp"
#include "shiftcurv/identities.hpp"

namespace shiftcurv {

enum class TheoremId {
  thm1_1i, thm1_1ii,
  thm1_3i, thm1_3ii, thm1_3iii,
  thm1_5i, thm1_5ii, thm1_5iii,
  thm1_6, thm1_7, thm3_2, thm4_2,
  coro1_8, coro1_9,
};

/// Accepts the documented ids (thm1.1i, ..., coro1.9); "thm1.1", "thm1.3",
/// "thm1.5" alone select case (i).
TheoremId parse_theorem_id(const std::string& text);
std::string to_string(TheoremId id);
std::vector<TheoremId> all_theorems();

/// One-line statement of the hypothesis and conclusion.
std::string theorem_summary(TheoremId id);

/// Parameters of a theorem instance. Negative k / l and empty coefficient
/// lists mean "use the default for this theorem and n".
///
/// Index ranges of the coefficient lists:
///   case (i)   a_i, i = 1..l-1    b_j, j = l..k
///   case (ii)  a_0                b_j, j = 1..k
///   case (iii) a_i, i = 0..l-1    b_j, j = l..k
///   thm1.6     a_j, b_j, j = 1..k (functions of r), eta
///   thm1.7     a_ij triples (i, j, weight), weights summing to 1
///   thm4.2     case (i) indices, a side weighted by chi(V - u)
///   coro1.8    a_0, b_j j = 1..k
///   coro1.9    a_0, b_j j = 1..k, 2k <= n
struct TheoremConfig {
  TheoremId id = TheoremId::thm1_1i;
  int k = -1;
  int l = -1;
  Coefficient chi = Coefficient::power(1.0, CoefficientSource::V);
  std::vector<double> a, b;              ///< constant coefficients
  std::vector<Coefficient> a_fn, b_fn;   ///< radial coefficient functions (thm1.5, thm1.6)
  Coefficient eta = Coefficient::exponential(-1.0, CoefficientSource::r);
  std::vector<std::tuple<int, int, double>> a_ij;
  double epsilon = 0.05;  ///< uniform h-convexity margin (thm3.2, thm4.2)
  double tol = default_tolerance;
};

/// Fills every defaulted field for dimension n and validates index ranges,
/// coefficient counts and monotonicity metadata (ArgumentError otherwise).
TheoremConfig resolve_theorem_config(TheoremConfig cfg, int n);

/// The expression whose constancy is the theorem's hypothesis, written as a
/// ratio so that a surface satisfies the hypothesis iff the field is constant.
CurvatureExpr hypothesis_expression(const TheoremConfig& resolved);

struct AuditResult {
  TheoremId id = TheoremId::thm1_1i;
  TheoremConfig config;
  bool skipped = false;
  std::string reason;                   ///< why the audit was skipped
  std::vector<IdentityReport> links;    ///< in proof order
  ResidualReport hypothesis;            ///< constancy of hypothesis_expression
  double fitted_scale = 0.0;            ///< constant fitted to the hypothesis
  std::vector<std::pair<std::string, double>> diagnostics;
  std::string limitation;               ///< stated when the probe covers a subclass only

  /// Largest one-signed slack among inequality links (generally valid ones).
  double max_inequality_slack() const;
  /// Largest |slack| among all links.
  double max_abs_slack() const;
};

/// Evaluates every displayed inequality in the proof of `cfg.id` on `geom`.
/// Links of kind inequality hold on every admissible surface; identity links
/// are integral identities; hypothesis links are equalities that follow from
/// the hypothesis and fail on surfaces that violate it. Preconditions (cone
/// membership, h-convexity, positivity of coefficients) that fail produce a
/// skipped result with the reason.
AuditResult proof_chain_audit(const GeometryField& geom, const TheoremConfig& cfg);

}  // namespace shiftcurv
