#pragma once

#include <Eigen/Core>

#include <optional>
#include <string>
#include <vector>

#include "shiftcurv/audit.hpp"
#include "shiftcurv/expression.hpp"
#include "shiftcurv/hypersurface.hpp"
#include "shiftcurv/surface_spec.hpp"

namespace shiftcurv {

/// Collocation problem expr(r) = target * target_fn on an axisymmetric grid.
struct SolveConfig {
  CurvatureExpr expr;
  double target = 0.0;
  std::optional<Coefficient> target_fn;  ///< radial right-hand side factor, 1 if absent
  SurfaceSpec init;
  std::optional<Eigen::VectorXd> warm_start;  ///< overrides init when set (same grid)
  int n = 2;
  int grid = 128;
  int max_steps = 40;
  double tol = 1e-10;        ///< max-norm residual
  double damping_floor = 0x1p-20;
  double armijo = 1e-4;
  int cone_order = -1;       ///< closed cone Gamma_k enforced on kappa - 1; -1 derives it from expr
  int continuation_steps = 1;  ///< stages from the initial mean value of expr to target
};

enum class SolveStatus { converged, max_steps, damping_floor, singular, invalid_init };

std::string to_string(SolveStatus s);

struct SphereFit {
  SphereSpec sphere;
  double residual = 0.0;  ///< max |r - r_fit| over the nodes
  bool converged = false;
  bool spherical = false;  ///< residual within sphere_fit_tolerance
};

inline constexpr double sphere_fit_tolerance = 1e-7;

struct Classification {
  double umbilicity = 0.0;
  double centered_metric = 0.0;
  SphereFit fit;
};

struct SolveResult {
  RadialProfile profile;
  std::vector<double> residual_history;  ///< max-norm residual per accepted iterate, iterate 0 first
  std::vector<double> step_lengths;      ///< damping factor of each accepted step
  std::vector<int> stage_starts;         ///< history index of iterate 0, then of each continuation stage start
  SolveStatus status = SolveStatus::max_steps;
  bool converged = false;
  int steps = 0;
  Classification classification;
  std::vector<Eigen::Index> cone_exit_nodes;  ///< nodes that left the cone in the last rejected trial
  int cone_rejections = 0;
  std::string message;

  double final_residual() const { return residual_history.empty() ? 0.0 : residual_history.back(); }
};

/// Largest closed-cone order the expression needs (0 when none): the highest
/// shifted index among its terms, 2j for L_j, and only when that is >= 2.
int required_cone_order(const CurvatureExpr& expr);

/// Pointwise residual expr(r) - target * target_fn(r) of a profile.
Eigen::VectorXd collocation_residual(const SolveConfig& cfg, const RadialProfile& profile);

/// dF/dr: central differences in the pointwise arguments (r, r_x, r_xx) with
/// step 1e-6 (1 + |value|), chained through the differentiation matrices.
Eigen::MatrixXd collocation_jacobian(const SolveConfig& cfg, const RadialProfile& profile);

/// Damped Newton with a finite-difference Jacobian and minimum-norm steps.
/// Failures are reported in the result, never thrown; ArgumentError only for
/// malformed configurations.
SolveResult solve_constant_equation(const SolveConfig& cfg);

/// Least-squares fit of a geodesic sphere (rho, d) to the profile.
SphereFit fit_sphere(const RadialProfile& profile);

Classification classify_solution(const RadialProfile& profile);

/// One stage of a sweep: coefficient-scaled expression and target.
struct SweepPoint {
  CurvatureExpr expr;
  double target = 0.0;
  std::string label;
};

/// Solves each point warm-started from the previous solution. Stops after
/// the first point when it fails. ArgumentError when a point's expression has
/// only zero coefficients.
std::vector<SolveResult> continuation_sweep(const SolveConfig& base, const std::vector<SweepPoint>& path);

/// Equation of a theorem's hypothesis with the constant read off the centered
/// sphere of radius rho_ref.
SolveConfig equation_for_theorem(const TheoremConfig& cfg, int n, int grid, double rho_ref = 1.0);

struct EnsembleSpec {
  int members = 20;
  double max_amplitude = 0.2;
  std::vector<int> modes = {2, 3};
  double offset_fraction = 0.0;  ///< share of members started from offset spheres
  double max_offset = 0.3;
  double rho = 1.0;
  unsigned long long seed = 1;
  bool parallel = true;
};

struct EnsembleMember {
  int index = 0;
  std::string init;  ///< surface spec string of the initial profile
  SolveResult result;
};

struct EnsembleSummary {
  int members = 0;
  int converged = 0;
  int umbilic = 0;    ///< converged with umbilicity <= threshold
  int centered = 0;   ///< converged with centered_metric <= threshold
  double threshold = 1e-8;
};

/// Initial surfaces drawn from the seed; deterministic for a given spec.
std::vector<std::string> ensemble_inits(const EnsembleSpec& spec);

std::vector<EnsembleMember> perturbation_ensemble(const SolveConfig& base, const EnsembleSpec& spec);

EnsembleSummary summarize(const std::vector<EnsembleMember>& members, double threshold = 1e-8);

/// member,init,status,converged,steps,final_residual,umbilicity,centered_metric,rho_fit,d_fit,fit_residual
std::string ensemble_csv(const std::vector<EnsembleMember>& members);

}  // namespace shiftcurv
