#pragma once

#include <Eigen/Core>

#include <limits>
#include <string>
#include <vector>

#include "shiftcurv/hypersurface.hpp"

namespace shiftcurv {

/// Sum with a fixed binary reduction tree (blocks of 8 at the leaves), so the
/// result depends only on the input order.
double pairwise_sum(const double* data, Eigen::Index count);

/// Kahan-compensated variant, same contract.
double compensated_sum(const double* data, Eigen::Index count);

/// int_Sigma f dmu.
double surface_integral(const Eigen::VectorXd& values, const GeometryField& geom);

/// int_Omega V dvol for the region enclosed by a star-shaped surface,
/// via int_0^r cosh(s) sinh^n(s) ds = sinh^{n+1}(r) / (n+1).
double enclosed_weighted_volume(const GeometryField& geom);

enum class ConvergenceStatus {
  established,       ///< monotone errors, least-squares order reported
  resolved,          ///< every error already at the round-off floor
  not_established,   ///< error sequence not monotone
};

struct ConvergenceEstimate {
  double order = std::numeric_limits<double>::quiet_NaN();
  ConvergenceStatus status = ConvergenceStatus::not_established;
  std::string note;
};

/// Least-squares slope of log(error) against log(N), sign flipped. Errors
/// all below `roundoff_floor` mean the discretization is already converged;
/// that is reported as `resolved` with an infinite order.
ConvergenceEstimate convergence_order(const std::vector<int>& grid_sizes, const std::vector<double>& errors,
                                      double roundoff_floor = 1e-13);

std::string to_string(ConvergenceStatus status);

}  // namespace shiftcurv
