#include "shiftcurv/integrate.hpp"

#include <cmath>

#include "shiftcurv/errors.hpp"

namespace shiftcurv {

double pairwise_sum(const double* data, Eigen::Index count) {
  if (count <= 8) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < count; ++i) s += data[i];
    return s;
  }
  const Eigen::Index half = count / 2;
  return pairwise_sum(data, half) + pairwise_sum(data + half, count - half);
}

double compensated_sum(const double* data, Eigen::Index count) {
  double sum = 0.0, carry = 0.0;
  for (Eigen::Index i = 0; i < count; ++i) {
    const double y = data[i] - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  return sum;
}

double surface_integral(const Eigen::VectorXd& values, const GeometryField& geom) {
  if (values.size() != geom.size()) throw ArgumentError("surface_integral: field size does not match the grid");
  Eigen::VectorXd terms(values.size());
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values(i))) throw NumericalError("surface_integral: non-finite field value at node " + std::to_string(i));
    terms(i) = geom.area_weight(i) * values(i);
  }
  return pairwise_sum(terms.data(), terms.size());
}

double enclosed_weighted_volume(const GeometryField& geom) {
  const int n = geom.n;
  Eigen::VectorXd terms(geom.size());
  for (Eigen::Index i = 0; i < geom.size(); ++i)
    terms(i) = geom.sphere_weight(i) * std::pow(std::sinh(geom.curvature.r(i)), n + 1);
  return pairwise_sum(terms.data(), terms.size()) / (n + 1);
}

ConvergenceEstimate convergence_order(const std::vector<int>& grid_sizes, const std::vector<double>& errors,
                                      double roundoff_floor) {
  if (grid_sizes.size() != errors.size()) throw ArgumentError("convergence_order: size mismatch");
  if (grid_sizes.size() < 3) throw ArgumentError("convergence_order: need at least 3 grids");
  ConvergenceEstimate est;
  bool all_floor = true;
  for (double e : errors) all_floor = all_floor && std::abs(e) <= roundoff_floor;
  if (all_floor) {
    est.status = ConvergenceStatus::resolved;
    est.order = std::numeric_limits<double>::infinity();
    est.note = "all errors at or below the round-off floor; order undefined (spectrally resolved)";
    return est;
  }
  for (std::size_t i = 1; i < errors.size(); ++i) {
    if (std::abs(errors[i]) > std::abs(errors[i - 1]) && std::abs(errors[i]) > roundoff_floor) {
      est.status = ConvergenceStatus::not_established;
      est.note = "error sequence is not monotone";
      return est;
    }
  }
  // fit only the part of the sequence above the floor
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (std::size_t i = 0; i < errors.size(); ++i) {
    const double e = std::max(std::abs(errors[i]), roundoff_floor);
    if (i > 0 && std::abs(errors[i - 1]) <= roundoff_floor) break;
    const double x = std::log(static_cast<double>(grid_sizes[i]));
    const double y = std::log(e);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m < 2) {
    est.status = ConvergenceStatus::resolved;
    est.order = std::numeric_limits<double>::infinity();
    est.note = "error reached the round-off floor after the first grid";
    return est;
  }
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  est.order = -slope;
  est.status = ConvergenceStatus::established;
  return est;
}

std::string to_string(ConvergenceStatus status) {
  switch (status) {
    case ConvergenceStatus::established: return "established";
    case ConvergenceStatus::resolved: return "resolved";
    case ConvergenceStatus::not_established: return "not-established";
  }
  return "unknown";
}

}  // namespace shiftcurv
