#pragma once

#include <Eigen/Core>

#include <functional>
#include <memory>
#include <variant>
#include <vector>

#include "shiftcurv/grid.hpp"

namespace shiftcurv {

/// Geodesic sphere of radius rho whose center lies at hyperbolic distance |d|
/// from the origin on the symmetry axis (d > 0 toward theta = 0, d < 0 toward
/// theta = pi). Star-shaped about the origin iff |d| < rho.
struct SphereSpec {
  double rho = 1.0;
  double d = 0.0;
};

/// Distance from the origin to the sphere along the ray at colatitude
/// acos(cos_theta): the root r of cosh(rho) = cosh r cosh d - sinh r sinh d cos(theta).
double sphere_radius_at(double cos_theta, const SphereSpec& spec);

/// Axisymmetric star-shaped hypersurface r = r(theta) over S^n sampled on a
/// ColatitudeGrid.
struct RadialProfile {
  std::shared_ptr<const ColatitudeGrid> grid;
  Eigen::VectorXd r;

  int n() const { return grid->n; }
  int size() const { return grid->size(); }
};

/// Non-axisymmetric star-shaped surface r = r(theta, phi) over S^2.
/// r(i * n_phi + j) is the value at (theta_i, phi_j).
struct SurfaceGrid2 {
  std::shared_ptr<const SphereGrid2> grid;
  Eigen::VectorXd r;

  int size() const { return grid->size(); }
};

RadialProfile sphere_profile(const SphereSpec& spec, int n, int count);
RadialProfile profile_from_function(int n, int count, const std::function<double(double theta)>& r_of_theta);
SurfaceGrid2 grid2_from_function(int n_theta, int n_phi,
                                 const std::function<double(double theta, double phi)>& r_of_angles);

/// Pointwise curvature data: everything the curvature functionals need.
struct PointwiseCurvature {
  int n = 0;
  Eigen::VectorXd r, V, u;
  Eigen::MatrixXd kappa;      ///< nodes x n, ascending per node
  Eigen::MatrixXd H;          ///< nodes x (n+1), H_k(kappa)
  Eigen::MatrixXd H_shifted;  ///< nodes x (n+1), H_k(kappa - 1)

  Eigen::Index size() const { return r.size(); }
  Eigen::VectorXd kappa_shifted_row(Eigen::Index node) const {
    return kappa.row(node).transpose().array() - 1.0;
  }
};

/// Curvature data of an axisymmetric profile without the frame matrices;
/// this is the hot path of the rigidity solver.
PointwiseCurvature pointwise_curvature(const RadialProfile& profile);

/// Same from r and its x-derivatives at the nodes; each node depends only on
/// its own three values.
PointwiseCurvature pointwise_curvature(const ColatitudeGrid& grid, const Eigen::VectorXd& r,
                                       const Eigen::VectorXd& rx, const Eigen::VectorXd& rxx);

/// Fills H and H_shifted from kappa.
void fill_symmetric_tables(PointwiseCurvature& c);

/// All pointwise geometry of a star-shaped hypersurface. Immutable once
/// built; the frame at each node is orthonormal, so `shape` is the symmetric
/// Weingarten matrix and gradients are plain component vectors.
struct GeometryField {
  int n = 0;
  std::variant<RadialProfile, SurfaceGrid2> source;
  PointwiseCurvature curvature;

  Eigen::VectorXd theta, phi;        ///< node coordinates (phi = 0 for axisymmetric)
  Eigen::VectorXd sphere_weight;     ///< quadrature weight of dsigma on S^n
  Eigen::VectorXd area_weight;       ///< quadrature weight of dmu on the surface
  std::vector<Eigen::MatrixXd> metric;       ///< g in coordinates
  std::vector<Eigen::MatrixXd> second_form;  ///< h in coordinates
  std::vector<Eigen::MatrixXd> coframe;      ///< coordinate differential -> frame components
  std::vector<Eigen::MatrixXd> shape;        ///< Weingarten map in the frame
  Eigen::MatrixXd grad_r;            ///< nodes x n
  Eigen::MatrixXd grad_V;            ///< nodes x n

  Eigen::Index size() const { return curvature.size(); }
  bool axisymmetric() const { return std::holds_alternative<RadialProfile>(source); }

  /// Tangential gradient (frame components) of a field sampled at the nodes.
  Eigen::MatrixXd gradient(const Eigen::VectorXd& samples) const;
};

GeometryField geometry_from_profile(const RadialProfile& profile);
GeometryField geometry_from_profile(const SurfaceGrid2& surface);

/// max over nodes and frame entries of |Hess V - (V g - u h)|, with Hess V
/// computed from the discrete metric and the samples of V only.
double hessV_residual(const GeometryField& field);

struct EllipticPoint {
  Eigen::Index node = 0;  ///< grid node with the largest r
  double r_max = 0.0;     ///< max of r (refined off-grid for axisymmetric profiles)
  double margin = 0.0;    ///< min_i kappa_i - coth(r_max) at the maximum
};

EllipticPoint elliptic_point(const GeometryField& field);

/// min over nodes of sum_i kappa_i - n.
double mean_convexity_margin(const GeometryField& field);

}  // namespace shiftcurv
