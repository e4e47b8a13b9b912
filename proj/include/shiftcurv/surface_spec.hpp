#pragma once

#include <string>
#include <vector>

#include "shiftcurv/hypersurface.hpp"

namespace shiftcurv {

/// Parsed surface description.
///
///   sphere:rho=<f>[:d=<f>][:tilt=<f>]        geodesic sphere, center offset d
///   perturbed:rho=<f>:eps=<f>:mode=<int>     r = rho + eps P_mode(cos theta)
///   bump:rho=<f>:eps=<f>[:center=<f>][:width=<f>]
///                                            r = rho + eps / (1 + ((cos theta - center)/width)^2)
///   ylm:rho=<f>:eps=<f>:l=<int>:m=<int>      r = rho + eps P_l^m(cos theta) cos(m phi), n = 2 only
///   table:<path>                             CSV of theta,r pairs, linear interpolation
///
/// tilt != 0 rotates the sphere center off the symmetry axis and needs n = 2.
struct SurfaceSpec {
  enum class Kind { sphere, perturbed, bump, ylm, table };
  Kind kind = Kind::sphere;
  double rho = 1.0;
  double d = 0.0;
  double tilt = 0.0;
  double eps = 0.0;
  int mode = 2;
  int l = 2;
  int m = 0;
  double center = 0.3;
  double width = 0.25;
  std::string path;
  std::vector<double> table_theta, table_r;

  bool needs_full_grid() const { return kind == Kind::ylm || (kind == Kind::sphere && tilt != 0.0); }
};

SurfaceSpec parse_surface_spec(const std::string& text);

/// r(theta) for axisymmetric kinds.
double axisymmetric_radius(const SurfaceSpec& spec, double theta);

RadialProfile build_profile(const SurfaceSpec& spec, int n, int grid);

/// Axisymmetric kinds use a ColatitudeGrid of `grid` nodes; full-grid kinds
/// use grid x 2*grid nodes on S^2.
GeometryField build_geometry(const SurfaceSpec& spec, int n, int grid);

}  // namespace shiftcurv
