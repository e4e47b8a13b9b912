#pragma once

#include <Eigen/Core>

#include <memory>

namespace shiftcurv {

/// Gauss-Jacobi rule for the symmetric weight (1 - x^2)^alpha on [-1, 1],
/// built by Golub-Welsch. Nodes are returned in decreasing x.
struct GaussRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

GaussRule gauss_gegenbauer(int count, double alpha);

/// Barycentric weights for interpolation through arbitrary distinct nodes,
/// normalized to max |w| = 1. Computed in log space so N in the hundreds
/// does not overflow.
Eigen::VectorXd barycentric_weights(const Eigen::VectorXd& nodes);

/// Value at `at` of the polynomial interpolant through (nodes, values).
double barycentric_interpolate(const Eigen::VectorXd& nodes, const Eigen::VectorXd& bary,
                               const Eigen::VectorXd& values, double at);

/// First-derivative matrix of the barycentric interpolant through `nodes`.
/// Diagonal uses the negative-sum trick so constants differentiate to ~0.
Eigen::MatrixXd barycentric_differentiation(const Eigen::VectorXd& nodes);

/// First and second spectral derivative matrices on `count` equispaced
/// points of [0, 2pi). count must be even.
Eigen::MatrixXd fourier_first_derivative(int count);
Eigen::MatrixXd fourier_second_derivative(int count);

/// Colatitude grid for axisymmetric hypersurfaces over S^n, in x = cos(theta).
///
/// Nodes are the Gauss-Jacobi nodes for (1 - x^2)^{(n-2)/2}, so surface
/// integrals of smooth functions of x converge spectrally for every n and no
/// node sits on a pole. Functions of theta that are even about both poles are
/// exactly the smooth functions of x, so parity at the poles holds by
/// construction.
struct ColatitudeGrid {
  int n = 0;                  ///< sphere dimension of S^n
  Eigen::VectorXd x;          ///< cos(theta), decreasing
  Eigen::VectorXd theta;      ///< increasing in (0, pi)
  Eigen::VectorXd sin_theta;
  Eigen::VectorXd weights;    ///< includes area of S^{n-1}
  Eigen::VectorXd bary;       ///< barycentric weights of x
  Eigen::MatrixXd dx;         ///< d/dx
  Eigen::MatrixXd dxx;        ///< d^2/dx^2

  int size() const { return static_cast<int>(x.size()); }
};

std::shared_ptr<const ColatitudeGrid> make_colatitude_grid(int count, int n);

/// Tensor grid on S^2: offset equispaced colatitudes theta_i = (i + 1/2) pi / n_theta
/// (Fejer quadrature in cos(theta)) times equispaced longitude. Node (i, j)
/// is stored at i * n_phi + j.
///
/// Colatitude derivatives use the double-covering trick: a function on S^2
/// extends to theta in (0, 2 pi) by f(2 pi - theta, phi) = f(theta, phi + pi),
/// which is smooth and periodic, so Fourier differentiation applies. With
/// f' the column at longitude phi + pi,
///   d/dtheta f = dt_same * f + dt_opposite * f'.
struct SphereGrid2 {
  Eigen::VectorXd x, theta, sin_theta;  ///< size n_theta
  Eigen::VectorXd phi;                  ///< size n_phi
  Eigen::VectorXd x_weights;            ///< Fejer weights in x = cos(theta)
  double phi_weight = 0.0;              ///< 2 pi / n_phi
  Eigen::MatrixXd dt_same, dt_opposite;    ///< first theta derivative
  Eigen::MatrixXd dtt_same, dtt_opposite;  ///< second theta derivative
  Eigen::MatrixXd dphi, dphiphi;        ///< n_phi x n_phi

  int n_theta() const { return static_cast<int>(x.size()); }
  int n_phi() const { return static_cast<int>(phi.size()); }
  int size() const { return n_theta() * n_phi(); }
  /// column index of longitude phi_j + pi
  int opposite(int j) const { return (j + n_phi() / 2) % n_phi(); }
};

/// Fejer's first rule on x_k = cos((k + 1/2) pi / count).
Eigen::VectorXd fejer_weights(int count);

/// Fourier derivative matrices on `count` points of [0, 2pi) offset by half a
/// step, i.e. at (k + 1/2) 2pi / count. Same entries as the unshifted ones.
std::shared_ptr<const SphereGrid2> make_sphere_grid2(int n_theta, int n_phi);

/// Area of the unit sphere S^m.
double unit_sphere_area(int m);

}  // namespace shiftcurv
