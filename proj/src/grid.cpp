#include "shiftcurv/grid.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "shiftcurv/errors.hpp"

namespace shiftcurv {

GaussRule gauss_gegenbauer(int count, double alpha) {
  if (count < 2) throw ArgumentError("gauss_gegenbauer: need at least 2 nodes");
  if (!(alpha > -1.0)) throw ArgumentError("gauss_gegenbauer: alpha must exceed -1");
  // Jacobi matrix of the monic orthogonal polynomials for (1-x^2)^alpha.
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(count);
  Eigen::VectorXd off(count - 1);
  for (int k = 1; k < count; ++k) {
    const double kk = k;
    const double s = 2.0 * kk + 2.0 * alpha;
    off(k - 1) = std::sqrt(kk * (kk + 2.0 * alpha) / ((s + 1.0) * (s - 1.0)));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw NumericalError("gauss_gegenbauer: eigen solve failed");

  const double mu0 = std::sqrt(std::numbers::pi) * std::tgamma(alpha + 1.0) / std::tgamma(alpha + 1.5);
  GaussRule rule;
  rule.nodes.resize(count);
  rule.weights.resize(count);
  for (int i = 0; i < count; ++i) {
    // eigenvalues come out ascending; store descending in x
    const int src = count - 1 - i;
    const double v0 = solver.eigenvectors()(0, src);
    rule.nodes(i) = solver.eigenvalues()(src);
    rule.weights(i) = mu0 * v0 * v0;
  }
  // symmetrize: the rule is exactly symmetric about 0
  for (int i = 0; i < count / 2; ++i) {
    const int j = count - 1 - i;
    const double xn = 0.5 * (rule.nodes(i) - rule.nodes(j));
    const double wn = 0.5 * (rule.weights(i) + rule.weights(j));
    rule.nodes(i) = xn;
    rule.nodes(j) = -xn;
    rule.weights(i) = rule.weights(j) = wn;
  }
  if (count % 2 == 1) rule.nodes(count / 2) = 0.0;
  return rule;
}

Eigen::VectorXd barycentric_weights(const Eigen::VectorXd& nodes) {
  const Eigen::Index n = nodes.size();
  Eigen::VectorXd logw(n);
  std::vector<int> sign(static_cast<std::size_t>(n), 1);
  for (Eigen::Index j = 0; j < n; ++j) {
    double acc = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
      if (k == j) continue;
      const double d = nodes(j) - nodes(k);
      if (d == 0.0) throw ArgumentError("barycentric_weights: repeated node");
      acc -= std::log(std::abs(d));
      if (d < 0) sign[static_cast<std::size_t>(j)] = -sign[static_cast<std::size_t>(j)];
    }
    logw(j) = acc;
  }
  const double shift = logw.maxCoeff();
  Eigen::VectorXd w(n);
  for (Eigen::Index j = 0; j < n; ++j) w(j) = sign[static_cast<std::size_t>(j)] * std::exp(logw(j) - shift);
  return w;
}

double barycentric_interpolate(const Eigen::VectorXd& nodes, const Eigen::VectorXd& bary,
                               const Eigen::VectorXd& values, double at) {
  double num = 0.0, den = 0.0;
  for (Eigen::Index j = 0; j < nodes.size(); ++j) {
    const double d = at - nodes(j);
    if (d == 0.0) return values(j);
    const double t = bary(j) / d;
    num += t * values(j);
    den += t;
  }
  return num / den;
}

Eigen::MatrixXd barycentric_differentiation(const Eigen::VectorXd& nodes) {
  const Eigen::Index n = nodes.size();
  const Eigen::VectorXd w = barycentric_weights(nodes);
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double diag = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      d(i, j) = (w(j) / w(i)) / (nodes(i) - nodes(j));
      diag -= d(i, j);
    }
    d(i, i) = diag;
  }
  return d;
}

Eigen::MatrixXd fourier_first_derivative(int count) {
  if (count < 2 || count % 2) throw ArgumentError("fourier_first_derivative: count must be even and >= 2");
  const double h = 2.0 * std::numbers::pi / count;
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(count, count);
  for (int i = 0; i < count; ++i)
    for (int j = 0; j < count; ++j) {
      if (i == j) continue;
      const int m = i - j;
      const double sgn = (m % 2 == 0) ? 1.0 : -1.0;
      d(i, j) = 0.5 * sgn / std::tan(0.5 * m * h);
    }
  return d;
}

Eigen::MatrixXd fourier_second_derivative(int count) {
  if (count < 2 || count % 2) throw ArgumentError("fourier_second_derivative: count must be even and >= 2");
  const double h = 2.0 * std::numbers::pi / count;
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(count, count);
  for (int i = 0; i < count; ++i)
    for (int j = 0; j < count; ++j) {
      if (i == j) {
        d(i, j) = -std::numbers::pi * std::numbers::pi / (3.0 * h * h) - 1.0 / 6.0;
        continue;
      }
      const int m = i - j;
      const double sgn = (m % 2 == 0) ? 1.0 : -1.0;
      const double s = std::sin(0.5 * m * h);
      d(i, j) = -0.5 * sgn / (s * s);
    }
  return d;
}

double unit_sphere_area(int m) {
  if (m < 0) throw ArgumentError("unit_sphere_area: negative dimension");
  // omega_m = 2 pi^{(m+1)/2} / Gamma((m+1)/2)
  return 2.0 * std::pow(std::numbers::pi, 0.5 * (m + 1)) / std::tgamma(0.5 * (m + 1));
}

std::shared_ptr<const ColatitudeGrid> make_colatitude_grid(int count, int n) {
  if (n < 2) throw DomainError("make_colatitude_grid: axisymmetric representation needs n >= 2");
  if (count < 4) throw ArgumentError("make_colatitude_grid: need at least 4 nodes");
  auto g = std::make_shared<ColatitudeGrid>();
  g->n = n;
  const GaussRule rule = gauss_gegenbauer(count, 0.5 * (n - 2));
  g->x = rule.nodes;
  g->theta = g->x.array().acos();
  g->sin_theta = (1.0 - g->x.array().square()).sqrt();
  g->weights = rule.weights * unit_sphere_area(n - 1);
  g->bary = barycentric_weights(g->x);
  g->dx = barycentric_differentiation(g->x);
  g->dxx = g->dx * g->dx;
  return g;
}

Eigen::VectorXd fejer_weights(int count) {
  Eigen::VectorXd w(count);
  for (int k = 0; k < count; ++k) {
    const double t = (k + 0.5) * std::numbers::pi / count;
    double s = 0.0;
    for (int j = 1; j <= count / 2; ++j) s += std::cos(2.0 * j * t) / (4.0 * j * j - 1.0);
    w(k) = (2.0 / count) * (1.0 - 2.0 * s);
  }
  return w;
}

std::shared_ptr<const SphereGrid2> make_sphere_grid2(int n_theta, int n_phi) {
  if (n_theta < 4) throw ArgumentError("make_sphere_grid2: need at least 4 colatitude nodes");
  if (n_phi < 4 || n_phi % 2) throw ArgumentError("make_sphere_grid2: longitude count must be even and >= 4");
  auto g = std::make_shared<SphereGrid2>();
  g->theta.resize(n_theta);
  for (int i = 0; i < n_theta; ++i) g->theta(i) = (i + 0.5) * std::numbers::pi / n_theta;
  g->x = g->theta.array().cos();
  g->sin_theta = g->theta.array().sin();
  g->x_weights = fejer_weights(n_theta);
  g->phi.resize(n_phi);
  for (int j = 0; j < n_phi; ++j) g->phi(j) = 2.0 * std::numbers::pi * j / n_phi;
  g->phi_weight = 2.0 * std::numbers::pi / n_phi;

  const int m = 2 * n_theta;
  const Eigen::MatrixXd d1 = fourier_first_derivative(m);
  const Eigen::MatrixXd d2 = fourier_second_derivative(m);
  g->dt_same = d1.topLeftCorner(n_theta, n_theta);
  g->dtt_same = d2.topLeftCorner(n_theta, n_theta);
  g->dt_opposite.resize(n_theta, n_theta);
  g->dtt_opposite.resize(n_theta, n_theta);
  // extended point k >= n_theta is the mirror of node 2 n_theta - 1 - k
  for (int i = 0; i < n_theta; ++i)
    for (int k = 0; k < n_theta; ++k) {
      g->dt_opposite(i, k) = d1(i, m - 1 - k);
      g->dtt_opposite(i, k) = d2(i, m - 1 - k);
    }
  g->dphi = fourier_first_derivative(n_phi);
  g->dphiphi = fourier_second_derivative(n_phi);
  return g;
}

}  // namespace shiftcurv
