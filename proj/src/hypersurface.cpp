#include "shiftcurv/hypersurface.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "shiftcurv/errors.hpp"
#include "shiftcurv/symfun.hpp"

namespace shiftcurv {

double sphere_radius_at(double cos_theta, const SphereSpec& spec) {
  const double rho = spec.rho;
  const double d = spec.d;
  if (!(rho > 0.0)) throw DomainError("sphere: rho must be positive");
  if (!(std::abs(d) < rho)) throw DomainError("sphere: |d| must be smaller than rho for a star-shaped graph");
  if (d == 0.0) return rho;
  const double ch_rho = std::cosh(rho), ch_d = std::cosh(d), sh_d = std::sinh(d);
  auto f = [&](double r) { return std::cosh(r) * ch_d - std::sinh(r) * sh_d * cos_theta - ch_rho; };
  double lo = 0.0, hi = rho + std::abs(d);
  double flo = f(lo), fhi = f(hi);
  if (fhi == 0.0) return hi;
  if (!(flo < 0.0 && fhi > 0.0)) {
    // round-off at the far pole: widen slightly
    hi *= 1.0 + 1e-12;
    fhi = f(hi);
    if (!(flo < 0.0 && fhi >= 0.0)) throw NumericalError("sphere_radius_at: root not bracketed");
  }
  std::uintmax_t iters = 200;
  const auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi,
                                                        boost::math::tools::eps_tolerance<double>(52), iters);
  const double root = 0.5 * (a + b);
  if (std::abs(f(root)) > 1e-12 * ch_rho) throw NumericalError("sphere_radius_at: residual above 1e-12");
  return root;
}

RadialProfile sphere_profile(const SphereSpec& spec, int n, int count) {
  RadialProfile p;
  p.grid = make_colatitude_grid(count, n);
  p.r.resize(count);
  for (int i = 0; i < count; ++i) p.r(i) = sphere_radius_at(p.grid->x(i), spec);
  return p;
}

RadialProfile profile_from_function(int n, int count, const std::function<double(double)>& r_of_theta) {
  RadialProfile p;
  p.grid = make_colatitude_grid(count, n);
  p.r.resize(count);
  for (int i = 0; i < count; ++i) p.r(i) = r_of_theta(p.grid->theta(i));
  return p;
}

SurfaceGrid2 grid2_from_function(int n_theta, int n_phi, const std::function<double(double, double)>& r_of_angles) {
  SurfaceGrid2 s;
  s.grid = make_sphere_grid2(n_theta, n_phi);
  s.r.resize(s.grid->size());
  for (int i = 0; i < n_theta; ++i)
    for (int j = 0; j < n_phi; ++j) s.r(i * n_phi + j) = r_of_angles(s.grid->theta(i), s.grid->phi(j));
  return s;
}

namespace {

void check_radii(const Eigen::VectorXd& r) {
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    if (!std::isfinite(r(i))) throw NumericalError("radial function is not finite at node " + std::to_string(i));
    if (!(r(i) > 0.0)) throw DomainError("radial function r <= 0 at node " + std::to_string(i));
  }
}

/// Meridian/parallel geometry of an axisymmetric graph at one point, from
/// x = cos(theta) and the x-derivatives of r.
struct AxisPoint {
  double lambda, dlambda;  // sinh r, cosh r
  double r_theta;
  double v;                // sqrt(1 + |grad phi|^2), phi = log tanh(r/2)
  double kappa_m, kappa_p;
  double u;
  double meridian_scale;   // |d/dtheta| in the induced metric
};

AxisPoint axis_point(double x, double r, double rx, double rxx) {
  AxisPoint p{};
  const double s2 = std::max(0.0, 1.0 - x * x);
  const double s = std::sqrt(s2);
  p.lambda = std::sinh(r);
  p.dlambda = std::cosh(r);
  p.r_theta = -s * rx;
  const double r_tt = -x * rx + s2 * rxx;
  const double phi_t = p.r_theta / p.lambda;
  const double phi_tt = (r_tt * p.lambda - p.r_theta * p.r_theta * p.dlambda) / (p.lambda * p.lambda);
  const double v2 = 1.0 + phi_t * phi_t;
  p.v = std::sqrt(v2);
  p.kappa_m = (p.dlambda * v2 - phi_tt) / (p.lambda * v2 * p.v);
  // cot(theta) * phi_theta = -x r_x / lambda, regular at the poles
  p.kappa_p = (p.dlambda + x * rx / p.lambda) / (p.lambda * p.v);
  p.u = p.lambda / p.v;
  p.meridian_scale = p.lambda * p.v;
  return p;
}

void sort_rows(Eigen::MatrixXd& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Eigen::VectorXd row = m.row(i).transpose();
    std::sort(row.data(), row.data() + row.size());
    m.row(i) = row.transpose();
  }
}

}  // namespace

void fill_symmetric_tables(PointwiseCurvature& c) {
  const Eigen::Index nodes = c.kappa.rows();
  c.H.resize(nodes, c.n + 1);
  c.H_shifted.resize(nodes, c.n + 1);
  for (Eigen::Index i = 0; i < nodes; ++i) {
    const Eigen::VectorXd k = c.kappa.row(i).transpose();
    c.H.row(i) = sym_table<double>(k).normalized.transpose();
    c.H_shifted.row(i) = sym_table<double>(Eigen::VectorXd(k.array() - 1.0)).normalized.transpose();
  }
}

PointwiseCurvature pointwise_curvature(const RadialProfile& profile) {
  const ColatitudeGrid& g = *profile.grid;
  const Eigen::VectorXd rx = g.dx * profile.r;
  return pointwise_curvature(g, profile.r, rx, g.dx * rx);
}

PointwiseCurvature pointwise_curvature(const ColatitudeGrid& g, const Eigen::VectorXd& r, const Eigen::VectorXd& rx,
                                       const Eigen::VectorXd& rxx) {
  check_radii(r);
  const int n = g.n;
  PointwiseCurvature c;
  c.n = n;
  c.r = r;
  c.V = r.array().cosh();
  c.u.resize(g.size());
  c.kappa.resize(g.size(), n);
  for (int i = 0; i < g.size(); ++i) {
    const AxisPoint p = axis_point(g.x(i), r(i), rx(i), rxx(i));
    if (!std::isfinite(p.kappa_m) || !std::isfinite(p.kappa_p))
      throw NumericalError("non-finite curvature at node " + std::to_string(i));
    c.u(i) = p.u;
    c.kappa(i, 0) = p.kappa_m;
    for (int a = 1; a < n; ++a) c.kappa(i, a) = p.kappa_p;
  }
  sort_rows(c.kappa);
  fill_symmetric_tables(c);
  return c;
}

GeometryField geometry_from_profile(const RadialProfile& profile) {
  check_radii(profile.r);
  const ColatitudeGrid& g = *profile.grid;
  const int n = g.n;
  const int count = g.size();
  const Eigen::VectorXd rx = g.dx * profile.r;
  const Eigen::VectorXd rxx = g.dx * rx;

  GeometryField f;
  f.n = n;
  f.source = profile;
  f.theta = g.theta;
  f.phi = Eigen::VectorXd::Zero(count);
  f.sphere_weight = g.weights;
  f.area_weight.resize(count);
  f.grad_r = Eigen::MatrixXd::Zero(count, n);
  f.metric.resize(count);
  f.second_form.resize(count);
  f.coframe.resize(count);
  f.shape.resize(count);

  PointwiseCurvature& c = f.curvature;
  c.n = n;
  c.r = profile.r;
  c.V = profile.r.array().cosh();
  c.u.resize(count);
  c.kappa.resize(count, n);

  for (int i = 0; i < count; ++i) {
    const AxisPoint p = axis_point(g.x(i), profile.r(i), rx(i), rxx(i));
    if (!std::isfinite(p.kappa_m) || !std::isfinite(p.kappa_p))
      throw NumericalError("non-finite curvature at node " + std::to_string(i));
    c.u(i) = p.u;
    c.kappa(i, 0) = p.kappa_m;
    for (int a = 1; a < n; ++a) c.kappa(i, a) = p.kappa_p;

    // coordinates: theta, then n-1 orthonormal directions of the unit S^{n-1}
    Eigen::VectorXd gdiag(n), hdiag(n), kdiag(n);
    gdiag(0) = p.meridian_scale * p.meridian_scale;
    kdiag(0) = p.kappa_m;
    for (int a = 1; a < n; ++a) {
      gdiag(a) = p.lambda * p.lambda * g.sin_theta(i) * g.sin_theta(i);
      kdiag(a) = p.kappa_p;
    }
    hdiag = kdiag.cwiseProduct(gdiag);
    f.metric[static_cast<std::size_t>(i)] = gdiag.asDiagonal();
    f.second_form[static_cast<std::size_t>(i)] = hdiag.asDiagonal();
    f.shape[static_cast<std::size_t>(i)] = kdiag.asDiagonal();
    f.coframe[static_cast<std::size_t>(i)] = gdiag.cwiseSqrt().cwiseInverse().asDiagonal();
    f.grad_r(i, 0) = p.r_theta / p.meridian_scale;
    f.area_weight(i) = g.weights(i) * std::pow(p.lambda, n) * p.v;
  }
  sort_rows(c.kappa);
  fill_symmetric_tables(c);
  f.grad_V = f.grad_r.array().colwise() * profile.r.array().sinh();
  return f;
}

namespace {

struct Grid2Derivatives {
  Eigen::MatrixXd t, p, tt, tp, pp;  // theta/phi derivatives, n_theta x n_phi
};

/// parity = -1 for quantities that flip sign under theta -> -theta, phi -> phi + pi
/// (components carrying one theta index).
Grid2Derivatives grid2_derivatives(const SphereGrid2& g, const Eigen::VectorXd& samples, double parity = 1.0) {
  const int nt = g.n_theta(), np = g.n_phi();
  const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> f(samples.data(), nt, np);
  Eigen::MatrixXd opp(nt, np);  // column j holds the values at longitude phi_j + pi
  for (int j = 0; j < np; ++j) opp.col(j) = parity * f.col(g.opposite(j));
  Grid2Derivatives d;
  d.p = f * g.dphi.transpose();
  d.pp = f * g.dphiphi.transpose();
  d.t = g.dt_same * f + g.dt_opposite * opp;
  d.tt = g.dtt_same * f + g.dtt_opposite * opp;
  Eigen::MatrixXd p_opp(nt, np);
  for (int j = 0; j < np; ++j) p_opp.col(j) = parity * d.p.col(g.opposite(j));
  d.tp = g.dt_same * d.p + g.dt_opposite * p_opp;
  return d;
}

}  // namespace

GeometryField geometry_from_profile(const SurfaceGrid2& surface) {
  check_radii(surface.r);
  const SphereGrid2& g = *surface.grid;
  const int nt = g.n_theta(), np = g.n_phi(), count = g.size();
  const Grid2Derivatives dr = grid2_derivatives(g, surface.r);

  GeometryField f;
  f.n = 2;
  f.source = surface;
  f.theta.resize(count);
  f.phi.resize(count);
  f.sphere_weight.resize(count);
  f.area_weight.resize(count);
  f.grad_r.resize(count, 2);
  f.metric.resize(count);
  f.second_form.resize(count);
  f.coframe.resize(count);
  f.shape.resize(count);
  PointwiseCurvature& c = f.curvature;
  c.n = 2;
  c.r = surface.r;
  c.V = surface.r.array().cosh();
  c.u.resize(count);
  c.kappa.resize(count, 2);

  for (int i = 0; i < nt; ++i) {
    const double s = g.sin_theta(i), x = g.x(i);
    for (int j = 0; j < np; ++j) {
      const int node = i * np + j;
      const double r = surface.r(node);
      const double lam = std::sinh(r), dlam = std::cosh(r);
      const Eigen::Vector2d dr1(dr.t(i, j), dr.p(i, j));
      Eigen::Matrix2d dr2;
      dr2 << dr.tt(i, j), dr.tp(i, j), dr.tp(i, j), dr.pp(i, j);
      // phi = log tanh(r/2): dphi = dr / lambda
      const Eigen::Vector2d dphi = dr1 / lam;
      const Eigen::Matrix2d ddphi = (dr2 * lam - dr1 * dr1.transpose() * dlam) / (lam * lam);
      Eigen::Matrix2d sigma = Eigen::Matrix2d::Zero();
      sigma(0, 0) = 1.0;
      sigma(1, 1) = s * s;
      Eigen::Matrix2d hess;  // Hessian of phi on the round S^2
      hess(0, 0) = ddphi(0, 0);
      hess(0, 1) = hess(1, 0) = ddphi(0, 1) - (x / s) * dphi(1);
      hess(1, 1) = ddphi(1, 1) + s * x * dphi(0);
      const double v = std::sqrt(1.0 + dphi(0) * dphi(0) + dphi(1) * dphi(1) / (s * s));
      const Eigen::Matrix2d base = sigma + dphi * dphi.transpose();
      const Eigen::Matrix2d gm = lam * lam * base;
      const Eigen::Matrix2d hm = (lam / v) * (dlam * base - hess);
      const Eigen::Matrix2d lower = gm.llt().matrixL();
      const Eigen::Matrix2d linv = lower.inverse();
      Eigen::Matrix2d w = linv * hm * linv.transpose();
      w = 0.5 * (w + w.transpose()).eval();
      const double mean = 0.5 * w.trace();
      const double rad = std::sqrt(0.25 * (w(0, 0) - w(1, 1)) * (w(0, 0) - w(1, 1)) + w(0, 1) * w(0, 1));
      if (!std::isfinite(mean) || !std::isfinite(rad))
        throw NumericalError("non-finite curvature at node " + std::to_string(node));

      f.theta(node) = g.theta(i);
      f.phi(node) = g.phi(j);
      f.sphere_weight(node) = g.x_weights(i) * g.phi_weight;
      f.area_weight(node) = f.sphere_weight(node) * lam * lam * v;
      f.metric[static_cast<std::size_t>(node)] = gm;
      f.second_form[static_cast<std::size_t>(node)] = hm;
      f.coframe[static_cast<std::size_t>(node)] = linv;
      f.shape[static_cast<std::size_t>(node)] = w;
      f.grad_r.row(node) = (linv * dr1).transpose();
      c.u(node) = lam / v;
      c.kappa(node, 0) = mean - rad;
      c.kappa(node, 1) = mean + rad;
    }
  }
  fill_symmetric_tables(c);
  f.grad_V = f.grad_r.array().colwise() * surface.r.array().sinh();
  return f;
}

Eigen::MatrixXd GeometryField::gradient(const Eigen::VectorXd& samples) const {
  if (samples.size() != size()) throw ArgumentError("gradient: sample count does not match the grid");
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(size(), n);
  if (const auto* prof = std::get_if<RadialProfile>(&source)) {
    const ColatitudeGrid& g = *prof->grid;
    const Eigen::VectorXd fx = g.dx * samples;
    for (int i = 0; i < g.size(); ++i) out(i, 0) = coframe[static_cast<std::size_t>(i)](0, 0) * (-g.sin_theta(i) * fx(i));
    return out;
  }
  const SurfaceGrid2& surf = std::get<SurfaceGrid2>(source);
  const Grid2Derivatives d = grid2_derivatives(*surf.grid, samples);
  const int np = surf.grid->n_phi();
  for (Eigen::Index node = 0; node < size(); ++node) {
    const Eigen::Index i = node / np, j = node % np;
    const Eigen::Vector2d df(d.t(i, j), d.p(i, j));
    out.row(node) = (coframe[static_cast<std::size_t>(node)] * df).transpose();
  }
  return out;
}

double hessV_residual(const GeometryField& field) {
  const PointwiseCurvature& c = field.curvature;
  double worst = 0.0;
  if (const auto* prof = std::get_if<RadialProfile>(&field.source)) {
    const ColatitudeGrid& g = *prof->grid;
    const int count = g.size();
    // intrinsic data only: V, the meridian length scale A and the parallel radius factor lambda
    Eigen::VectorXd a(count), lam(count);
    for (int i = 0; i < count; ++i) {
      a(i) = std::sqrt(field.metric[static_cast<std::size_t>(i)](0, 0));
      lam(i) = std::sinh(c.r(i));
    }
    const Eigen::VectorXd vx = g.dx * c.V;
    const Eigen::VectorXd vxx = g.dx * vx;
    const Eigen::VectorXd ax = g.dx * a;
    const Eigen::VectorXd lx = g.dx * lam;
    for (int i = 0; i < count; ++i) {
      const double s = g.sin_theta(i), x = g.x(i);
      const double v_t = -s * vx(i);
      const double v_tt = -x * vx(i) + s * s * vxx(i);
      const double a_t = -s * ax(i);
      const double hess_mer = (v_tt - v_t * a_t / a(i)) / (a(i) * a(i));
      const double hess_par = (s * s * lx(i) * vx(i) / lam(i) - x * vx(i)) / (a(i) * a(i));
      const Eigen::MatrixXd& w = field.shape[static_cast<std::size_t>(i)];
      worst = std::max(worst, std::abs(hess_mer - (c.V(i) - c.u(i) * w(0, 0))));
      if (field.n > 1) worst = std::max(worst, std::abs(hess_par - (c.V(i) - c.u(i) * w(1, 1))));
    }
    return worst;
  }

  const SurfaceGrid2& surf = std::get<SurfaceGrid2>(field.source);
  const SphereGrid2& g = *surf.grid;
  const int np = g.n_phi();
  const Eigen::Index count = field.size();
  Eigen::VectorXd g00(count), g01(count), g11(count);
  for (Eigen::Index k = 0; k < count; ++k) {
    const Eigen::MatrixXd& m = field.metric[static_cast<std::size_t>(k)];
    g00(k) = m(0, 0);
    g01(k) = m(0, 1);
    g11(k) = m(1, 1);
  }
  const Grid2Derivatives dv = grid2_derivatives(g, c.V);
  const Grid2Derivatives d00 = grid2_derivatives(g, g00);
  const Grid2Derivatives d01 = grid2_derivatives(g, g01, -1.0);
  const Grid2Derivatives d11 = grid2_derivatives(g, g11);
  for (Eigen::Index node = 0; node < count; ++node) {
    const Eigen::Index i = node / np, j = node % np;
    const Eigen::Matrix2d gm = field.metric[static_cast<std::size_t>(node)];
    const Eigen::Matrix2d ginv = gm.inverse();
    // dg[k](a,b) = d_k g_ab
    Eigen::Matrix2d dg[2];
    dg[0] << d00.t(i, j), d01.t(i, j), d01.t(i, j), d11.t(i, j);
    dg[1] << d00.p(i, j), d01.p(i, j), d01.p(i, j), d11.p(i, j);
    const Eigen::Vector2d dV(dv.t(i, j), dv.p(i, j));
    Eigen::Matrix2d ddV;
    ddV << dv.tt(i, j), dv.tp(i, j), dv.tp(i, j), dv.pp(i, j);
    Eigen::Matrix2d hess;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        double corr = 0.0;
        for (int k = 0; k < 2; ++k)
          for (int l = 0; l < 2; ++l) {
            const double gamma_lab = 0.5 * (dg[a](b, l) + dg[b](a, l) - dg[l](a, b));
            corr += ginv(k, l) * gamma_lab * dV(k);
          }
        hess(a, b) = ddV(a, b) - corr;
      }
    const Eigen::Matrix2d target = c.V(node) * gm - c.u(node) * field.second_form[static_cast<std::size_t>(node)];
    const Eigen::Matrix2d& cof = field.coframe[static_cast<std::size_t>(node)];
    const Eigen::Matrix2d diff = cof * (hess - target) * cof.transpose();
    worst = std::max(worst, diff.cwiseAbs().maxCoeff());
  }
  return worst;
}

EllipticPoint elliptic_point(const GeometryField& field) {
  const PointwiseCurvature& c = field.curvature;
  EllipticPoint e;
  c.r.maxCoeff(&e.node);
  e.r_max = c.r(e.node);
  double min_kappa = c.kappa.row(e.node).minCoeff();

  if (const auto* prof = std::get_if<RadialProfile>(&field.source)) {
    // refine the maximum of the interpolant over [-1, 1], poles included
    const ColatitudeGrid& g = *prof->grid;
    const Eigen::VectorXd rx = g.dx * prof->r;
    const Eigen::VectorXd rxx = g.dx * rx;
    auto r_at = [&](double x) { return barycentric_interpolate(g.x, g.bary, prof->r, x); };
    const int samples = 8 * g.size();
    double best_x = g.x(e.node), best_r = e.r_max;
    for (int s = 0; s <= samples; ++s) {
      const double x = -1.0 + 2.0 * s / samples;
      const double rv = r_at(x);
      if (rv > best_r) {
        best_r = rv;
        best_x = x;
      }
    }
    double lo = std::max(-1.0, best_x - 2.0 / samples), hi = std::min(1.0, best_x + 2.0 / samples);
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
      const double m1 = hi - phi * (hi - lo), m2 = lo + phi * (hi - lo);
      if (r_at(m1) < r_at(m2)) lo = m1; else hi = m2;
    }
    // polish the interior critical point: Newton on r_x = 0
    double xs = 0.5 * (lo + hi);
    for (int it = 0; it < 8; ++it) {
      const double d1 = barycentric_interpolate(g.x, g.bary, rx, xs);
      const double d2 = barycentric_interpolate(g.x, g.bary, rxx, xs);
      if (!(d2 < 0.0)) break;
      const double next = xs - d1 / d2;
      if (!(std::abs(next - xs) < 4.0 / samples) || next <= -1.0 || next >= 1.0) break;
      xs = next;
    }
    // ties go to the Newton point, where r_x vanishes to roundoff
    if (r_at(xs) >= best_r - 1e-15) {
      best_r = r_at(xs);
      best_x = xs;
    }
    for (double cand : {-1.0, 1.0}) {
      const double rv = r_at(cand);
      if (rv > best_r + 1e-15) {
        best_r = rv;
        best_x = cand;
      }
    }
    const AxisPoint p = axis_point(best_x, best_r, barycentric_interpolate(g.x, g.bary, rx, best_x),
                                   barycentric_interpolate(g.x, g.bary, rxx, best_x));
    e.r_max = best_r;
    min_kappa = field.n > 1 ? std::min(p.kappa_m, p.kappa_p) : p.kappa_m;
  }
  e.margin = min_kappa - 1.0 / std::tanh(e.r_max);
  return e;
}

double mean_convexity_margin(const GeometryField& field) {
  const Eigen::VectorXd mean = field.curvature.kappa.rowwise().sum();
  return mean.minCoeff() - field.n;
}

}  // namespace shiftcurv
