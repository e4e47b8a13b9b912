#include "shiftcurv/identities.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>
#include <limits>

#include "shiftcurv/errors.hpp"
#include "shiftcurv/integrate.hpp"
#include "shiftcurv/symfun.hpp"

namespace shiftcurv {

std::string to_string(CheckKind kind) {
  switch (kind) {
    case CheckKind::identity: return "identity";
    case CheckKind::inequality: return "inequality";
    case CheckKind::hypothesis: return "hypothesis";
  }
  return "?";
}

double IdentityReport::extra(const std::string& key) const {
  for (const auto& [k, v] : extras)
    if (k == key) return v;
  throw ArgumentError("report '" + name + "' has no extra '" + key + "'");
}

IdentityReport make_report(std::string name, CheckKind kind, double lhs, double rhs, double tol,
                           const GeometryField* geom) {
  IdentityReport r;
  r.name = std::move(name);
  r.kind = kind;
  r.lhs = lhs;
  r.rhs = rhs;
  r.tol = tol;
  r.abs_err = std::abs(lhs - rhs);
  const double scale = std::max(std::abs(lhs), std::abs(rhs));
  const bool near_zero = scale < near_zero_scale;
  r.rel_err = scale > 0.0 ? r.abs_err / scale : 0.0;
  r.slack = scale > 0.0 ? (lhs - rhs) / scale : 0.0;
  if (near_zero) {
    r.pass = kind == CheckKind::inequality ? lhs - rhs >= -near_zero_abs_tol : r.abs_err <= near_zero_abs_tol;
    r.note = "near-zero magnitudes: absolute tolerance 1e-9";
  } else {
    r.pass = kind == CheckKind::inequality ? r.slack >= -tol : r.rel_err <= tol;
  }
  if (geom) {
    r.grid = static_cast<int>(geom->size());
    r.n = geom->n;
  }
  return r;
}

IdentityReport not_applicable(std::string name, std::string reason, const GeometryField* geom) {
  IdentityReport r;
  r.name = std::move(name);
  r.applicable = false;
  r.pass = true;
  r.note = std::move(reason);
  r.lhs = r.rhs = std::numeric_limits<double>::quiet_NaN();
  if (geom) {
    r.grid = static_cast<int>(geom->size());
    r.n = geom->n;
  }
  return r;
}

ResidualReport residual_report(std::string name, const Eigen::VectorXd& values, const GeometryField& geom) {
  ResidualReport r;
  r.name = std::move(name);
  r.sup = values.maxCoeff(&r.argmax);
  r.inf = values.minCoeff(&r.argmin);
  r.oscillation = r.sup - r.inf;
  r.mean = surface_integral(values, geom) / surface_integral(Eigen::VectorXd::Ones(values.size()), geom);
  r.relative_oscillation = r.oscillation / (std::abs(r.mean) + 1e-14);
  return r;
}

namespace {

void check_k(int k, int n, const char* what) {
  if (k < 1 || k > n)
    throw ArgumentError(std::string(what) + ": need 1 <= k <= n, got k=" + std::to_string(k) + " n=" +
                        std::to_string(n));
}

Eigen::VectorXd shifted_column(const GeometryField& geom, int j) { return geom.curvature.H_shifted.col(j); }

double integral(const Eigen::VectorXd& f, const GeometryField& geom) { return surface_integral(f, geom); }

}  // namespace

IdentityReport minkowski_check(const GeometryField& geom, int k, double tol) {
  check_k(k, geom.n, "minkowski_check");
  const PointwiseCurvature& c = geom.curvature;
  const Eigen::VectorXd w = c.V - c.u;
  const double lhs = integral(w.cwiseProduct(shifted_column(geom, k - 1)), geom);
  const double rhs = integral(c.u.cwiseProduct(shifted_column(geom, k)), geom);
  return make_report("minkowski_k" + std::to_string(k), CheckKind::identity, lhs, rhs, tol, &geom);
}

double newton_correction(const GeometryField& geom, int k, const Eigen::MatrixXd& grad_phi) {
  check_k(k, geom.n, "newton_correction");
  const int n = geom.n;
  Eigen::VectorXd density(geom.size());
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  for (Eigen::Index i = 0; i < geom.size(); ++i) {
    const Eigen::MatrixXd t = newton_tensor<double>(geom.shape[static_cast<std::size_t>(i)] - id, k - 1);
    density(i) = grad_phi.row(i).dot(t * geom.grad_V.row(i).transpose());
  }
  return integral(density, geom) / (k * binomial<double>(n, k));
}

WeightedMinkowskiReports weighted_minkowski_check(const GeometryField& geom, int k, const Coefficient& chi,
                                                  const WeightedMinkowskiOptions& opts) {
  check_k(k, geom.n, "weighted_minkowski_check");
  const PointwiseCurvature& c = geom.curvature;
  const Eigen::VectorXd x = coefficient_values(chi, c);
  const double lhs = integral(x.cwiseProduct(c.u).cwiseProduct(shifted_column(geom, k)), geom);
  const double main = integral(x.cwiseProduct(c.V - c.u).cwiseProduct(shifted_column(geom, k - 1)), geom);
  const double corr = newton_correction(geom, k, coefficient_gradient(chi, geom));

  const std::string tag = "_k" + std::to_string(k) + "_" + chi.to_string();
  WeightedMinkowskiReports out;
  out.equality = make_report("weighted_minkowski" + tag, CheckKind::identity, lhs,
                             main + opts.correction_factor * corr, opts.tol, &geom);
  out.equality.extras = {{"correction", corr}, {"correction_factor", opts.correction_factor}};
  if (opts.correction_factor != 1.0) out.equality.note = "correction term scaled by test hook";

  if (!chi.non_decreasing()) {
    out.inequality = not_applicable("weighted_minkowski_ineq" + tag, "weight is decreasing", &geom);
  } else if (closed_cone_order(geom) < k) {
    out.inequality =
        not_applicable("weighted_minkowski_ineq" + tag, "kappa - 1 leaves the closed cone Gamma_k", &geom);
  } else {
    out.inequality = make_report("weighted_minkowski_ineq" + tag, CheckKind::inequality, lhs, main, opts.tol, &geom);
  }
  return out;
}

std::string ScalarField::to_string() const {
  if (coef) return coef->to_string();
  return "harmonic:" + std::to_string(harmonic);
}

ScalarField parse_scalar_field(const std::string& text) {
  const std::string prefix = "harmonic:";
  if (text.rfind(prefix, 0) == 0) {
    int m = -1;
    try {
      m = std::stoi(text.substr(prefix.size()));
    } catch (const std::exception&) {
      throw ArgumentError("invalid harmonic degree in '" + text + "'");
    }
    if (m < 0) throw ArgumentError("harmonic degree must be >= 0");
    return ScalarField::zonal(m);
  }
  return ScalarField::of(parse_coefficient(text, CoefficientSource::r));
}

Eigen::VectorXd field_values(const ScalarField& f, const GeometryField& geom) {
  if (f.coef) return coefficient_values(*f.coef, geom.curvature);
  Eigen::VectorXd v(geom.size());
  for (Eigen::Index i = 0; i < geom.size(); ++i)
    v(i) = std::legendre(static_cast<unsigned>(f.harmonic), std::cos(geom.theta(i)));
  return v;
}

Eigen::MatrixXd field_gradient(const ScalarField& f, const GeometryField& geom) {
  if (f.coef) return coefficient_gradient(*f.coef, geom);
  return geom.gradient(field_values(f, geom));
}

IdentityReport generalized_minkowski_check(const GeometryField& geom, int k, const ScalarField& phi, double tol) {
  check_k(k, geom.n, "generalized_minkowski_check");
  const PointwiseCurvature& c = geom.curvature;
  const Eigen::VectorXd p = field_values(phi, geom);
  const double lhs = integral(p.cwiseProduct(c.u).cwiseProduct(shifted_column(geom, k)), geom);
  const double main = integral(p.cwiseProduct(c.V - c.u).cwiseProduct(shifted_column(geom, k - 1)), geom);
  const double corr = newton_correction(geom, k, field_gradient(phi, geom));
  IdentityReport r = make_report("generalized_minkowski_k" + std::to_string(k) + "_" + phi.to_string(),
                                 CheckKind::identity, lhs, main + corr, tol, &geom);
  r.extras = {{"correction", corr}, {"main", main}};
  return r;
}

IdentityReport heintze_karcher_check(const GeometryField& geom, double tol) {
  const int n = geom.n;
  const PointwiseCurvature& c = geom.curvature;
  const Eigen::VectorXd mean = c.kappa.rowwise().sum();
  Eigen::Index worst = 0;
  const double margin = (mean.array() - n).minCoeff(&worst);
  if (!(margin > 0.0))
    throw PreconditionError("heintze_karcher_check: H <= n at node " + std::to_string(worst) + " (H - n = " +
                            std::to_string(margin) + ")");
  const Eigen::VectorXd f = (c.V - c.u).array() / (mean.array() - n);
  const double lhs = integral(f, geom);
  const double rhs = (n + 1.0) / n * enclosed_weighted_volume(geom);
  IdentityReport r = make_report("heintze_karcher", CheckKind::inequality, lhs, rhs, tol, &geom);
  const double umb = umbilicity(geom);
  r.extras = {{"umbilicity", umb}, {"margin", margin}};
  if (r.pass) r.note = std::abs(r.slack) <= tol ? "equality" : "strict";
  return r;
}

IdentityReport volume_identity_check(const GeometryField& geom, double tol) {
  const double lhs = integral(geom.curvature.u, geom);
  const double rhs = (geom.n + 1.0) * enclosed_weighted_volume(geom);
  return make_report("volume_identity", CheckKind::identity, lhs, rhs, tol, &geom);
}

ResidualReport constancy_residual(const GeometryField& geom, const CurvatureExpr& expr) {
  return residual_report(expr.to_string(), evaluate(expr, geom.curvature), geom);
}

NewtonMaclaurinFieldReport newton_maclaurin_field(const GeometryField& geom, int k, int l) {
  const int n = geom.n;
  if (!(1 <= l && l < k && k <= n))
    throw ArgumentError("newton_maclaurin_field: need 1 <= l < k <= n, got k=" + std::to_string(k) +
                        " l=" + std::to_string(l));
  NewtonMaclaurinFieldReport rep;
  const Eigen::Index count = geom.size();
  Eigen::VectorXd prod(count), pow(count);
  for (Eigen::Index i = 0; i < count; ++i) {
    const Eigen::VectorXd lam = geom.curvature.kappa_shifted_row(i);
    if (!in_closed_cone(lam, k)) {
      rep.offending_nodes.push_back(i);
      continue;
    }
    const NewtonMaclaurinGap g = newton_maclaurin_gap(lam, k, l);
    prod(i) = g.product_gap;
    pow(i) = g.power_gap;
  }
  const std::string tag = "_k" + std::to_string(k) + "_l" + std::to_string(l);
  if (!rep.offending_nodes.empty()) {
    rep.applicable = false;
    rep.product_gap.name = "nm_product_gap" + tag;
    rep.power_gap.name = "nm_power_gap" + tag;
    return rep;
  }
  rep.product_gap = residual_report("nm_product_gap" + tag, prod, geom);
  rep.power_gap = residual_report("nm_power_gap" + tag, pow, geom);
  return rep;
}

double umbilicity(const GeometryField& geom) {
  const Eigen::MatrixXd& k = geom.curvature.kappa;
  double worst = 0.0;
  for (Eigen::Index i = 0; i < k.rows(); ++i) {
    const double mean = k.row(i).mean();
    const double dev = (k.row(i).array() - mean).abs().maxCoeff();
    worst = std::max(worst, dev / (1.0 + std::abs(mean)));
  }
  return worst;
}

double centered_metric(const GeometryField& geom) {
  return geom.curvature.V.maxCoeff() - geom.curvature.V.minCoeff();
}

int closed_cone_order(const GeometryField& geom) {
  int order = geom.n;
  for (Eigen::Index i = 0; i < geom.size() && order > 0; ++i)
    order = std::min(order, cone_report(geom.curvature.kappa_shifted_row(i)).max_closed_k);
  return order;
}

double min_shifted_curvature(const GeometryField& geom) { return geom.curvature.kappa.minCoeff() - 1.0; }

std::vector<IdentityReport> verification_suite(const GeometryField& geom, const SuiteOptions& opts) {
  std::vector<std::function<std::vector<IdentityReport>()>> jobs;
  for (int k = 1; k <= geom.n; ++k)
    jobs.emplace_back([&geom, k, &opts] { return std::vector<IdentityReport>{minkowski_check(geom, k, opts.tol)}; });
  for (const Coefficient& chi : opts.weights)
    for (int k = 1; k <= geom.n; ++k)
      jobs.emplace_back([&geom, k, chi, &opts] {
        WeightedMinkowskiOptions wo;
        wo.tol = opts.tol;
        const WeightedMinkowskiReports w = weighted_minkowski_check(geom, k, chi, wo);
        return std::vector<IdentityReport>{w.equality, w.inequality};
      });
  jobs.emplace_back([&geom] {
    try {
      return std::vector<IdentityReport>{heintze_karcher_check(geom)};
    } catch (const PreconditionError& e) {
      return std::vector<IdentityReport>{not_applicable("heintze_karcher", e.what(), &geom)};
    }
  });
  jobs.emplace_back([&geom] { return std::vector<IdentityReport>{volume_identity_check(geom)}; });

  std::vector<IdentityReport> out;
  if (!opts.parallel) {
    for (auto& job : jobs)
      for (auto& r : job()) out.push_back(std::move(r));
    return out;
  }
  std::vector<std::future<std::vector<IdentityReport>>> futures;
  futures.reserve(jobs.size());
  for (auto& job : jobs) futures.push_back(std::async(std::launch::async, job));
  for (auto& f : futures)
    for (auto& r : f.get()) out.push_back(std::move(r));
  return out;
}

}  // namespace shiftcurv
