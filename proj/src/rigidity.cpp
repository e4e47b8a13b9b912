#include "shiftcurv/rigidity.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <random>
#include <thread>

#include "shiftcurv/errors.hpp"
#include "shiftcurv/identities.hpp"
#include "shiftcurv/report.hpp"
#include "shiftcurv/symfun.hpp"

namespace shiftcurv {

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::max_steps: return "max_steps";
    case SolveStatus::damping_floor: return "damping_floor";
    case SolveStatus::singular: return "singular";
    case SolveStatus::invalid_init: return "invalid_init";
  }
  return "?";
}

int required_cone_order(const CurvatureExpr& expr) {
  int order = 0;
  auto scan = [&](const std::vector<CurvatureTerm>& terms) {
    for (const CurvatureTerm& t : terms) {
      switch (t.kind) {
        case CurvatureTerm::Kind::shifted_H:
        case CurvatureTerm::Kind::H1_shifted_product:
        case CurvatureTerm::Kind::quotient: order = std::max(order, t.j); break;
        case CurvatureTerm::Kind::gauss_bonnet: order = std::max(order, 2 * t.j); break;
        default: break;
      }
    }
  };
  scan(expr.numerator);
  scan(expr.denominator);
  return order >= 2 ? order : 0;
}

namespace {

Eigen::VectorXd residual_of(const SolveConfig& cfg, const PointwiseCurvature& c) {
  Eigen::VectorXd f = evaluate(cfg.expr, c);
  if (cfg.target_fn)
    f -= cfg.target * coefficient_values(*cfg.target_fn, c);
  else
    f.array() -= cfg.target;
  return f;
}

}  // namespace

Eigen::VectorXd collocation_residual(const SolveConfig& cfg, const RadialProfile& profile) {
  return residual_of(cfg, pointwise_curvature(profile));
}

Eigen::MatrixXd collocation_jacobian(const SolveConfig& cfg, const RadialProfile& profile) {
  const ColatitudeGrid& g = *profile.grid;
  const Eigen::VectorXd& r = profile.r;
  const Eigen::VectorXd rx = g.dx * r;
  const Eigen::VectorXd rxx = g.dx * rx;
  // F_i depends on (r_i, rx_i, rxx_i) only, so one perturbation of a whole
  // vector yields that partial at every node.
  auto partial = [&](int which) {
    Eigen::VectorXd v[3] = {r, rx, rxx};
    const Eigen::VectorXd h = 1e-6 * (1.0 + v[which].array().abs());
    Eigen::VectorXd plus[3] = {r, rx, rxx}, minus[3] = {r, rx, rxx};
    plus[which] += h;
    minus[which] -= h;
    const Eigen::VectorXd fp = residual_of(cfg, pointwise_curvature(g, plus[0], plus[1], plus[2]));
    const Eigen::VectorXd fm = residual_of(cfg, pointwise_curvature(g, minus[0], minus[1], minus[2]));
    return Eigen::VectorXd((fp - fm).cwiseQuotient(2.0 * h));
  };
  const Eigen::VectorXd a = partial(0), b = partial(1), c = partial(2);
  Eigen::MatrixXd J = b.asDiagonal() * g.dx + c.asDiagonal() * (g.dx * g.dx);
  J.diagonal() += a;
  return J;
}

namespace {

struct Trial {
  bool ok = false;
  Eigen::VectorXd residual;
  std::vector<Eigen::Index> cone_exit;
  std::string why;
};

Trial try_profile(const SolveConfig& cfg, const RadialProfile& p, int cone) {
  Trial t;
  for (Eigen::Index i = 0; i < p.r.size(); ++i)
    if (!(std::isfinite(p.r(i)) && p.r(i) > 0.0)) {
      t.why = "radial function not positive at node " + std::to_string(i);
      return t;
    }
  try {
    if (cone >= 2) {
      const PointwiseCurvature c = pointwise_curvature(p);
      for (Eigen::Index i = 0; i < c.size(); ++i)
        if (!in_closed_cone<double>(c.kappa_shifted_row(i), std::min(cone, c.n))) t.cone_exit.push_back(i);
      if (!t.cone_exit.empty()) {
        t.why = "kappa - 1 leaves the closed cone Gamma_" + std::to_string(cone) + " at " +
                std::to_string(t.cone_exit.size()) + " nodes";
        return t;
      }
    }
    t.residual = collocation_residual(cfg, p);
  } catch (const std::exception& e) {
    t.why = e.what();
    return t;
  }
  if (!t.residual.allFinite()) {
    t.why = "residual not finite";
    return t;
  }
  t.ok = true;
  return t;
}

double weighted_mean(const RadialProfile& p, const Eigen::VectorXd& f) {
  const Eigen::VectorXd& w = p.grid->weights;
  return w.dot(f) / w.sum();
}

/// Newton iteration for one fixed target; appends to `res`.
void newton_stage(const SolveConfig& cfg, int cone, RadialProfile& p, Eigen::VectorXd& F, SolveResult& res) {
  const Eigen::Index N = p.r.size();
  Eigen::MatrixXd J;
  while (true) {
    const double norm = F.cwiseAbs().maxCoeff();
    if (norm <= cfg.tol) {
      res.status = SolveStatus::converged;
      return;
    }
    if (res.steps >= cfg.max_steps) {
      res.status = SolveStatus::max_steps;
      res.message = "no convergence in " + std::to_string(cfg.max_steps) + " steps";
      return;
    }
    try {
      J = collocation_jacobian(cfg, p);
    } catch (const std::exception& e) {
      res.status = SolveStatus::singular;
      res.message = std::string("Jacobian evaluation failed: ") + e.what();
      return;
    }
    if (!J.allFinite()) {
      res.status = SolveStatus::singular;
      res.message = "Jacobian not finite";
      return;
    }
    const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(J);
    const Eigen::VectorXd delta = -cod.solve(F);
    if (!delta.allFinite()) {
      res.status = SolveStatus::singular;
      res.message = "Newton step not finite";
      return;
    }

    double alpha = 1.0;
    bool accepted = false;
    std::string last_why;
    while (alpha >= cfg.damping_floor) {
      RadialProfile trial_p = p;
      trial_p.r = p.r + alpha * delta;
      Trial t = try_profile(cfg, trial_p, cone);
      if (!t.ok) {
        if (!t.cone_exit.empty()) {
          ++res.cone_rejections;
          res.cone_exit_nodes = t.cone_exit;
        }
        last_why = t.why;
      } else if (t.residual.cwiseAbs().maxCoeff() <= (1.0 - cfg.armijo * alpha) * norm) {
        p = trial_p;
        F = t.residual;
        accepted = true;
        break;
      } else {
        last_why = "Armijo condition not met";
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      const bool rank_deficient = cod.rank() < N;
      res.status = rank_deficient ? SolveStatus::singular : SolveStatus::damping_floor;
      res.message = "damping floor reached (" + last_why + ")" +
                    (rank_deficient ? "; Jacobian rank " + std::to_string(cod.rank()) : std::string());
      return;
    }
    ++res.steps;
    res.step_lengths.push_back(alpha);
    res.residual_history.push_back(F.cwiseAbs().maxCoeff());
  }
}

}  // namespace

SolveResult solve_constant_equation(const SolveConfig& cfg) {
  if (!(cfg.tol > 0.0)) throw ArgumentError("solve: tolerance must be positive");
  if (cfg.grid < 4) throw ArgumentError("solve: grid needs at least 4 nodes");
  if (cfg.n < 2) throw ArgumentError("solve: n must be at least 2");
  if (cfg.max_steps < 0) throw ArgumentError("solve: max_steps must be nonnegative");
  if (cfg.continuation_steps < 1) throw ArgumentError("solve: continuation_steps must be at least 1");
  if (!(cfg.damping_floor > 0.0 && cfg.damping_floor <= 1.0)) throw ArgumentError("solve: damping floor in (0, 1]");
  if (cfg.expr.numerator.empty()) throw ArgumentError("solve: empty expression");
  if (cfg.init.needs_full_grid()) throw ArgumentError("solve: the initial surface must be axisymmetric");

  SolveResult res;
  if (cfg.warm_start) {
    res.profile.grid = make_colatitude_grid(cfg.grid, cfg.n);
    if (cfg.warm_start->size() != cfg.grid) throw ArgumentError("solve: warm start has the wrong size");
    res.profile.r = *cfg.warm_start;
  } else {
    res.profile = build_profile(cfg.init, cfg.n, cfg.grid);
  }
  const int cone = cfg.cone_order >= 0 ? cfg.cone_order : required_cone_order(cfg.expr);

  // iterate 0 against the final target
  Trial t0 = try_profile(cfg, res.profile, cone);
  if (!t0.ok) {
    res.status = SolveStatus::invalid_init;
    res.message = "initial profile rejected: " + t0.why;
    res.cone_exit_nodes = t0.cone_exit;
    res.classification = classify_solution(res.profile);
    return res;
  }
  Eigen::VectorXd F = t0.residual;
  res.residual_history.push_back(F.cwiseAbs().maxCoeff());
  res.stage_starts.push_back(0);

  if (cfg.continuation_steps > 1 && res.residual_history.front() > cfg.tol) {
    const Eigen::VectorXd e0 = F.array() + cfg.target;  // meaningful without target_fn only
    const double start = cfg.target_fn ? cfg.target : weighted_mean(res.profile, e0);
    for (int s = 1; s < cfg.continuation_steps; ++s) {
      SolveConfig stage = cfg;
      stage.target = start + (cfg.target - start) * s / cfg.continuation_steps;
      Eigen::VectorXd Fs = collocation_residual(stage, res.profile);
      res.stage_starts.push_back(static_cast<int>(res.residual_history.size()));
      res.residual_history.push_back(Fs.cwiseAbs().maxCoeff());
      newton_stage(stage, cone, res.profile, Fs, res);
      if (res.status != SolveStatus::converged) {
        res.message = "continuation stage " + std::to_string(s) + ": " + res.message;
        res.classification = classify_solution(res.profile);
        return res;
      }
    }
    F = collocation_residual(cfg, res.profile);
    res.stage_starts.push_back(static_cast<int>(res.residual_history.size()));
    res.residual_history.push_back(F.cwiseAbs().maxCoeff());
  }
  newton_stage(cfg, cone, res.profile, F, res);
  res.converged = res.status == SolveStatus::converged;
  res.classification = classify_solution(res.profile);
  return res;
}

SphereFit fit_sphere(const RadialProfile& profile) {
  const ColatitudeGrid& g = *profile.grid;
  const Eigen::VectorXd& r = profile.r;
  SphereFit fit;
  const double north = barycentric_interpolate(g.x, g.bary, r, 1.0);
  const double south = barycentric_interpolate(g.x, g.bary, r, -1.0);
  double rho = 0.5 * (north + south), d = 0.5 * (north - south);

  auto residual = [&](double rh, double dd, Eigen::VectorXd& out) {
    if (!(rh > 0.0) || !(std::abs(dd) < rh)) return false;
    out.resize(r.size());
    try {
      for (Eigen::Index i = 0; i < r.size(); ++i) out(i) = r(i) - sphere_radius_at(g.x(i), {rh, dd});
    } catch (const std::exception&) {
      return false;
    }
    return true;
  };

  Eigen::VectorXd e, e_try, e_rho, e_d;
  if (!residual(rho, d, e)) {
    fit.residual = std::numeric_limits<double>::infinity();
    return fit;
  }
  double mu = 1e-6;
  for (int it = 0; it < 100; ++it) {
    const double h = 1e-7;
    if (!residual(rho + h, d, e_rho) || !residual(rho, d + h, e_d)) break;
    Eigen::MatrixXd J(r.size(), 2);
    J.col(0) = (e_rho - e) / h;
    J.col(1) = (e_d - e) / h;
    const Eigen::Matrix2d A = J.transpose() * J;
    const Eigen::Vector2d b = -J.transpose() * e;
    bool improved = false;
    for (int tries = 0; tries < 30; ++tries) {
      Eigen::Matrix2d Am = A;
      Am.diagonal() *= 1.0 + mu;
      const Eigen::Vector2d step = Am.ldlt().solve(b);
      if (residual(rho + step(0), d + step(1), e_try) && e_try.squaredNorm() <= e.squaredNorm()) {
        rho += step(0);
        d += step(1);
        const bool small = step.cwiseAbs().maxCoeff() < 1e-15 * (1.0 + rho);
        e = e_try;
        mu = std::max(mu * 0.1, 1e-12);
        improved = true;
        if (small) it = 100;
        break;
      }
      mu *= 10.0;
    }
    if (!improved) break;
  }
  fit.sphere = {rho, d};
  fit.residual = e.cwiseAbs().maxCoeff();
  fit.converged = std::isfinite(fit.residual);
  fit.spherical = fit.converged && fit.residual <= sphere_fit_tolerance;
  return fit;
}

Classification classify_solution(const RadialProfile& profile) {
  Classification c;
  try {
    const GeometryField g = geometry_from_profile(profile);
    c.umbilicity = umbilicity(g);
    c.centered_metric = centered_metric(g);
  } catch (const std::exception&) {
    c.umbilicity = c.centered_metric = std::numeric_limits<double>::infinity();
  }
  c.fit = fit_sphere(profile);
  return c;
}

std::vector<SolveResult> continuation_sweep(const SolveConfig& base, const std::vector<SweepPoint>& path) {
  for (const SweepPoint& pt : path) {
    bool any = false;
    for (const CurvatureTerm& t : pt.expr.numerator) any = any || t.scale != 0.0;
    if (!any)
      throw ArgumentError("sweep point '" + pt.label +
                          "': all coefficients vanish; at least one must be nonzero");
  }
  std::vector<SolveResult> out;
  for (std::size_t i = 0; i < path.size(); ++i) {
    SolveConfig cfg = base;
    cfg.expr = path[i].expr;
    cfg.target = path[i].target;
    if (i > 0) cfg.warm_start = out.back().profile.r;
    out.push_back(solve_constant_equation(cfg));
    if (!out.back().converged) {
      if (i == 0) out.back().message = "first sweep point failed, sweep aborted: " + out.back().message;
      break;
    }
  }
  return out;
}

SolveConfig equation_for_theorem(const TheoremConfig& cfg, int n, int grid, double rho_ref) {
  const TheoremConfig resolved = resolve_theorem_config(cfg, n);
  SolveConfig s;
  s.n = n;
  s.grid = grid;
  s.expr = hypothesis_expression(resolved);
  const RadialProfile sphere = sphere_profile({rho_ref, 0.0}, n, grid);
  s.target = weighted_mean(sphere, evaluate(s.expr, pointwise_curvature(sphere)));
  s.init = parse_surface_spec("sphere:rho=" + std::to_string(rho_ref));
  return s;
}

std::vector<std::string> ensemble_inits(const EnsembleSpec& spec) {
  if (spec.members < 0) throw ArgumentError("ensemble: member count must be nonnegative");
  if (spec.modes.empty()) throw ArgumentError("ensemble: at least one mode");
  if (spec.max_amplitude < 0.0 || spec.max_offset < 0.0) throw ArgumentError("ensemble: amplitudes must be >= 0");
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::string> out;
  char buf[160];
  for (int m = 0; m < spec.members; ++m) {
    const double pick = unit(rng);
    const double amp = (2.0 * unit(rng) - 1.0);
    const int mode = spec.modes[static_cast<std::size_t>(unit(rng) * spec.modes.size()) % spec.modes.size()];
    if (pick < spec.offset_fraction)
      std::snprintf(buf, sizeof buf, "sphere:rho=%.6f:d=%.6f", spec.rho, amp * spec.max_offset);
    else
      std::snprintf(buf, sizeof buf, "perturbed:rho=%.6f:eps=%.6f:mode=%d", spec.rho, amp * spec.max_amplitude, mode);
    out.emplace_back(buf);
  }
  return out;
}

std::vector<EnsembleMember> perturbation_ensemble(const SolveConfig& base, const EnsembleSpec& spec) {
  const std::vector<std::string> inits = ensemble_inits(spec);
  std::vector<EnsembleMember> members(inits.size());
  auto run_one = [&](std::size_t i) {
    EnsembleMember& m = members[i];
    m.index = static_cast<int>(i);
    m.init = inits[i];
    SolveConfig cfg = base;
    cfg.warm_start.reset();
    try {
      cfg.init = parse_surface_spec(inits[i]);
      m.result = solve_constant_equation(cfg);
    } catch (const std::exception& e) {
      m.result.status = SolveStatus::invalid_init;
      m.result.message = e.what();
    }
  };
  const unsigned workers =
      spec.parallel ? std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), inits.size())) : 1u;
  if (workers <= 1) {
    for (std::size_t i = 0; i < inits.size(); ++i) run_one(i);
    return members;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < inits.size(); i = next++) run_one(i);
    });
  for (std::thread& t : pool) t.join();
  return members;
}

EnsembleSummary summarize(const std::vector<EnsembleMember>& members, double threshold) {
  EnsembleSummary s;
  s.threshold = threshold;
  s.members = static_cast<int>(members.size());
  for (const EnsembleMember& m : members) {
    if (!m.result.converged) continue;
    ++s.converged;
    if (m.result.classification.umbilicity <= threshold) ++s.umbilic;
    if (m.result.classification.centered_metric <= threshold) ++s.centered;
  }
  return s;
}

std::string ensemble_csv(const std::vector<EnsembleMember>& members) {
  std::string out =
      "member,init,status,converged,steps,final_residual,umbilicity,centered_metric,rho_fit,d_fit,fit_residual\n";
  for (const EnsembleMember& m : members) {
    const SolveResult& r = m.result;
    const Classification& c = r.classification;
    out += std::to_string(m.index) + ',' + m.init + ',' + to_string(r.status) + ',' + (r.converged ? "true" : "false") + ',' +
           std::to_string(r.steps);
    for (double x : {r.final_residual(), c.umbilicity, c.centered_metric, c.fit.sphere.rho, c.fit.sphere.d,
                     c.fit.residual})
      out += ',' + format_double(x);
    out += '\n';
  }
  return out;
}

}  // namespace shiftcurv
