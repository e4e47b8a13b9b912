#include <doctest.h>

#include <cmath>

#include "shiftcurv/errors.hpp"
#include "shiftcurv/identities.hpp"
#include "shiftcurv/rigidity.hpp"
#include "test_support.hpp"

using namespace shiftcurv;
using doctest::Approx;

namespace {

SolveConfig config(const std::string& expr, double target, const std::string& init, int grid = 64) {
  SolveConfig s;
  s.expr = parse_curvature_expr(expr);
  s.target = target;
  s.init = parse_surface_spec(init);
  s.grid = grid;
  return s;
}

const double c1 = test::coth(1.0) - 1.0;

}  // namespace

TEST_CASE("H_1 from a perturbed sphere converges to the unit sphere") {
  const SolveResult r = solve_constant_equation(config("Hs1", c1, "perturbed:rho=1:eps=0.1:mode=2", 128));
  REQUIRE(r.converged);
  CHECK(r.status == SolveStatus::converged);
  CHECK(r.final_residual() <= 1e-10);
  CHECK(r.classification.umbilicity <= 1e-8);
  CHECK(r.classification.fit.sphere.rho == Approx(1.0).epsilon(1e-6));
  CHECK(r.classification.fit.spherical);
  // accepted damped steps never increase the max-norm residual
  for (std::size_t i = 1; i < r.residual_history.size(); ++i)
    CHECK(r.residual_history[i] <= r.residual_history[i - 1]);
}

TEST_CASE("offset spheres are fixed points of H_2 = const") {
  const SolveResult r = solve_constant_equation(config("Hs2", c1 * c1, "sphere:rho=1:d=0.3", 128));
  REQUIRE(r.converged);
  CHECK(r.steps == 0);
  CHECK(r.residual_history.front() <= 1e-10);
  CHECK(r.classification.umbilicity <= 1e-8);
  CHECK(r.classification.centered_metric > 0.5);
  CHECK(r.classification.fit.sphere.d == Approx(0.3).epsilon(1e-8));
}

TEST_CASE("V H_1 = const drives an offset sphere to the centered one") {
  const SolveResult r =
      solve_constant_equation(config("{pow:1@V}*Hs1", std::cosh(1.0) * c1, "sphere:rho=1:d=0.3", 128));
  REQUIRE(r.converged);
  CHECK(r.classification.centered_metric <= 1e-8);
  CHECK(r.classification.fit.sphere.rho == Approx(1.0).epsilon(1e-8));
}

TEST_CASE("solver failure modes are reported, not thrown") {
  SolveConfig few = config("Hs1", c1, "perturbed:rho=1:eps=0.2:mode=3");
  few.max_steps = 1;
  const SolveResult a = solve_constant_equation(few);
  CHECK_FALSE(a.converged);
  CHECK(a.status == SolveStatus::max_steps);
  const SolveResult b = solve_constant_equation(config("Hs2", c1 * c1, "perturbed:rho=1:eps=0.4:mode=2"));
  CHECK(b.status == SolveStatus::invalid_init);
  CHECK_FALSE(b.message.empty());
  SolveConfig bad = config("Hs1", c1, "sphere:rho=1");
  bad.tol = 0.0;
  CHECK_THROWS_AS(solve_constant_equation(bad), ArgumentError);
}

TEST_CASE("continuation in the target constant") {
  SolveConfig s = config("Hs1", 0.5, "sphere:rho=1", 64);
  s.continuation_steps = 4;
  const SolveResult r = solve_constant_equation(s);
  REQUIRE(r.converged);
  CHECK(r.stage_starts.size() == 5);
  // H_1(kappa - 1) = coth rho - 1 on a sphere of radius rho
  CHECK(test::coth(r.classification.fit.sphere.rho) - 1.0 == Approx(0.5).epsilon(1e-8));
}

TEST_CASE("sphere fit") {
  const RadialProfile off = build_profile(parse_surface_spec("sphere:rho=1.1:d=-0.25"), 2, 64);
  const SphereFit f = fit_sphere(off);
  CHECK(f.converged);
  CHECK(f.spherical);
  CHECK(f.sphere.rho == Approx(1.1).epsilon(1e-8));
  CHECK(f.sphere.d == Approx(-0.25).epsilon(1e-8));
  CHECK(std::abs(fit_sphere(build_profile(parse_surface_spec("sphere:rho=1"), 3, 64)).sphere.d) <= 1e-10);
  const SphereFit bumpy = fit_sphere(build_profile(parse_surface_spec("perturbed:rho=1:eps=0.1:mode=3"), 2, 64));
  CHECK_FALSE(bumpy.spherical);
  CHECK(bumpy.residual > 1e3 * sphere_fit_tolerance);
}

TEST_CASE("Gauss-Bonnet sweep recovers the sphere radius") {
  SolveConfig base = config("L1", 0.0, "sphere:rho=1", 64);
  std::vector<SweepPoint> path;
  for (double c : {1.2, 1.0, 0.8, 0.6}) path.push_back({parse_curvature_expr("L1"), c, "L1=" + std::to_string(c)});
  const auto results = continuation_sweep(base, path);
  REQUIRE(results.size() == path.size());
  for (std::size_t i = 0; i < results.size(); ++i) {
    REQUIRE(results[i].converged);
    CHECK(results[i].classification.umbilicity <= 1e-8);
    const double rho = results[i].classification.fit.sphere.rho;
    CHECK(2.0 / std::pow(std::sinh(rho), 2) == Approx(path[i].target).epsilon(1e-8));
  }
}

TEST_CASE("coefficient sweep in a_0 = b_1 chi H_1 + b_2 chi H_2") {
  SolveConfig base = config("Hs1", 0.0, "sphere:rho=1", 64);
  std::vector<SweepPoint> path;
  for (int i = 0; i <= 4; ++i) {
    const double t = i / 4.0;
    SweepPoint p;
    p.expr.numerator.push_back(CurvatureTerm::shifted(1, 1.0 - t, Coefficient::power(1.0)));
    p.expr.numerator.push_back(CurvatureTerm::shifted(2, t, Coefficient::power(1.0)));
    p.target = 0.4;
    p.label = std::to_string(t);
    path.push_back(p);
  }
  const auto results = continuation_sweep(base, path);
  REQUIRE(results.size() == path.size());
  for (const auto& r : results) {
    REQUIRE(r.converged);
    CHECK(r.classification.umbilicity <= 1e-8);
    CHECK(r.classification.centered_metric <= 1e-8);
  }
  SweepPoint zero;
  zero.expr.numerator.push_back(CurvatureTerm::shifted(1, 0.0));
  zero.target = 0.4;
  CHECK_THROWS_AS(continuation_sweep(base, {zero}), ArgumentError);
}

TEST_CASE("sweep stops after a failed first point") {
  SolveConfig base = config("Hs1", 0.0, "sphere:rho=1", 32);
  base.max_steps = 1;
  std::vector<SweepPoint> path = {{parse_curvature_expr("Hs1"), 3.0, "far"}, {parse_curvature_expr("Hs1"), 0.3, "near"}};
  const auto results = continuation_sweep(base, path);
  REQUIRE(results.size() == 1);
  CHECK_FALSE(results[0].converged);
  CHECK(results[0].message.find("sweep aborted") != std::string::npos);
}

TEST_CASE("ensembles") {
  SolveConfig base = config("Hs1", c1, "sphere:rho=1", 64);
  EnsembleSpec spec;
  spec.members = 6;
  spec.seed = 3;
  const auto inits = ensemble_inits(spec);
  CHECK(inits == ensemble_inits(spec));
  const auto members = perturbation_ensemble(base, spec);
  const EnsembleSummary s = summarize(members);
  CHECK(s.members == 6);
  CHECK(s.converged == 6);
  CHECK(s.umbilic == 6);
  const std::string csv = ensemble_csv(members);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);

  EnsembleSpec flat = spec;
  flat.max_amplitude = 0.0;
  for (const auto& m : perturbation_ensemble(base, flat)) {
    CHECK(m.result.converged);
    CHECK(m.result.steps == 0);
  }

  EnsembleSpec serial = spec;
  serial.parallel = false;
  const auto again = perturbation_ensemble(base, serial);
  for (std::size_t i = 0; i < members.size(); ++i)
    CHECK(members[i].result.profile.r == again[i].result.profile.r);
}

TEST_CASE("equations derived from theorem hypotheses") {
  TheoremConfig t;
  t.id = TheoremId::thm1_1i;
  t.k = 1;
  const SolveConfig s = equation_for_theorem(t, 2, 64, 1.0);
  CHECK(s.target == Approx(std::cosh(1.0) * c1));
  SolveConfig from_offset = s;
  from_offset.init = parse_surface_spec("sphere:rho=1:d=0.2");
  const SolveResult r = solve_constant_equation(from_offset);
  REQUIRE(r.converged);
  CHECK(r.classification.centered_metric <= 1e-8);
  CHECK(required_cone_order(parse_curvature_expr("Hs3/Hs1")) == 3);
  CHECK(required_cone_order(parse_curvature_expr("Hs1")) == 0);
  CHECK(required_cone_order(parse_curvature_expr("L1")) == 2);
}
