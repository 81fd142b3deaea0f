#include <doctest.h>

#include <numbers>
#include <random>
#include <sstream>

#include "sigmak/continuation.hpp"
#include "sigmak/expr.hpp"
#include "sigmak/symfun.hpp"

using namespace sigmak;

namespace {

constexpr double kPi = std::numbers::pi;

DeformationProblem sphere_problem(int nodes, int k, const std::string& h) {
  const Grid g = RadialGrid::sphere(nodes);
  return DeformationProblem::make(Model::round_sphere(), field_from_spec(h, g), k);
}

DeformationProblem torus_problem(int nodes, int k, const std::string& h) {
  const Grid g = TorusGrid{nodes, 1.0};
  return DeformationProblem::make(Model::torus(), field_from_spec(h, g), k);
}

double sup_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) {
    m = std::max(m, std::abs(x));
  }
  return m;
}

// Smooth random field: a few low Fourier modes scaled to the given sup norm.
ScalarField smooth_random(const Grid& g, std::mt19937_64& rng, double sup) {
  std::uniform_real_distribution<double> c(-1.0, 1.0);
  const double a0 = c(rng), a1 = c(rng), a2 = c(rng), a3 = c(rng), a4 = c(rng);
  const bool torus = std::holds_alternative<TorusGrid>(g);
  ScalarField f = ScalarField::sample(g, [&](const auto& p) {
    if (torus) {
      const double w = 2 * kPi;
      return a0 + a1 * std::sin(w * p[0]) + a2 * std::cos(w * p[1]) +
             a3 * std::sin(w * (p[0] + p[2])) + a4 * std::cos(2 * w * p[2]);
    }
    return a0 + a1 * std::cos(p[0]) + a2 * std::cos(2 * p[0]) + a3 * std::cos(3 * p[0]) +
           a4 * std::cos(4 * p[0]);
  });
  const double s = sup_abs(f.values());
  std::vector<double> v(f.values().begin(), f.values().end());
  for (double& x : v) {
    x *= sup / s;
  }
  return {g, v};
}

}  // namespace

TEST_CASE("phi") {
  CHECK(phi(0.0) == std::pair<double, double>{0.0, 0.0});
  CHECK(phi(0.5) == std::pair<double, double>{1.0, 0.0});
  CHECK(phi(0.25).first == doctest::Approx(0.5));
  CHECK(phi(0.25).second == doctest::Approx(3.0));
  CHECK(phi(0.9).first == 1.0);
  CHECK(phi(0.5 - 1e-9).second == doctest::Approx(0.0).epsilon(1e-6));
  // derivative matches differences
  for (double t : {0.05, 0.2, 0.33, 0.45}) {
    const double h = 1e-6;
    CHECK(phi(t).second == doctest::Approx((phi(t + h).first - phi(t - h).first) / (2 * h)).epsilon(1e-6));
  }
  CHECK_THROWS_AS((void)phi(-0.1), std::domain_error);
  CHECK_THROWS_AS((void)phi(1.1), std::domain_error);
}

TEST_CASE("problem validation") {
  const Grid s = RadialGrid::sphere(20);
  CHECK(DeformationProblem::make(Model::round_sphere(), ScalarField::constant(s, 3.0), 2).lambda_k ==
        doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK_THROWS_AS(DeformationProblem::make(Model::round_sphere(), ScalarField::constant(s, 0.0), 2),
                  std::domain_error);
  CHECK_THROWS_AS(DeformationProblem::make(Model::torus(), ScalarField::constant(s, 1.0), 2),
                  std::invalid_argument);
  CHECK_THROWS_AS(DeformationProblem::make(Model::round_sphere(2.0), ScalarField::constant(s, 1.0), 2),
                  std::invalid_argument);
  CHECK_THROWS_AS(DeformationProblem::make(Model::round_sphere(), ScalarField::constant(s, 1.0), 4),
                  std::domain_error);
  for (int k = 1; k <= 3; ++k) {
    const double l = lambda_k(3, k);
    CHECK(std::abs(std::pow(sigma_k(std::vector<double>{l, l, l}, k), 1.0 / k) - 1.0) < 1e-12);
  }
}

TEST_CASE("deformation_residual examples") {
  for (int k : {1, 2, 3}) {
    const auto sp = sphere_problem(40, k, "3");
    const auto r0 = deformation_residual(sp, ScalarField::constant(sp.grid(), 0.0), 0.0);
    CHECK(r0.admissible);
    CHECK(sup_abs(r0.values) < 1e-14);
    const auto tp = torus_problem(8, k, "1");
    const auto t0 = deformation_residual(tp, ScalarField::constant(tp.grid(), 0.0), 0.0);
    CHECK(sup_abs(t0.values) < 1e-14);
  }
  const auto sp = sphere_problem(40, 2, "3");
  const auto r1 = deformation_residual(sp, ScalarField::constant(sp.grid(), 0.0), 1.0);
  CHECK(r1.admissible);
  CHECK(sup_abs(r1.values) < 1e-14);
  CHECK(r1.cone_margin == doctest::Approx(3.0));

  const auto tp = torus_problem(8, 2, "1");
  const auto flat = deformation_residual(tp, ScalarField::constant(tp.grid(), 0.0), 1.0);
  CHECK_FALSE(flat.admissible);
  CHECK(flat.values[0] <= -1.0);

  // constant u at intermediate t: closed form
  const double t = 0.3;
  const double c = 0.2;
  const double f = phi(t).first;
  const double want = (1 - f) + f * std::sqrt(3.0) - f * std::sqrt(3.0) * std::exp(-2 * c) -
                      (1 - t) * std::exp(-2 * c);
  const auto rc = deformation_residual(sp, ScalarField::constant(sp.grid(), c), t);
  CHECK(rc.values[7] == doctest::Approx(want).epsilon(1e-13));
}

TEST_CASE("jacobian_action") {
  std::mt19937_64 rng(5);
  SUBCASE("zero direction and constants at the t = 0 solution") {
    const auto sp = sphere_problem(40, 2, "3");
    const ScalarField zero = ScalarField::constant(sp.grid(), 0.0);
    CHECK(sup_abs(jacobian_action(sp, zero, 0.4, zero).values()) == 0.0);
    const double c = 0.7;
    const ScalarField jc = jacobian_action(sp, zero, 0.0, ScalarField::constant(sp.grid(), c));
    for (double x : jc.values()) {
      CHECK(x == doctest::Approx(2 * c).epsilon(1e-12));
    }
  }
  SUBCASE("finite differences") {
    for (int trial = 0; trial < 6; ++trial) {
      const bool torus = trial % 2 == 0;
      const int k = 2 + (trial / 2) % 2;
      const auto prob = torus ? torus_problem(8, k, "1 + 0.3*sin(2*pi*x)")
                              : sphere_problem(60, k, "3 + 0.3*cos(theta)");
      const double t = torus ? 0.1 + 0.03 * trial : 0.35 + 0.1 * trial;
      CAPTURE(trial);
      const ScalarField u = smooth_random(prob.grid(), rng, torus ? 0.002 : 0.02);
      const ScalarField v = smooth_random(prob.grid(), rng, 1.0);
      const double eps = 1e-6;
      std::vector<double> up(u.values().begin(), u.values().end());
      std::vector<double> um = up;
      for (std::size_t i = 0; i < up.size(); ++i) {
        up[i] += eps * v[i];
        um[i] -= eps * v[i];
      }
      const auto fp = deformation_residual(prob, up, t);
      const auto fm = deformation_residual(prob, um, t);
      REQUIRE(fp.admissible);
      REQUIRE(fm.admissible);
      const ScalarField jv = jacobian_action(prob, u, t, v);
      double err = 0.0;
      for (std::size_t i = 0; i < up.size(); ++i) {
        err = std::max(err, std::abs(jv[i] - (fp.values[i] - fm.values[i]) / (2 * eps)));
      }
      CHECK(err <= 1e-5 * sup_abs(jv.values()));
    }
  }
  SUBCASE("outside the cone") {
    const auto tp = torus_problem(8, 2, "1");
    const ScalarField zero = ScalarField::constant(tp.grid(), 0.0);
    CHECK_THROWS_AS((void)jacobian_action(tp, zero, 1.0, zero), std::domain_error);
  }
}

TEST_CASE("newton_correct at t = 0") {
  SolverConfig cfg;
  const auto tp = torus_problem(8, 2, "1");
  const auto start0 = make_state(tp, ScalarField::constant(tp.grid(), 0.0), 0.0);
  const NewtonResult r0 = newton_correct(tp, start0, cfg);
  CHECK(r0.status == NewtonStatus::converged);
  CHECK(r0.iterations == 0);

  const ScalarField s = ScalarField::sample(
      tp.grid(), [](const auto& p) { return 0.01 * std::sin(2 * kPi * p[0]); });
  const NewtonResult r1 = newton_correct(tp, make_state(tp, s, 0.0), cfg);
  CHECK(r1.status == NewtonStatus::converged);
  CHECK(sup_abs(r1.state.u.values()) < 1e-8);
}

TEST_CASE("newton_correct recovers the round metric at t = 1") {
  SolverConfig cfg;
  const auto sp = sphere_problem(100, 2, "3");
  const ScalarField s =
      ScalarField::sample(sp.grid(), [](const auto& p) { return 0.05 * std::cos(p[0]); });
  const NewtonResult r = newton_correct(sp, make_state(sp, s, 1.0), cfg);
  // u = 0.05 cos(theta) lies along the conformal direction; Newton must still
  // land on a solution of the discrete problem.
  CHECK(r.status == NewtonStatus::converged);
  CHECK(r.state.residual_sup <= cfg.newton_tol);
  MESSAGE("sup|u| after Newton at t = 1: " << sup_abs(r.state.u.values()));
}

TEST_CASE("continuation on the round sphere") {
  SolverConfig cfg;
  const auto sp = sphere_problem(50, 2, "3");
  const ContinuationResult res = continuation_solve(sp, cfg);
  CHECK(res.background_admissible);
  REQUIRE(res.status == SolveStatus::converged);
  CHECK(res.final_state.t == 1.0);
  CHECK(sup_abs(res.final_state.u.values()) < 10 * std::pow(kPi / 50, 2));
  CHECK(res.final_state.residual_sup < 1e-8);
  CHECK(res.independent_residual < 1e-7);
  for (const PathRecord& p : res.path) {
    CHECK(p.cone_margin > 0.0);
    CHECK(std::isfinite(p.apriori_ratio));
  }
  std::ostringstream csv;
  write_path_csv(csv, res.path);
  CHECK(csv.str().rfind("t,residual_sup,cone_margin,apriori_ratio,newton_iters,linear_iters\n", 0) ==
        0);
}

TEST_CASE("a priori ratio stays bounded across refinements for h in [2, 4]") {
  SolverConfig cfg;
  std::vector<double> worst_per_level;
  for (int nodes : {50, 100, 200}) {
    double worst = 0.0;
    // 3 + s cos(2 theta) keeps h in [2.2, 3.8]
    for (const char* h : {"3 + 0.8*(2*cos(theta)*cos(theta) - 1)",
                          "3 - 0.8*(2*cos(theta)*cos(theta) - 1)",
                          "3 + 0.4*(2*cos(theta)*cos(theta) - 1)", "2.2"}) {
      CAPTURE(nodes);
      CAPTURE(h);
      const ContinuationResult res = continuation_solve(sphere_problem(nodes, 2, h), cfg);
      REQUIRE(res.status == SolveStatus::converged);
      for (const PathRecord& p : res.path) {
        CHECK(p.cone_margin > 0.0);
        worst = std::max(worst, p.apriori_ratio);
      }
    }
    worst_per_level.push_back(worst);
  }
  MESSAGE("max a priori ratio at 50/100/200 nodes: " << worst_per_level[0] << " "
                                                     << worst_per_level[1] << " "
                                                     << worst_per_level[2]);
  CHECK(worst_per_level[2] <= 1.1 * worst_per_level[0]);
  CHECK(worst_per_level[1] <= 1.1 * worst_per_level[0]);
}

TEST_CASE("continuation on the flat torus fails before t = 1") {
  SolverConfig cfg;
  const auto tp = torus_problem(8, 2, "1");
  const ContinuationResult res = continuation_solve(tp, cfg);
  CHECK_FALSE(res.background_admissible);
  CHECK(res.status != SolveStatus::converged);
  CHECK(res.final_state.t < 1.0);
  REQUIRE_FALSE(res.warnings.empty());
  CHECK(res.warnings.front().find("background not negative k-admissible") != std::string::npos);
}

TEST_CASE("expressions") {
  CHECK(Expression::parse("1 + 2*3").eval({}) == 7.0);
  CHECK(Expression::parse("-(1 - 4)/2").eval({}) == 1.5);
  CHECK(Expression::parse("cos(pi)").eval({}) == doctest::Approx(-1.0));
  CHECK(Expression::parse("exp(0) + sin(0)").eval({}) == 1.0);
  ExprVars v;
  v.theta = 0.3;
  CHECK(Expression::parse("3 + 0.3*cos(theta)").eval(v) == doctest::Approx(3 + 0.3 * std::cos(0.3)));
  CHECK(Expression::parse("1e-2*x").variables() == std::set<std::string>{"x"});
  CHECK_THROWS_AS(Expression::parse("1 +"), std::invalid_argument);
  CHECK_THROWS_AS(Expression::parse("foo(1)"), std::invalid_argument);
  CHECK_THROWS_AS(Expression::parse("(1"), std::invalid_argument);
  CHECK_THROWS_AS(Expression::parse("1 2"), std::invalid_argument);
  CHECK_THROWS_AS((void)field_from_spec("x", RadialGrid::sphere(10)), std::invalid_argument);
  CHECK_NOTHROW((void)field_from_spec("x*y*z", TorusGrid{8, 1.0}));
}
