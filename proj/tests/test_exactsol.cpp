#include <doctest.h>

#include <numbers>

#include "sigmak/exactsol.hpp"
#include "sigmak/symfun.hpp"
#include "support.hpp"

using namespace sigmak;
using namespace sigmak::testing;

TEST_CASE("model_curvature") {
  const auto flat = model_curvature(Model::flat(), Vec{0.1, 0.2, 0.3});
  CHECK(flat.ric.max_abs() == 0.0);
  CHECK(flat.scal == 0.0);
  CHECK(flat.einstein.max_abs() == 0.0);
  CHECK(model_curvature(Model::torus()).einstein.max_abs() == 0.0);

  const auto s3 = model_curvature(Model::round_sphere());
  const Spectrum e = gen_eigen(s3.g, s3.einstein);
  for (int i = 0; i < 3; ++i) {
    CHECK(e[i] == -1.0);
  }
  CHECK(cone_membership(e, 3, ConeSign::negative).member);
  CHECK(s3.scal == 6.0);

  const double rho = 2.5;
  const auto big = model_curvature(Model::round_sphere(rho));
  CHECK(big.scal == doctest::Approx(6.0 / (rho * rho)).epsilon(1e-15));
  CHECK((big.einstein - (1.0 / (rho * rho)) * s3.einstein).max_abs() < 1e-15);
  CHECK_THROWS_AS((void)model_curvature(Model::flat(), Vec{0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("bubble constants as displayed") {
  CHECK(theorem_bubble_constant(3, 2.0) == doctest::Approx(0.5));
  CHECK(lemma_bubble_constant(3, 2.0) == doctest::Approx(-0.5));
  CHECK(theorem_bubble_constant(3, 1.0) == doctest::Approx(-1.0));
}

TEST_CASE("bubble_value examples") {
  BubbleParams lem;
  lem.form = BubbleForm::lemma;
  lem.a = 0.8;
  lem.curvature_const = 1.3;
  lem.p = Vec{0.1, -0.2, 0.4};
  lem.n = 3;
  lem.k = 2;
  CHECK(bubble_value(lem, lem.p) == doctest::Approx(std::sqrt(2 * lem.a)).epsilon(1e-15));
  Vec x = lem.p;
  x[1] += 1.0 / (lem.a * std::sqrt(lem.curvature_const));
  CHECK(bubble_value(lem, x) == doctest::Approx(std::sqrt(lem.a)).epsilon(1e-14));

  double prev = bubble_value(lem, lem.p);
  for (int i = 1; i < 50; ++i) {
    Vec y = lem.p;
    y[0] += 0.1 * i;
    const double v = bubble_value(lem, y);
    CHECK(v < prev);
    prev = v;
  }

  BubbleParams neg = BubbleParams::normalized(3, 2, 1.0, 1.0, -1.0);
  Vec far = neg.p;
  far[0] = 10.0;
  CHECK_THROWS_AS((void)bubble_value(neg, far), std::domain_error);
}

TEST_CASE("bubble derivatives match finite differences") {
  const BubbleParams p = BubbleParams::normalized(4, 2, 3.0, 1.3, 0.4);
  const Vec x{0.3, -0.2, 0.5, 0.1};
  const RadialDerivatives rd = bubble_derivatives(p, x);
  const double h = 1e-5;
  for (int i = 0; i < 4; ++i) {
    Vec xp = x;
    Vec xm = x;
    xp[i] += h;
    xm[i] -= h;
    CHECK(rd.grad[i] ==
          doctest::Approx((bubble_value(p, xp) - bubble_value(p, xm)) / (2 * h)).epsilon(1e-8));
    const RadialDerivatives dp = bubble_derivatives(p, xp);
    const RadialDerivatives dm = bubble_derivatives(p, xm);
    for (int j = 0; j < 4; ++j) {
      CHECK(rd.hess(i, j) == doctest::Approx((dp.grad[j] - dm.grad[j]) / (2 * h)).epsilon(1e-7));
    }
  }
}

TEST_CASE("Liouville bubbles with resolved constants") {
  struct Case {
    int n, k;
    double tau;
  };
  for (const Case c : {Case{3, 2, 2.0}, Case{3, 3, 2.0}, Case{3, 2, 1.0}, Case{4, 2, 3.0},
                       Case{5, 3, 4.0}}) {
    CAPTURE(c.n);
    CAPTURE(c.k);
    CAPTURE(c.tau);
    const ConstantResolution res = resolve_bubble_constant(c.n, c.k, c.tau, 1.0, 100, 42);
    CHECK(res.resolved);
    CHECK(res.source == "theorem");
    CHECK(res.constant == doctest::Approx(theorem_bubble_constant(c.n, c.tau)));
    CHECK(res.theorem_residual < 1e-9);
  }
}

TEST_CASE("verify_liouville detects a wrong constant") {
  const double c = theorem_bubble_constant(3, 2.0);
  const BubbleParams good = BubbleParams::normalized(3, 2, 2.0, 1.0, c);
  const BubbleParams bad = BubbleParams::normalized(3, 2, 2.0, 1.0, 2 * c);
  CHECK(good.target() == doctest::Approx(1.0).epsilon(1e-14));
  Vec x(3);
  x[0] = 1.0 / (good.a * std::sqrt(good.scale_b));
  CHECK(verify_liouville(good, {x}) < 1e-9);
  CHECK(verify_liouville(bad, {x}) > 0.1);
}

TEST_CASE("Liouville residual is invariant under rescaling with 2b^2/a^2 fixed") {
  const double c = theorem_bubble_constant(3, 2.0);
  for (double a : {0.25, 0.5, 1.0, 2.0, 7.0}) {
    const BubbleParams p = BubbleParams::normalized(3, 3, 2.0, a, c);
    CHECK(verify_liouville(p, liouville_samples(p, 60, 9)) < 1e-9);
  }
}

TEST_CASE("lemma sign matches sigma_k in value for even k but leaves the cone") {
  const double c_lem = lemma_bubble_constant(3, 2.0);
  const BubbleParams p = BubbleParams::normalized(3, 2, 2.0, 1.0, c_lem);
  const auto samples = liouville_samples(p, 20, 5);
  CHECK(verify_liouville(p, samples) < 1e-9);
  CHECK_FALSE(cone_membership(bubble_spectrum(p, samples[3]), 2).member);
  // odd k distinguishes the two by value
  const BubbleParams q = BubbleParams::normalized(3, 3, 2.0, 1.0, c_lem);
  CHECK(verify_liouville(q, liouville_samples(q, 20, 5)) > 0.5);
}

TEST_CASE("bubble eigenvalues are rotation invariant about the centre") {
  const BubbleParams p = BubbleParams::normalized(3, 2, 2.0, 1.0, theorem_bubble_constant(3, 2.0));
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    const Vec x = liouville_samples(p, 1, 100 + trial)[0];
    const Mat q = random_orthogonal(rng, 3);
    Vec y(3);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        y[i] += q(i, j) * x[j];
      }
    }
    const Spectrum a = bubble_spectrum(p, x);
    const Spectrum b = bubble_spectrum(p, y);
    for (int i = 0; i < 3; ++i) {
      CHECK(std::abs(a[i] - b[i]) < 1e-9);
    }
  }
}

TEST_CASE("barrier_eigs") {
  const BarrierParams bp{0.1};
  for (double r : {0.01, 0.05, 0.2, 0.7}) {
    const BarrierModel m = barrier_eigs(bp, r);
    const double a = bp.exponent();
    CHECK(m.d1 == doctest::Approx(2.0 / r));
    CHECK(m.sigma1 == doctest::Approx(3 * m.d1 - m.d2).epsilon(1e-13));
    CHECK(m.sigma1 ==
          doctest::Approx((4 * r * r + 8 * (1 - a) * r - 4 * a * (1 - a)) / (r * r)).epsilon(1e-12));
    CHECK(m.sigma1 * r * r ==
          doctest::Approx(-4 * (1 - a) * (a - 2 * r) + 4 * r * r).epsilon(1e-12));
    CHECK(m.sigma2 == doctest::Approx(m.d1 * (3 * m.d1 - 2 * m.d2)).epsilon(1e-12));
  }
  const BarrierModel small = barrier_eigs(bp, 0.01);
  CHECK(small.sigma1 < 0.0);
  CHECK(small.sigma2 < 0.0);
  CHECK_THROWS_AS((void)barrier_eigs(bp, 0.0), std::domain_error);
}

TEST_CASE("barrier profile derivatives") {
  for (double delta : {0.05, 0.1, 0.2}) {
    const BarrierParams bp{delta};
    for (double r : {0.01, 0.1, 0.4}) {
      const double h = 1e-5 * r;
      const BarrierProfile p = barrier_profile(bp, r);
      const BarrierProfile pp = barrier_profile(bp, r + h);
      const BarrierProfile pm = barrier_profile(bp, r - h);
      CHECK(std::abs(p.dv - (pp.v - pm.v) / (2 * h)) < 1e-7 * std::abs(p.dv));
      CHECK(std::abs(p.d2v - (pp.v - 2 * p.v + pm.v) / (h * h)) < 1e-5 * std::abs(p.d2v));
      CHECK(std::abs(p.d2v - (pp.dv - pm.dv) / (2 * h)) < 1e-7 * std::abs(p.d2v));
    }
  }
}

TEST_CASE("barrier scan") {
  CHECK_THROWS_AS(BarrierParams{0.3}.validate(), std::domain_error);
  CHECK_THROWS_AS(BarrierParams{0.0}.validate(), std::domain_error);
  const auto grid = log_grid(1e-4, 0.5, 200);
  CHECK(grid.size() == 200);
  CHECK(grid.front() == doctest::Approx(1e-4));
  CHECK(grid.back() == 0.5);
  CHECK_THROWS_AS((void)barrier_scan(BarrierParams{0.1}, {}), std::domain_error);

  double last_r1 = 1.0;
  for (double delta : {0.05, 0.1, 0.2, 0.24, 0.249}) {
    const BarrierScan s = barrier_scan(BarrierParams{delta}, grid);
    CAPTURE(delta);
    CHECK(s.found);
    CHECK(s.r1 > 0.1);
    for (const auto& smp : s.samples) {
      if (smp.model.r <= s.r1) {
        CHECK(smp.model.sigma1 < 0.0);
        CHECK(smp.model.sigma2 < 0.0);
      }
      CHECK(smp.sphere_deviation <= s.fitted_c * smp.model.r * smp.model.d1 * (1 + 1e-12));
      // the leading-order model is exact on the flat background
      CHECK(smp.flat_deviation <= 1e-13 * (std::abs(smp.model.d1) + std::abs(smp.model.d2)));
    }
    CHECK(s.fitted_c < 10.0);
    const BarrierScan fine = barrier_scan(BarrierParams{delta}, log_grid(1e-4, 0.5, 800));
    CHECK(std::abs(fine.r1 - s.r1) < 0.05 * s.r1);
    last_r1 = std::min(last_r1, s.r1);
  }
  CHECK(last_r1 > 0.1);
}

TEST_CASE("hawking_bound") {
  CHECK(hawking_bound(0.0, 2.0) == 0.5);
  CHECK(hawking_bound(1.0, 1.0 / std::tanh(1.0)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(hawking_bound(1e-8, 2.0) - 0.5) < 1e-6);
  CHECK(std::isinf(hawking_bound(1.0, 1.0)));
  CHECK_THROWS_AS((void)hawking_bound(2.0, 1.0), std::domain_error);
  CHECK_THROWS_AS((void)hawking_bound(0.0, 0.0), std::domain_error);
  CHECK_THROWS_AS((void)hawking_bound(-0.1, 1.0), std::domain_error);

  for (double alpha : {0.0, 0.1, 0.5, 1.0}) {
    double prev = std::numeric_limits<double>::infinity();
    for (double c0 = alpha + 0.05; c0 < alpha + 5.0; c0 += 0.05) {
      const double u = hawking_bound(alpha, c0);
      CHECK(u < prev);
      prev = u;
    }
  }
  for (double c0 : {0.5, 1.0, 3.0}) {
    double prev = 0.0;
    for (double alpha = 0.0; alpha < c0; alpha += c0 / 50) {
      const double u = hawking_bound(alpha, c0);
      CHECK(u > prev);
      prev = u;
    }
  }
}
