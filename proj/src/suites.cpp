#include "sigmak/suites.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>

#include "sigmak/conformal.hpp"
#include "sigmak/exactsol.hpp"
#include "sigmak/symfun.hpp"
#include "sigmak/tensor.hpp"

namespace sigmak {

namespace {

using Rng = std::mt19937_64;

std::string format(const char* fmt, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, fmt, a, b);
  return buf;
}

CheckRecord at_most(std::string name, double measured, double tolerance, std::string detail = {}) {
  return {std::move(name), measured <= tolerance, measured, tolerance, std::move(detail)};
}

// Each suite draws from its own stream so that changing one sample count does
// not shift the others.
Rng stream(std::uint64_t seed, std::uint64_t salt) {
  std::seed_seq seq{seed, salt};
  return Rng(seq);
}

SymTensor random_sym(Rng& rng, int n, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  SymTensor a(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      a(i, j) = u(rng);
    }
  }
  return a;
}

Mat random_rotation(Rng& rng, int n) {
  std::normal_distribution<double> g(0.0, 1.0);
  Mat q(n);
  for (int c = 0; c < n; ++c) {
    for (int r = 0; r < n; ++r) {
      q(r, c) = g(rng);
    }
    for (int p = 0; p < c; ++p) {
      double d = 0.0;
      for (int r = 0; r < n; ++r) {
        d += q(r, c) * q(r, p);
      }
      for (int r = 0; r < n; ++r) {
        q(r, c) -= d * q(r, p);
      }
    }
    double norm = 0.0;
    for (int r = 0; r < n; ++r) {
      norm += q(r, c) * q(r, c);
    }
    norm = std::sqrt(norm);
    for (int r = 0; r < n; ++r) {
      q(r, c) /= norm;
    }
  }
  return q;
}

SymTensor rotate(const SymTensor& a, const Mat& q) {
  return SymTensor::symmetric_part(q * a * q.transpose());
}

// Rejection sampling from Gamma_k^+ with entries uniform in [-1, 2], sorted
// in decreasing order.
std::vector<double> cone_sample(Rng& rng, int n, int k) {
  std::uniform_real_distribution<double> u(-1.0, 2.0);
  std::vector<double> lam(static_cast<std::size_t>(n));
  while (true) {
    for (double& x : lam) {
      x = u(rng);
    }
    if (cone_margin(lam, k) > 0.0) {
      std::sort(lam.begin(), lam.end(), std::greater<>());
      return lam;
    }
  }
}

SymTensor random_metric(Rng& rng, int n) {
  const SymTensor b = random_sym(rng, n, 1.0);
  SymTensor g = SymTensor::symmetric_part(b * b);
  for (int i = 0; i < n; ++i) {
    g(i, i) += 0.5;
  }
  return g;
}

double rel(double got, double want, double scale) {
  return std::abs(got - want) / std::max({1.0, std::abs(want), scale});
}

}  // namespace

std::vector<CheckRecord> identity_checks(const SuiteOptions& opts) {
  Rng rng = stream(opts.seed, 1);
  const double corrupt = opts.corrupt_sigma ? 1.0 + 1e-6 : 1.0;
  auto sig = [corrupt](std::span<const double> lam, int k) {
    return k >= 1 ? corrupt * sigma_k(lam, k) : sigma_k(lam, k);
  };
  std::vector<std::pair<int, int>> pairs;
  for (int n = 3; n <= kMaxDim; ++n) {
    for (int k = 1; k <= n; ++k) {
      if ((opts.n == 0 || opts.n == n) && (opts.k == 0 || opts.k == k)) {
        pairs.emplace_back(n, k);
      }
    }
  }
  if (pairs.empty()) {
    return {{"identities", false, 0.0, 0.0, "no (n, k) pair selected"}};
  }

  double err_pairing = 0.0;
  double err_trace = 0.0;
  double err_split = 0.0;
  double err_matrix = 0.0;
  int order_violations = 0;
  for (int s = 0; s < opts.identity_samples; ++s) {
    const auto [n, k] = pairs[static_cast<std::size_t>(s) % pairs.size()];
    const std::vector<double> lam = cone_sample(rng, n, k);
    const double sk = sig(lam, k);
    const double skm1 = sig(lam, k - 1);

    double pairing = 0.0;
    double pairing_scale = 0.0;
    double trace = 0.0;
    std::vector<double> partial(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      const double si = sigma_truncated(lam, k - 1, {i});
      partial[static_cast<std::size_t>(i)] = si;
      const double li = lam[static_cast<std::size_t>(i)];
      pairing += li * si;
      pairing_scale += std::abs(li * si);
      trace += si;
      const double split = li * si + sigma_truncated(lam, k, {i});
      err_split = std::max(err_split, rel(split, sk, std::abs(li * si)));
    }
    err_pairing = std::max(err_pairing, rel(pairing, k * sk, pairing_scale));
    err_trace = std::max(err_trace, rel(trace, (n - k + 1) * skm1, 0.0));

    // lambda decreasing, so sigma_{k-1;i} increases with i
    for (int i = 0; i + 1 < n; ++i) {
      const double a = partial[static_cast<std::size_t>(i)];
      const double b = partial[static_cast<std::size_t>(i) + 1];
      if (a > b + 1e-12 * std::max(1.0, std::abs(b))) {
        ++order_violations;
      }
    }
    if (partial[0] <= 0.0) {
      ++order_violations;
    }
    if (k >= 2) {
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < i; ++j) {
          if (sigma_truncated(lam, k - 2, {i, j}) <= 0.0) {
            ++order_violations;
          }
        }
      }
    }

    // matrix form on a rotated copy
    const SymTensor a = rotate(SymTensor::diagonal(lam), random_rotation(rng, n));
    const SymTensor t = newton_transform(a, k - 1);
    const double scale = t.frobenius_norm() * a.frobenius_norm();
    err_matrix = std::max(err_matrix, rel(t.contract(a), k * sk, scale));
    err_matrix = std::max(err_matrix, rel(t.trace(), (n - k + 1) * skm1, t.frobenius_norm()));
    if (sym_eigen(t)[n - 1] <= 0.0) {
      ++order_violations;
    }
  }

  const double tol = 1e-12;
  return {
      at_most("identity (i): sum_i lambda_i sigma_{k-1;i} = k sigma_k", err_pairing, tol),
      at_most("identity (ii): sum_i sigma_{k-1;i} = (n-k+1) sigma_{k-1}", err_trace, tol),
      at_most("identity (iii): sigma_k = lambda_i sigma_{k-1;i} + sigma_{k;i}", err_split, tol),
      at_most("identity (i)-(ii) matrix form: T_{k-1}(A)", err_matrix, tol),
      at_most("identity (iv): T_{k-1} positive, sigma_{k-1;i} ordered, sigma_{k-2;ij} > 0",
              order_violations, 0.0, "count of violating samples"),
  };
}

CheckRecord gradient_check(const SuiteOptions& opts) {
  Rng rng = stream(opts.seed, 2);
  const double h = 1e-5;
  double worst = 0.0;
  for (int s = 0; s < opts.gradient_samples; ++s) {
    const int n = 3 + s % 4;
    const int k = 1 + (s / 4) % n;
    const SymTensor a = random_sym(rng, n, 1.0);
    const SymTensor grad = sigma_k_gradient(a, k);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j <= i; ++j) {
        SymTensor p = a;
        SymTensor m = a;
        p(i, j) += h;
        m(i, j) -= h;
        const double fd = (sigma_k(p, k) - sigma_k(m, k)) / (2 * h);
        // one storage slot carries both (i,j) and (j,i)
        const double want = i == j ? grad(i, i) : 2.0 * grad(i, j);
        worst = std::max(worst, std::abs(fd - want) / std::max(1.0, std::abs(want)));
      }
    }
  }
  return at_most("sigma_k_gradient vs central differences", worst, 1e-6);
}

std::vector<CheckRecord> ricci_checks(const SuiteOptions& opts) {
  Rng rng = stream(opts.seed, 3);
  double worst = 0.0;
  int admissible = 0;
  int violations = 0;
  for (int s = 0; s < opts.ricci_samples; ++s) {
    const MetricTensor g(s % 2 == 0 ? SymTensor::identity(3) : random_metric(rng, 3));
    SymTensor ric;
    if (s % 4 < 2) {
      ric = random_sym(rng, 3, 2.0);
    } else {
      // put -E in Gamma_2^+ (orthonormal frame), then Ric = E - tr(E) g
      const SymTensor minus_e =
          rotate(SymTensor::diagonal(cone_sample(rng, 3, 2)), random_rotation(rng, 3));
      const SymTensor e = g.from_orthonormal(-minus_e);
      ric = e - g.trace_of(e) * g.tensor();
    }
    const CurvaturePoint p = CurvaturePoint::from_ricci(g, ric, g.trace_of(ric), 2.0);
    const SymTensor minus_e = g.to_orthonormal(-p.einstein);
    const SymTensor ric_on = g.to_orthonormal(p.ric);
    worst = std::max(worst,
                     (newton_transform(minus_e, 1) - ric_on).max_abs() / (1.0 + ric_on.max_abs()));
    if (cone_margin(sym_eigen(minus_e), 2) > 0.0) {
      ++admissible;
      if (sym_eigen(ric_on)[2] <= 0.0) {
        ++violations;
      }
    }
  }
  return {
      at_most("T_1(-E) = Ric entrywise (n = 3)", worst, 1e-12),
      {"Ric > 0 when -E is 2-admissible", violations == 0 && admissible > 0,
       static_cast<double>(violations), 0.0,
       format("%.0f admissible samples", admissible)},
  };
}

std::vector<CheckRecord> convention_checks(const SuiteOptions& opts) {
  Rng rng = stream(opts.seed, 4);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  double worst_e = 0.0;
  double worst_a = 0.0;
  for (int s = 0; s < opts.convention_samples; ++s) {
    const int n = 3 + s % 3;
    const double tau = std::uniform_real_distribution<double>(0.0, n)(rng);
    const MetricTensor g(random_metric(rng, n));
    const SymTensor ric = random_sym(rng, n, 2.0);
    const CurvaturePoint base = CurvaturePoint::from_ricci(g, ric, g.trace_of(ric), tau);
    Vec grad(n);
    for (int i = 0; i < n; ++i) {
      grad[i] = unit(rng);
    }
    const SymTensor hess = random_sym(rng, n, 1.5);
    const ConformalJet jet = ConformalJet::from_derivatives(g, 0.7 * unit(rng), grad, hess);

    // e^{-2u} g = w^{4/(n-2)} g with w = exp(-(n-2)u/2)
    const double m = 0.5 * (n - 2);
    const double w = std::exp(-m * jet.u);
    const Vec grad_w = (-m * w) * jet.grad_u;
    const SymTensor hess_w = (m * m * w) * SymTensor::outer(jet.grad_u) - (m * w) * jet.hess_u;

    const SymTensor e_log = conformal_einstein_log(base, jet, n);
    const SymTensor e_pow = conformal_einstein_power(base, w, grad_w, hess_w, n);
    const SymTensor a_log = conformal_schouten_log(base, jet, n);
    const SymTensor a_pow = conformal_schouten_power(base, w, grad_w, hess_w, n);
    worst_e = std::max(worst_e, (e_log - e_pow).max_abs() / (1.0 + e_log.max_abs()));
    worst_a = std::max(worst_a, (a_log - a_pow).max_abs() / (1.0 + a_log.max_abs()));
  }
  return {
      at_most("Einstein tensor: log and power conventions agree", worst_e, 1e-9),
      at_most("Schouten tensor: log and power conventions agree", worst_a, 1e-9),
  };
}

std::vector<CheckRecord> perturbation_checks(const SuiteOptions& opts) {
  Rng rng = stream(opts.seed, 5);
  std::uniform_real_distribution<double> log_eps(std::log(1e-6), std::log(1e-1));
  std::vector<CheckRecord> out;
  for (int n = 3; n <= kMaxDim; ++n) {
    double fitted = 0.0;
    for (int s = 0; s < opts.perturbation_samples; ++s) {
      const SymTensor a = random_sym(rng, n, 1.0);
      SymTensor p = random_sym(rng, n, 1.0);
      p *= 1.0 / p.max_abs();
      const double eps = std::exp(log_eps(rng));
      fitted = std::max(fitted, eigen_match_distance(a, a + eps * p) / eps);
    }
    out.push_back(at_most(format("eigenvalue perturbation constant C(%.0f)", n), fitted,
                          std::pow(n, 1.5), "fitted over random pairs; ceiling n^{3/2}"));
  }
  return out;
}

std::vector<CheckRecord> hawking_checks() {
  double jump = 0.0;
  for (double c0 : {0.5, 1.0, 2.0, 5.0}) {
    for (double alpha = 1e-4; alpha >= 1e-12; alpha *= 0.1) {
      jump = std::max(jump, std::abs(hawking_bound(alpha, c0) - hawking_bound(0.0, c0)));
    }
  }
  int violations = 0;
  for (double alpha : {0.0, 0.1, 0.5, 1.0, 2.0}) {
    double prev = std::numeric_limits<double>::infinity();
    for (int i = 1; i <= 200; ++i) {
      const double u = hawking_bound(alpha, alpha + 0.025 * i);
      violations += u < prev ? 0 : 1;
      prev = u;
    }
  }
  for (double c0 : {0.5, 1.0, 3.0}) {
    double prev = 0.0;
    for (int i = 0; i < 100; ++i) {
      const double u = hawking_bound(c0 * i / 100.0, c0);
      violations += u > prev ? 0 : 1;
      prev = u;
    }
  }
  return {
      at_most("Hawking bound continuous at alpha = 0", jump, 1e-6),
      at_most("Hawking bound monotone in alpha and c0", violations, 0.0,
              "count of grid violations"),
  };
}

std::vector<CheckRecord> verify_all(const SuiteOptions& opts) {
  std::vector<CheckRecord> all = identity_checks(opts);
  all.push_back(gradient_check(opts));
  for (auto* suite : {&ricci_checks, &convention_checks, &perturbation_checks}) {
    auto part = suite(opts);
    all.insert(all.end(), part.begin(), part.end());
  }
  auto hk = hawking_checks();
  all.insert(all.end(), hk.begin(), hk.end());
  return all;
}

}  // namespace sigmak
