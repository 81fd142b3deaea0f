#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "sigmak/symfun.hpp"
#include "sigmak/tensor.hpp"
#include "support.hpp"

using namespace sigmak;
using namespace sigmak::testing;

namespace {

// Generalized Kronecker delta: det of the (m x m) matrix [delta(up[a], down[b])].
int gen_delta(const std::vector<int>& up, const std::vector<int>& down) {
  const std::size_t m = up.size();
  std::vector<std::size_t> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  int total = 0;
  do {
    bool hit = true;
    for (std::size_t a = 0; a < m && hit; ++a) {
      hit = up[a] == down[perm[a]];
    }
    if (!hit) {
      continue;
    }
    int inversions = 0;
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t b = a + 1; b < m; ++b) {
        inversions += perm[a] > perm[b] ? 1 : 0;
      }
    }
    total += inversions % 2 == 0 ? 1 : -1;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

// T_k(A)^i_j = (1/k!) delta^{i1..ik i}_{j1..jk j} A^{j1}_{i1} ... A^{jk}_{ik}
double newton_by_delta(const SymTensor& a, int k, int i, int j) {
  const int n = a.dim();
  double total = 0.0;
  const int tuples = static_cast<int>(std::pow(n, 2 * k));
  for (int code = 0; code < tuples; ++code) {
    std::vector<int> up(static_cast<std::size_t>(k) + 1);
    std::vector<int> down(static_cast<std::size_t>(k) + 1);
    int c = code;
    for (int s = 0; s < k; ++s) {
      up[static_cast<std::size_t>(s)] = c % n;
      c /= n;
      down[static_cast<std::size_t>(s)] = c % n;
      c /= n;
    }
    up[static_cast<std::size_t>(k)] = i;
    down[static_cast<std::size_t>(k)] = j;
    const int d = gen_delta(up, down);
    if (d == 0) {
      continue;
    }
    double prod = d;
    for (int s = 0; s < k; ++s) {
      prod *= a(down[static_cast<std::size_t>(s)], up[static_cast<std::size_t>(s)]);
    }
    total += prod;
  }
  double fact = 1.0;
  for (int s = 2; s <= k; ++s) {
    fact *= s;
  }
  return total / fact;
}

}  // namespace

TEST_CASE("sigma_k examples") {
  const std::vector<double> ones{1, 1, 1};
  const std::vector<double> v{2, 3, 4};
  CHECK(sigma_k(ones, 2) == 3.0);
  CHECK(sigma_k(v, 0) == 1.0);
  CHECK(sigma_k(v, 2) == doctest::Approx(sigma_enum(v, 2)).epsilon(1e-15));
  CHECK(sigma_k(v, 2) == 26.0);
  CHECK(sigma_k(v, 4) == 0.0);
  CHECK_THROWS_AS((void)sigma_k(v, -1), std::domain_error);
}

TEST_CASE("sigma_k agrees with subset enumeration") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int n = 1; n <= 8; ++n) {
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> lam(static_cast<std::size_t>(n));
      for (double& x : lam) {
        x = u(rng);
      }
      for (int k = 0; k <= n + 1; ++k) {
        CHECK(rel_err(sigma_k(lam, k), sigma_enum(lam, k)) < 1e-13);
      }
    }
  }
}

TEST_CASE("sigma_truncated examples") {
  const std::vector<double> ones{1, 1, 1};
  const std::vector<double> v{2, 3, 4};
  CHECK(sigma_truncated(ones, 1, {0}) == 2.0);
  CHECK(sigma_truncated(v, 2, {2}) == sigma_enum({2, 3, 0}, 2));
  CHECK(sigma_truncated(v, 2, {2}) == 6.0);
  for (int i = 0; i < 3; ++i) {
    CHECK(sigma_truncated(std::vector<double>{1.5, -2.0, 0.7}, 3, {i}) == 0.0);
  }
  CHECK(sigma_truncated(v, 1, {0, 2}) == 3.0);
  CHECK_THROWS_AS((void)sigma_truncated(v, 1, {3}), std::domain_error);
  CHECK_THROWS_AS((void)sigma_truncated(v, 1, {-1}), std::domain_error);
  CHECK_THROWS_AS((void)sigma_truncated(v, 1, {1, 1}), std::domain_error);
  CHECK_THROWS_AS((void)sigma_truncated(v, 1, {0, 1, 2}), std::domain_error);
}

TEST_CASE("newton_transform examples") {
  std::mt19937_64 rng(5);
  const SymTensor a = random_sym(rng, 3);
  CHECK(newton_transform(a, 0) == SymTensor::identity(3));
  const SymTensor t1 = newton_transform(a, 1);
  const SymTensor expect = a.trace() * SymTensor::identity(3) - a;
  CHECK((t1 - expect).max_abs() < 1e-15);
  CHECK_THROWS_AS((void)newton_transform(a, 4), std::domain_error);
  CHECK_THROWS_AS((void)newton_transform(a, -1), std::domain_error);
}

TEST_CASE("newton_transform matches generalized Kronecker delta contraction") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 5; ++trial) {
    const SymTensor a = random_sym(rng, 3);
    for (int k = 0; k <= 3; ++k) {
      const SymTensor t = newton_transform(a, k);
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
          CHECK(std::abs(t(i, j) - newton_by_delta(a, k, i, j)) < 1e-13);
        }
      }
    }
  }
}

TEST_CASE("matrix sigma_k equals spectrum sigma_k") {
  std::mt19937_64 rng(23);
  for (int n = 3; n <= 6; ++n) {
    for (int trial = 0; trial < 50; ++trial) {
      std::uniform_real_distribution<double> u(-2.0, 2.0);
      std::vector<double> lam(static_cast<std::size_t>(n));
      for (double& x : lam) {
        x = u(rng);
      }
      const SymTensor d = SymTensor::diagonal(lam);
      const Mat q = random_orthogonal(rng, n);
      const SymTensor a = conjugate(d, q);
      for (int k = 0; k <= n; ++k) {
        CHECK(rel_err(sigma_k(d, k), sigma_k(lam, k)) < 1e-14);
        CHECK(rel_err(sigma_k(a, k), sigma_k(lam, k)) < 1e-12);
      }
    }
  }
}

TEST_CASE("sigma_k_gradient") {
  CHECK((sigma_k_gradient(SymTensor::identity(3), 2) - 2.0 * SymTensor::identity(3)).max_abs() ==
        0.0);
  CHECK_THROWS_AS((void)sigma_k_gradient(SymTensor::identity(3), 0), std::domain_error);

  std::mt19937_64 rng(29);
  SUBCASE("positive definite on Gamma_2^+") {
    for (int trial = 0; trial < 200; ++trial) {
      const auto lam = sample_cone(rng, 3, 2);
      const SymTensor a = conjugate(SymTensor::diagonal(lam), random_orthogonal(rng, 3));
      const Spectrum s = sym_eigen(sigma_k_gradient(a, 2));
      CHECK(s[2] > 0.0);
    }
  }
  SUBCASE("finite differences") {
    const double h = 1e-5;
    for (int trial = 0; trial < 100; ++trial) {
      const int n = 3 + trial % 4;
      const SymTensor a = random_sym(rng, n);
      for (int k = 1; k <= n; ++k) {
        const SymTensor grad = sigma_k_gradient(a, k);
        for (int i = 0; i < n; ++i) {
          for (int j = 0; j <= i; ++j) {
            // Perturb the (i,j) and (j,i) entries together; off-diagonal gets the
            // sum of both partials.
            SymTensor p = a;
            SymTensor m = a;
            p(i, j) += h;
            m(i, j) -= h;
            const double fd = (sigma_k(p, k) - sigma_k(m, k)) / (2 * h);
            const double want = i == j ? grad(i, i) : 2.0 * grad(i, j);
            CHECK(std::abs(fd - want) <= 1e-6 * std::max(1.0, std::abs(want)));
          }
        }
      }
    }
  }
}

TEST_CASE("cone_membership examples") {
  const auto r1 = cone_membership(std::vector<double>{1, 1, 1}, 3);
  CHECK(r1.member);
  CHECK(r1.margin == 1.0);
  CHECK(r1.margins.size() == 3);

  CHECK(cone_membership(std::vector<double>{-1, -1, -1}, 2, ConeSign::negative).member);
  CHECK_FALSE(cone_membership(std::vector<double>{-1, -1, -1}, 2).member);

  const auto r3 = cone_membership(std::vector<double>{3, 1, -1}, 2);
  CHECK_FALSE(r3.member);
  CHECK(r3.margins[1] == -1.0);
  CHECK(r3.margin == -1.0);

  const auto boundary = cone_membership(std::vector<double>{0, 0, 0}, 1);
  CHECK_FALSE(boundary.member);
  CHECK_THROWS_AS((void)cone_membership(std::vector<double>{1, 1, 1}, 4), std::domain_error);
}

TEST_CASE("negative cone report is the positive report of -lambda") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 3 + trial % 4;
    std::vector<double> lam(static_cast<std::size_t>(n));
    std::vector<double> neg(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < lam.size(); ++i) {
      lam[i] = u(rng);
      neg[i] = -lam[i];
    }
    for (int k = 1; k <= n; ++k) {
      const auto a = cone_membership(lam, k, ConeSign::negative);
      const auto b = cone_membership(neg, k, ConeSign::positive);
      CHECK(a.member == b.member);
      CHECK(a.margins == b.margins);
      CHECK(cone_margin(neg, k) == doctest::Approx(b.margin).epsilon(1e-14));
    }
  }
}

TEST_CASE("maclaurin_ratio") {
  CHECK(maclaurin_ratio(std::vector<double>{1, 1, 1}, 2) == doctest::Approx(1.0).epsilon(1e-15));
  const double want = std::sqrt(sigma_enum({2, 1, 1}, 2) / 3.0) / (4.0 / 3.0);
  CHECK(maclaurin_ratio(std::vector<double>{2, 1, 1}, 2) == doctest::Approx(want).epsilon(1e-14));
  CHECK(maclaurin_ratio(std::vector<double>{2, 1, 1}, 2) == doctest::Approx(0.968).epsilon(1e-3));
  CHECK(maclaurin_ratio(std::vector<double>{4, 1, 0.5}, 2) < 1.0);
  CHECK_THROWS_AS((void)maclaurin_ratio(std::vector<double>{3, 1, -1}, 2), std::domain_error);

  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 2000; ++trial) {
    const int n = 3 + trial % 4;
    const int k = 1 + trial % n;
    const auto lam = sample_cone(rng, n, k);
    CHECK(maclaurin_ratio(lam, k) <= 1.0 + 1e-12);
  }
}

TEST_CASE("lambda_k normalizes sigma_k") {
  for (int n = 3; n <= 6; ++n) {
    for (int k = 1; k <= n; ++k) {
      const std::vector<double> lam(static_cast<std::size_t>(n), lambda_k(n, k));
      CHECK(std::abs(std::pow(sigma_k(lam, k), 1.0 / k) - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("Newton identities on the Garding cone") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 3 + trial % 4;
    const int k = 1 + (trial / 4) % n;
    auto lam = sample_cone(rng, n, k);
    std::sort(lam.begin(), lam.end(), std::greater<>());

    double sum_i = 0.0;
    double scale_i = 0.0;
    double sum_ii = 0.0;
    for (int i = 0; i < n; ++i) {
      const double s = sigma_truncated(lam, k - 1, {i});
      sum_i += lam[static_cast<std::size_t>(i)] * s;
      scale_i += std::abs(lam[static_cast<std::size_t>(i)] * s);
      sum_ii += s;
      // (iii)
      const double rhs = lam[static_cast<std::size_t>(i)] * s + sigma_truncated(lam, k, {i});
      CHECK(rel_err(rhs, sigma_k(lam, k)) < 1e-12);
    }
    CHECK(std::abs(sum_i - k * sigma_k(lam, k)) <= 1e-12 * std::max(1.0, scale_i));
    CHECK(rel_err(sum_ii, (n - k + 1) * sigma_k(lam, k - 1)) < 1e-12);

    // (iv) ordering and positivity
    for (int i = 0; i + 1 < n; ++i) {
      CHECK(sigma_truncated(lam, k - 1, {i}) <= sigma_truncated(lam, k - 1, {i + 1}) + 1e-12);
    }
    CHECK(sigma_truncated(lam, k - 1, {0}) > 0.0);
    if (k >= 2) {
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < i; ++j) {
          CHECK(sigma_truncated(lam, k - 2, {i, j}) > 0.0);
        }
      }
    }
  }
}

TEST_CASE("newton_transform commutes with orthogonal conjugation") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 3 + trial % 4;
    const SymTensor a = random_sym(rng, n);
    const Mat q = random_orthogonal(rng, n);
    for (int k = 0; k <= n; ++k) {
      const SymTensor lhs = newton_transform(conjugate(a, q), k);
      const SymTensor rhs = conjugate(newton_transform(a, k), q);
      CHECK((lhs - rhs).max_abs() < 1e-10);
    }
  }
}

TEST_CASE("sigma_k^{1/k} is concave on the cone") {
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    const int k = 2 + trial % 2;
    const SymTensor w1 = conjugate(SymTensor::diagonal(sample_cone(rng, 3, k)),
                                   random_orthogonal(rng, 3));
    const SymTensor w2 = conjugate(SymTensor::diagonal(sample_cone(rng, 3, k)),
                                   random_orthogonal(rng, 3));
    const double th = u(rng);
    auto f = [k](const SymTensor& w) { return std::pow(sigma_k(w, k), 1.0 / k); };
    const SymTensor mix = th * w1 + (1.0 - th) * w2;
    CHECK(f(mix) >= th * f(w1) + (1.0 - th) * f(w2) - 1e-12);
  }
}
