#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <vector>

#include "sigmak/core.hpp"
#include "sigmak/symfun.hpp"

namespace sigmak::testing {

/// sigma_k by brute-force enumeration of all k-subsets.
inline double sigma_enum(const std::vector<double>& lam, int k) {
  const int n = static_cast<int>(lam.size());
  if (k == 0) {
    return 1.0;
  }
  if (k > n) {
    return 0.0;
  }
  double total = 0.0;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (std::popcount(mask) != k) {
      continue;
    }
    double prod = 1.0;
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) {
        prod *= lam[static_cast<std::size_t>(i)];
      }
    }
    total += prod;
  }
  return total;
}

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

inline SymTensor random_sym(std::mt19937_64& rng, int n, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  SymTensor a(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      a(i, j) = u(rng);
    }
  }
  return a;
}

/// Haar-ish random orthogonal matrix by Gram-Schmidt on a Gaussian matrix.
inline Mat random_orthogonal(std::mt19937_64& rng, int n) {
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

/// Q^T A Q as a SymTensor.
inline SymTensor conjugate(const SymTensor& a, const Mat& q) {
  return SymTensor::symmetric_part(q.transpose() * a * q);
}

/// Rejection sample from Gamma_k^+ with entries uniform in [-1, 2].
inline std::vector<double> sample_cone(std::mt19937_64& rng, int n, int k) {
  std::uniform_real_distribution<double> u(-1.0, 2.0);
  std::vector<double> lam(static_cast<std::size_t>(n));
  while (true) {
    for (double& x : lam) {
      x = u(rng);
    }
    if (cone_membership(lam, k).member) {
      return lam;
    }
  }
}

inline SymTensor random_metric(std::mt19937_64& rng, int n) {
  SymTensor b = random_sym(rng, n);
  SymTensor g = SymTensor::symmetric_part(b * b);
  for (int i = 0; i < n; ++i) {
    g(i, i) += 0.5;
  }
  return g;
}

}  // namespace sigmak::testing
