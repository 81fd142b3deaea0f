#include "sigmak/symfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace sigmak {

double binomial(int n, int k) {
  if (k < 0 || k > n) {
    return 0.0;
  }
  double c = 1.0;
  for (int i = 1; i <= k; ++i) {
    c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
  }
  return std::round(c);
}

double sigma_k(std::span<const double> lam, int k) {
  if (k < 0) {
    throw std::domain_error("sigma_k: negative index " + std::to_string(k));
  }
  const auto n = static_cast<int>(lam.size());
  if (k > n) {
    return 0.0;
  }
  // e[j] accumulates sigma_j over the prefix processed so far.
  std::array<double, kMaxDim + 1> e{};
  std::vector<double> big;
  double* esf = e.data();
  if (n > kMaxDim) {
    big.assign(static_cast<std::size_t>(n) + 1, 0.0);
    esf = big.data();
  }
  esf[0] = 1.0;
  for (int i = 0; i < n; ++i) {
    const int top = std::min(i + 1, k);
    for (int j = top; j >= 1; --j) {
      esf[j] += lam[static_cast<std::size_t>(i)] * esf[j - 1];
    }
  }
  return esf[k];
}

double sigma_truncated(std::span<const double> lam, int k, std::span<const int> omit) {
  const auto n = static_cast<int>(lam.size());
  if (omit.size() > 2) {
    throw std::domain_error("sigma_truncated: at most two omitted indices");
  }
  for (std::size_t a = 0; a < omit.size(); ++a) {
    if (omit[a] < 0 || omit[a] >= n) {
      throw std::domain_error("sigma_truncated: index " + std::to_string(omit[a]) +
                              " out of range");
    }
    for (std::size_t b = 0; b < a; ++b) {
      if (omit[a] == omit[b]) {
        throw std::domain_error("sigma_truncated: omitted indices must be distinct");
      }
    }
  }
  std::vector<double> copy(lam.begin(), lam.end());
  for (int i : omit) {
    copy[static_cast<std::size_t>(i)] = 0.0;
  }
  return sigma_k(copy, k);
}

double sigma_truncated(std::span<const double> lam, int k, std::initializer_list<int> omit) {
  return sigma_truncated(lam, k, std::span<const int>(omit.begin(), omit.size()));
}

SigmaJet sigma_jet(const SymTensor& a, int k) {
  const int n = a.dim();
  if (k < 1 || k > n) {
    throw std::domain_error("sigma_jet: index must satisfy 1 <= k <= n");
  }
  SigmaJet out;
  out.sigma[0] = 1.0;
  SymTensor t = SymTensor::identity(n);
  for (int j = 1; j <= k; ++j) {
    out.gradient = t;
    const Mat ta = t * a;
    out.sigma[static_cast<std::size_t>(j)] = ta.trace() / j;
    if (j < k) {
      t = out.sigma[static_cast<std::size_t>(j)] * SymTensor::identity(n) -
          SymTensor::symmetric_part(ta);
    }
  }
  return out;
}

double sigma_k(const SymTensor& a, int k) {
  if (k < 0) {
    throw std::domain_error("sigma_k: negative index " + std::to_string(k));
  }
  if (k == 0) {
    return 1.0;
  }
  if (k > a.dim()) {
    return 0.0;
  }
  return sigma_jet(a, k).sigma[static_cast<std::size_t>(k)];
}

SymTensor newton_transform(const SymTensor& a, int k) {
  const int n = a.dim();
  if (k < 0 || k > n) {
    throw std::domain_error("newton_transform: index must satisfy 0 <= k <= n");
  }
  SymTensor t = SymTensor::identity(n);
  for (int j = 1; j <= k; ++j) {
    const Mat ta = t * a;
    const double s = ta.trace() / j;
    t = s * SymTensor::identity(n) - SymTensor::symmetric_part(ta);
  }
  return t;
}

SymTensor sigma_k_gradient(const SymTensor& a, int k) {
  if (k < 1 || k > a.dim()) {
    throw std::domain_error("sigma_k_gradient: index must satisfy 1 <= k <= n");
  }
  return newton_transform(a, k - 1);
}

ConeReport cone_membership(std::span<const double> lam, int k, ConeSign sign) {
  const auto n = static_cast<int>(lam.size());
  if (k < 1 || k > n) {
    throw std::domain_error("cone_membership: index must satisfy 1 <= k <= n");
  }
  std::vector<double> signed_lam(lam.begin(), lam.end());
  if (sign == ConeSign::negative) {
    for (auto& x : signed_lam) {
      x = -x;
    }
  }
  ConeReport report;
  report.k = k;
  report.sign = sign;
  report.margins.reserve(static_cast<std::size_t>(k));
  report.margin = std::numeric_limits<double>::infinity();
  for (int j = 1; j <= k; ++j) {
    const double s = sigma_k(signed_lam, j);
    report.margins.push_back(s);
    report.margin = std::min(report.margin, s);
  }
  report.member = report.margin > 0.0;
  return report;
}

double cone_margin(std::span<const double> lam, int k) {
  const auto n = static_cast<int>(lam.size());
  if (k < 1 || k > n) {
    throw std::domain_error("cone_margin: index must satisfy 1 <= k <= n");
  }
  if (n > kMaxDim) {
    return cone_membership(lam, k).margin;
  }
  std::array<double, kMaxDim + 1> e{};
  e[0] = 1.0;
  for (int i = 0; i < n; ++i) {
    for (int j = std::min(i + 1, n); j >= 1; --j) {
      e[static_cast<std::size_t>(j)] += lam[static_cast<std::size_t>(i)] * e[static_cast<std::size_t>(j - 1)];
    }
  }
  double m = std::numeric_limits<double>::infinity();
  for (int j = 1; j <= k; ++j) {
    m = std::min(m, e[static_cast<std::size_t>(j)]);
  }
  return m;
}

double maclaurin_ratio(std::span<const double> lam, int k) {
  const auto n = static_cast<int>(lam.size());
  if (!cone_membership(lam, k).member) {
    throw std::domain_error("maclaurin_ratio: spectrum is not in Gamma_k^+");
  }
  const double mean_k = std::pow(sigma_k(lam, k) / binomial(n, k), 1.0 / k);
  const double mean_1 = sigma_k(lam, 1) / n;
  return mean_k / mean_1;
}

double lambda_k(int n, int k) {
  if (k < 1 || k > n) {
    throw std::domain_error("lambda_k: index must satisfy 1 <= k <= n");
  }
  return std::pow(binomial(n, k), -1.0 / k);
}

}  // namespace sigmak
