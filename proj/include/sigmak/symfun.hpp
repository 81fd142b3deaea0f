#pragma once

#include <span>
#include <vector>

#include "sigmak/core.hpp"

namespace sigmak {

/// Binomial coefficient C(n, k) as a double (0 when k > n or k < 0).
[[nodiscard]] double binomial(int n, int k);

/// k-th elementary symmetric polynomial of `lam`.
///
/// sigma_0 = 1 and sigma_k = 0 for k > n. Negative k throws std::domain_error.
/// Indices in `lam` are taken in the order given (no sorting is applied).
[[nodiscard]] double sigma_k(std::span<const double> lam, int k);

/// sigma_k with the entries at `omit` (at most two distinct indices) set to zero.
/// This is sigma_{k;i} for one index and sigma_{k;ij} for two.
[[nodiscard]] double sigma_truncated(std::span<const double> lam, int k,
                                     std::span<const int> omit);
[[nodiscard]] double sigma_truncated(std::span<const double> lam, int k,
                                     std::initializer_list<int> omit);

/// sigma_k of a symmetric matrix through the Newton-transform recurrence
/// sigma_j = tr(T_{j-1} A)/j, T_j = sigma_j I - T_{j-1} A.
[[nodiscard]] double sigma_k(const SymTensor& a, int k);

/// T_k(A) = sigma_k(A) I - sigma_{k-1}(A) A + ... + (-1)^k A^k, 0 <= k <= n.
[[nodiscard]] SymTensor newton_transform(const SymTensor& a, int k);

/// Matrix gradient of sigma_k: d sigma_k / d A_ij = T_{k-1}(A)_ij, 1 <= k <= n.
[[nodiscard]] SymTensor sigma_k_gradient(const SymTensor& a, int k);

/// sigma_1..sigma_k of A together with T_{k-1}(A), from one recurrence pass.
struct SigmaJet {
  std::array<double, kMaxDim + 1> sigma{};  ///< sigma[0..k]
  SymTensor gradient;                       ///< T_{k-1}(A)
};
[[nodiscard]] SigmaJet sigma_jet(const SymTensor& a, int k);

enum class ConeSign { positive, negative };

/// Membership of lambda in the Garding cone Gamma_k^+ (or Gamma_k^- = -Gamma_k^+).
struct ConeReport {
  int k = 0;
  ConeSign sign = ConeSign::positive;
  bool member = false;
  std::vector<double> margins;  ///< sigma_1..sigma_k of (+-)lambda
  double margin = 0.0;          ///< min of margins; member <=> margin > 0
};

[[nodiscard]] ConeReport cone_membership(std::span<const double> lam, int k,
                                         ConeSign sign = ConeSign::positive);

/// Unnormalized cone margin min_{j<=k} sigma_j(lam), without building a report.
[[nodiscard]] double cone_margin(std::span<const double> lam, int k);

/// (sigma_k / C(n,k))^{1/k} / (sigma_1 / n). At most 1 on Gamma_k^+, with
/// equality exactly when all entries agree. Throws outside Gamma_k^+.
[[nodiscard]] double maclaurin_ratio(std::span<const double> lam, int k);

/// lambda_k = C(n,k)^{-1/k}: sigma_k^{1/k}(lambda_k, ..., lambda_k) = 1.
[[nodiscard]] double lambda_k(int n, int k);

}  // namespace sigmak
