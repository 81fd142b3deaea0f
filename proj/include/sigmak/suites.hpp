#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace sigmak {

/// One named pass/fail outcome with the quantity that decided it.
struct CheckRecord {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double tolerance = 0.0;
  std::string detail;
  std::string relation = "<=";  ///< how measured compares with tolerance on a pass
};

struct SuiteOptions {
  std::uint64_t seed = 1;
  int n = 0;  ///< restrict identity samples to this dimension (0: all of 3..6)
  int k = 0;  ///< restrict identity samples to this k (0: all of 1..n)
  int identity_samples = 10000;
  int gradient_samples = 1000;
  int ricci_samples = 2000;
  int convention_samples = 1500;
  int perturbation_samples = 2500;
  /// Test hook: scales every sigma_k the suites compare against by 1 + 1e-6.
  bool corrupt_sigma = false;
};

/// T_{k-1} identities on seeded samples of Gamma_k^+, in eigenvalue and
/// rotated-matrix form: trace pairing, trace of T_{k-1}, the splitting
/// sigma_k = lambda_i sigma_{k-1;i} + sigma_{k;i}, and positivity/ordering.
[[nodiscard]] std::vector<CheckRecord> identity_checks(const SuiteOptions& opts);

/// sigma_k_gradient against central differences of sigma_k.
[[nodiscard]] CheckRecord gradient_check(const SuiteOptions& opts);

/// T_1(-E) = Ric in dimension three, and Ric > 0 whenever -E is 2-admissible.
[[nodiscard]] std::vector<CheckRecord> ricci_checks(const SuiteOptions& opts);

/// Log and power conformal laws (Einstein and Schouten) on random jets, n = 3, 4, 5.
[[nodiscard]] std::vector<CheckRecord> convention_checks(const SuiteOptions& opts);

/// Fitted eigenvalue perturbation constant per dimension against the
/// Hoffman-Wielandt ceiling n^{3/2}.
[[nodiscard]] std::vector<CheckRecord> perturbation_checks(const SuiteOptions& opts);

/// Continuity of U(alpha, c0) at alpha = 0 and monotonicity in both arguments.
[[nodiscard]] std::vector<CheckRecord> hawking_checks();

/// Every suite above, in order.
[[nodiscard]] std::vector<CheckRecord> verify_all(const SuiteOptions& opts);

}  // namespace sigmak
