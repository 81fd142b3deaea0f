#pragma once

#include <functional>
#include <span>
#include <vector>

namespace sigmak {

/// y = A x for a matrix-free operator.
using LinearOperator = std::function<void(std::span<const double> x, std::span<double> y)>;

struct GmresOptions {
  int restart = 200;
  int max_iterations = 2000;
  double rel_tol = 1e-8;
};

struct GmresResult {
  bool converged = false;
  int iterations = 0;
  double rel_residual = 0.0;
};

/// Restarted GMRES with right Jacobi preconditioning: solves A M^{-1} y = b,
/// x = M^{-1} y, where M = diag(`diagonal`). Zero diagonal entries are treated
/// as 1. `x` holds the initial guess on entry and the solution on exit.
GmresResult gmres(const LinearOperator& apply, std::span<const double> diagonal,
                  std::span<const double> rhs, std::span<double> x, const GmresOptions& opts);

}  // namespace sigmak
