#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "sigmak/exactsol.hpp"
#include "sigmak/grid.hpp"

namespace sigmak {

/// Every tunable constant of the corrector and the path follower.
struct SolverConfig {
  double newton_tol = 1e-10;       ///< sup-norm residual accepted as converged
  int newton_max_iter = 30;
  int max_halvings = 20;           ///< backtracking line-search depth
  int nonmonotone_window = 5;      ///< trial steps compare against the max of this many residuals
  double linear_rel_tol = 1e-8;
  int gmres_restart = 200;
  int gmres_max_iter = 2000;
  double cone_threshold = 1e-10;   ///< nodes with margin at or below this are inadmissible
  double dt_initial = 0.1;
  double dt_min = 1e-4;
  double dt_max = 0.25;
  double dt_growth = 1.5;
  int easy_successes = 2;          ///< consecutive easy steps before growing dt
  int easy_newton_iters = 4;       ///< a step is easy when the corrector needs at most this
};

/// One instance of the deformation equation on a discrete model geometry.
///
/// The nonlocal term uses the volume-normalized measure, so that u = 0 solves
/// the t = 0 problem exactly on every model.
struct DeformationProblem {
  Model model;
  ScalarField h;
  int n = 3;
  int k = 2;
  double lambda_k = 0.0;
  double cone_threshold = 1e-10;

  /// Validates the pairing of model and grid (round unit sphere with a
  /// sphere_polar grid, or torus with a TorusGrid), n = 3, 1 <= k <= 3 and h > 0.
  static DeformationProblem make(const Model& model, ScalarField h, int k);

  [[nodiscard]] const Grid& grid() const { return h.grid(); }
  [[nodiscard]] CurvaturePoint curvature() const { return model_curvature(model); }
};

/// phi(t) = 3(2t)^2 - 2(2t)^3 for t < 1/2, 1 afterwards; returns (value, derivative).
[[nodiscard]] std::pair<double, double> phi(double t);

/// W_t = lambda_k (1-phi) g - phi E - hess u + (lap u) g - du (x) du + ((3-n)/2)|du|^2 g.
[[nodiscard]] SymTensor deformation_tensor(const DeformationProblem& prob, const ConformalJet& jet,
                                           double t);

struct ResidualField {
  std::vector<double> values;
  bool admissible = true;
  double cone_margin = 0.0;  ///< min over nodes of min_j sigma_j(W_t)
  std::size_t worst_node = 0;
};

/// (integral of exp(-(n+1)u) / volume)^{2/(n+1)}.
[[nodiscard]] double normalized_integral(const DeformationProblem& prob, std::span<const double> u);

/// Per-node F = sigma_k^{1/k}(W_t) - phi h^{1/k} e^{-2u} - (1-t) N(u). Nodes where
/// W_t leaves Gamma_k^+ get F = -(cone deficit) - 1 and clear `admissible`.
[[nodiscard]] ResidualField deformation_residual(const DeformationProblem& prob,
                                                 std::span<const double> u, double t);
[[nodiscard]] ResidualField deformation_residual(const DeformationProblem& prob,
                                                 const ScalarField& u, double t);

/// Linearization of deformation_residual at (u, t). Coefficients are frozen at
/// construction; apply() is matrix-free and includes the rank-one nonlocal part.
class DeformationJacobian {
 public:
  /// Throws std::domain_error when some node is outside Gamma_k^+.
  DeformationJacobian(const DeformationProblem& prob, std::span<const double> u, double t);

  void apply(std::span<const double> v, std::span<double> out) const;
  [[nodiscard]] std::vector<double> apply(std::span<const double> v) const;
  /// Diagonal of the operator (Jacobi preconditioner).
  [[nodiscard]] const std::vector<double>& diagonal() const { return diagonal_; }

 private:
  struct NodeCoeffs {
    SymTensor second;  ///< multiplies hess v
    Vec first;         ///< multiplies grad v
    double zeroth = 0.0;
  };

  double local(const ConformalJet& jet_v, std::size_t node) const;

  const DeformationProblem* prob_;
  std::vector<NodeCoeffs> coeffs_;
  std::vector<double> nonlocal_;  ///< row-independent weights of the rank-one term
  std::vector<double> diagonal_;
};

[[nodiscard]] ScalarField jacobian_action(const DeformationProblem& prob, const ScalarField& u,
                                          double t, const ScalarField& v);

/// One accepted point of the homotopy.
struct ContinuationState {
  double t = 0.0;
  ScalarField u;
  double residual_sup = 0.0;
  double cone_margin = 0.0;
  double apriori_ratio = 0.0;
  bool admissible = false;
};

/// Evaluates residual, margin and norms of (u, t).
[[nodiscard]] ContinuationState make_state(const DeformationProblem& prob, ScalarField u, double t);

enum class NewtonStatus { converged, line_search_stall, max_iterations, cone_exit };

[[nodiscard]] std::string to_string(NewtonStatus status);

struct NewtonResult {
  NewtonStatus status = NewtonStatus::converged;
  ContinuationState state;  ///< last accepted iterate
  int iterations = 0;
  int linear_iterations = 0;
};

/// Damped Newton at fixed state.t starting from state.u.
[[nodiscard]] NewtonResult newton_correct(const DeformationProblem& prob,
                                          const ContinuationState& start,
                                          const SolverConfig& config);

struct PathRecord {
  double t = 0.0;
  double residual_sup = 0.0;
  double cone_margin = 0.0;
  double apriori_ratio = 0.0;
  int newton_iters = 0;
  int linear_iters = 0;
};

enum class SolveStatus { converged, min_step, start_failed };

[[nodiscard]] std::string to_string(SolveStatus status);

struct ContinuationResult {
  SolveStatus status = SolveStatus::converged;
  ContinuationState final_state;
  std::vector<PathRecord> path;
  bool background_admissible = false;
  double background_margin = 0.0;     ///< min_j sigma_j(lambda(-E)) at t = 1
  NewtonStatus last_newton = NewtonStatus::converged;
  /// sup over nodes of |sigma_k(lambda_{g~}(-E_{g~})) - h|, computed through
  /// equation_residual_point; only meaningful once t = 1 is reached.
  double independent_residual = 0.0;
  std::vector<std::string> warnings;
};

/// Follows the homotopy from t = 0 (starting at u0, default zero) to t = 1.
[[nodiscard]] ContinuationResult continuation_solve(const DeformationProblem& prob,
                                                    const SolverConfig& config);
[[nodiscard]] ContinuationResult continuation_solve(const DeformationProblem& prob,
                                                    const SolverConfig& config,
                                                    const ScalarField& u0);

/// sup_i |sigma_k(lambda_{g~}(-E_{g~})) - h_i| at every node.
[[nodiscard]] double independent_residual(const DeformationProblem& prob, const ScalarField& u);

/// CSV with columns t,residual_sup,cone_margin,apriori_ratio,newton_iters,linear_iters.
void write_path_csv(std::ostream& out, const std::vector<PathRecord>& path);

}  // namespace sigmak
