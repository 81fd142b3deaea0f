#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sigmak/conformal.hpp"

namespace sigmak {

// ---------------------------------------------------------------------------
// Model backgrounds

enum class ModelKind { flat, torus, round_sphere };

/// Analytic background geometry. Sphere curvature scales as radius^{-2}.
struct Model {
  ModelKind kind = ModelKind::flat;
  double radius = 1.0;  ///< round_sphere only
  int n = 3;
  double tau = 2.0;     ///< Schouten parameter carried into CurvaturePoint

  static Model flat(int n = 3) { return {ModelKind::flat, 1.0, n, n - 1.0}; }
  static Model torus(int n = 3) { return {ModelKind::torus, 1.0, n, n - 1.0}; }
  static Model round_sphere(double radius = 1.0, int n = 3) {
    return {ModelKind::round_sphere, radius, n, n - 1.0};
  }
};

[[nodiscard]] std::string to_string(ModelKind kind);

/// Exact curvature of the model in an orthonormal frame at `point`.
/// All models here are homogeneous, so the point only fixes the dimension.
[[nodiscard]] CurvaturePoint model_curvature(const Model& model, const Vec& point);
[[nodiscard]] CurvaturePoint model_curvature(const Model& model);

// ---------------------------------------------------------------------------
// Liouville bubbles

/// The two displayed radial profiles.
///   theorem: (a / (1 + c b^2 |x-p|^2))^{(n-2)/2}
///   lemma:   (2a / (1 + c a^2 |x-p|^2))^{(n-2)/2}
/// where c is `curvature_const` and b is `scale_b` (theorem form only).
enum class BubbleForm { theorem, lemma };

struct BubbleParams {
  BubbleForm form = BubbleForm::theorem;
  double a = 1.0;
  Vec p;
  double curvature_const = 1.0;
  double scale_b = 1.0;
  int n = 3;
  double tau = 2.0;
  int k = 2;

  /// Throws std::domain_error on a <= 0, k outside 1..n, or p of wrong dimension.
  void validate() const;
  /// (a, b) of the equivalent theorem-form profile.
  [[nodiscard]] double theorem_a() const;
  [[nodiscard]] double theorem_b() const;
  /// C(n,k) (2 b^2 / a^2)^k with theorem-form (a, b): the value sigma_k must take.
  [[nodiscard]] double target() const;
  /// Theorem form with b chosen so that target() == 1.
  static BubbleParams normalized(int n, int k, double tau, double a, double curvature_const);
};

/// Constant displayed alongside the theorem form: (n-2)/(n tau - 2n + 2).
[[nodiscard]] double theorem_bubble_constant(int n, double tau);
/// Constant displayed alongside the lemma form: (n-2)/(2n - 2 - n tau).
[[nodiscard]] double lemma_bubble_constant(int n, double tau);

struct RadialDerivatives {
  double w = 0.0;
  Vec grad;
  SymTensor hess;
};

[[nodiscard]] double bubble_value(const BubbleParams& params, const Vec& x);
/// Closed-form value, gradient and Hessian of the profile at x.
[[nodiscard]] RadialDerivatives bubble_derivatives(const BubbleParams& params, const Vec& x);

/// -A^tau of the bubble metric w^{4/(n-2)} g_flat at x (background frame).
[[nodiscard]] SymTensor bubble_minus_schouten(const BubbleParams& params, const Vec& x);
/// Eigenvalues of -A^tau at x taken with respect to the bubble metric.
[[nodiscard]] Spectrum bubble_spectrum(const BubbleParams& params, const Vec& x);

/// max over samples of |sigma_k(lambda(-A^tau)) - target()| on the flat background.
[[nodiscard]] double verify_liouville(const BubbleParams& params, const std::vector<Vec>& samples);

/// Seeded sample points p + r * direction with `count` radii spread over the
/// region where the profile denominator stays positive.
[[nodiscard]] std::vector<Vec> liouville_samples(const BubbleParams& params, int count,
                                                 std::uint64_t seed);

/// Outcome of choosing the profile constant by plugging both displayed
/// candidates into the curvature equation.
struct ConstantResolution {
  bool resolved = false;
  double constant = 0.0;
  std::string source;            ///< "theorem" or "lemma"
  double theorem_residual = 0.0;
  double lemma_residual = 0.0;
  std::string note;
};

[[nodiscard]] ConstantResolution resolve_bubble_constant(int n, int k, double tau, double a,
                                                         int sample_count, std::uint64_t seed,
                                                         double tolerance = 1e-9);

// ---------------------------------------------------------------------------
// Barrier r^{-(1-2 delta)} e^r

struct BarrierParams {
  double delta = 0.1;
  double r_min = 1e-4;
  double r_max = 0.5;

  /// Throws std::domain_error unless 0 < delta < 1/4 and 0 < r_min < r_max.
  void validate() const;
  /// Exponent a = 1 - 2 delta.
  [[nodiscard]] double exponent() const { return 1.0 - 2.0 * delta; }
};

struct BarrierProfile {
  double v = 0.0;
  double dv = 0.0;
  double d2v = 0.0;
};

/// v(r) = r^{-a} e^r with its first two derivatives, closed form.
[[nodiscard]] BarrierProfile barrier_profile(const BarrierParams& params, double r);

/// Leading-order eigenvalue model of the barrier's Einstein tensor (n = 3).
struct BarrierModel {
  double r = 0.0;
  double d1 = 0.0;  ///< 2/r
  double d2 = 0.0;  ///< (4(1-a)a + 2(4a-1)r - 4r^2)/r^2
  std::array<double, 3> triple{};  ///< (d1 - d2, d1, d1)
  double sigma1 = 0.0;
  double sigma2 = 0.0;
};

[[nodiscard]] BarrierModel barrier_eigs(const BarrierParams& params, double r);

enum class BarrierBackground { flat, unit_sphere };

/// Eigenvalues (background frame, descending) of E for v^4 g at geodesic
/// distance r from the pole, using conformal_einstein_power with closed-form
/// derivatives of v.
[[nodiscard]] Spectrum barrier_full_spectrum(const BarrierParams& params, double r,
                                             BarrierBackground background);

struct BarrierSample {
  BarrierModel model;
  Spectrum flat;
  Spectrum sphere;
  double sphere_deviation = 0.0;  ///< sum |lambda_full - lambda_model| on the sphere background
  double flat_deviation = 0.0;
};

struct BarrierScan {
  double delta = 0.0;
  double r1 = 0.0;      ///< 0 when even the first grid point violates the signs
  bool found = false;
  std::vector<BarrierSample> samples;
  double fitted_c = 0.0;        ///< max sphere_deviation / (r d1) over the grid
  double flat_max_ratio = 0.0;  ///< same on the flat background
};

/// Logarithmic grid of `count` points over [r_min, r_max].
[[nodiscard]] std::vector<double> log_grid(double r_min, double r_max, int count);

/// Scans the grid; r1 is the largest grid point such that sigma1 < 0 and
/// sigma2 < 0 hold at it and every smaller grid point.
[[nodiscard]] BarrierScan barrier_scan(const BarrierParams& params, const std::vector<double>& grid);

// ---------------------------------------------------------------------------

/// Distance bound U(alpha, c0): 1/c0 at alpha = 0, arccoth(c0/alpha)/alpha otherwise.
/// Requires c0 > 0 and c0 >= alpha >= 0; c0 == alpha > 0 gives +infinity.
[[nodiscard]] double hawking_bound(double alpha, double c0);

}  // namespace sigmak
