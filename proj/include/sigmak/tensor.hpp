#pragma once

#include "sigmak/core.hpp"

namespace sigmak {

/// Positive-definite symmetric tensor (a Riemannian metric at a point).
///
/// Construction factors g = L L^T and throws std::domain_error when a pivot
/// falls to 1e-14 * trace or below.
class MetricTensor {
 public:
  MetricTensor() = default;
  explicit MetricTensor(const SymTensor& g);

  static MetricTensor euclidean(int dim) { return MetricTensor(SymTensor::identity(dim)); }

  [[nodiscard]] int dim() const { return g_.dim(); }
  [[nodiscard]] const SymTensor& tensor() const { return g_; }
  double operator()(int i, int j) const { return g_(i, j); }
  [[nodiscard]] bool is_identity() const { return identity_; }

  /// Lower-triangular Cholesky factor.
  [[nodiscard]] const Mat& cholesky() const { return chol_; }
  /// L^{-1} A L^{-T}: the tensor A expressed in a g-orthonormal frame.
  [[nodiscard]] SymTensor to_orthonormal(const SymTensor& a) const;
  /// L^{-T} B L^{-1}: inverse of to_orthonormal.
  [[nodiscard]] SymTensor from_orthonormal(const SymTensor& b) const;
  /// g^{ij} v_i w_j for covectors v, w.
  [[nodiscard]] double inner_inverse(const Vec& v, const Vec& w) const;
  /// tr(g^{-1} A).
  [[nodiscard]] double trace_of(const SymTensor& a) const;
  [[nodiscard]] MetricTensor scaled(double s) const;

 private:
  SymTensor g_;
  Mat chol_;
  bool identity_ = false;
};

/// Eigenvalues and orthonormal eigenvectors (columns of `vectors`).
struct EigenDecomposition {
  Spectrum values;
  Mat vectors;
};

/// Eigenvalues of a symmetric tensor, sorted descending.
///
/// 3x3 uses the trigonometric closed form, falling back to cyclic Jacobi when
/// the relative discriminant is below 1e-14; 4..6 always use cyclic Jacobi.
[[nodiscard]] Spectrum sym_eigen(const SymTensor& a);

/// Eigenvalues with eigenvectors, by cyclic Jacobi. Column j of `vectors`
/// belongs to values[j].
[[nodiscard]] EigenDecomposition sym_eigen_vectors(const SymTensor& a);

/// Eigenvalues of g^{-1} A by symmetric congruence with the Cholesky factor of g.
[[nodiscard]] Spectrum gen_eigen(const MetricTensor& g, const SymTensor& a);

/// min over permutations p of sum_i |lambda_i(M) - lambda_p(i)(Mt)|, by
/// exhaustive enumeration (n! <= 720).
[[nodiscard]] double eigen_match_distance(const SymTensor& m, const SymTensor& mt);

}  // namespace sigmak
