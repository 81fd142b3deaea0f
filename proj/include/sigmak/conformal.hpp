#pragma once

#include "sigmak/core.hpp"
#include "sigmak/tensor.hpp"

namespace sigmak {

/// Curvature data of a background metric at one point.
///
/// einstein = (Ric - (R/2) g)/(n-2); schouten_tau = (Ric - tau R/(2(n-1)) g)/(n-2).
/// The Einstein tensor is the tau = n-1 member of the Schouten family.
struct CurvaturePoint {
  MetricTensor g;
  SymTensor ric;
  double scal = 0.0;
  SymTensor einstein;
  SymTensor schouten_tau;
  double tau = 0.0;

  /// Builds the derived tensors from (g, Ric, R). Dimension is g.dim().
  static CurvaturePoint from_ricci(const MetricTensor& g, const SymTensor& ric, double scal,
                                   double tau);
  [[nodiscard]] int dim() const { return g.dim(); }
};

/// Value, gradient, Hessian and Laplacian of a conformal factor at a point,
/// all taken with respect to the background Levi-Civita connection.
struct ConformalJet {
  double u = 0.0;
  Vec grad_u;
  SymTensor hess_u;
  double lap_u = 0.0;

  static ConformalJet zero(int dim);
  /// Fills lap_u = tr(g^{-1} hess_u).
  static ConformalJet from_derivatives(const MetricTensor& g, double u, const Vec& grad,
                                       const SymTensor& hess);
  /// |lap_u - tr(g^{-1} hess_u)| <= tol * (1 + |lap_u|).
  [[nodiscard]] bool consistent_with(const MetricTensor& g, double tol = 1e-10) const;
};

[[nodiscard]] SymTensor einstein_from_ric(const SymTensor& ric, double scal, const MetricTensor& g,
                                          int n);

[[nodiscard]] SymTensor schouten_tau(const SymTensor& ric, double scal, const MetricTensor& g,
                                     int n, double tau);

/// E of g~ = e^{-2u} g in the background frame:
///   E_g + hess u - (lap u) g + du (x) du + ((n-3)/2)|du|^2 g.
[[nodiscard]] SymTensor conformal_einstein_log(const CurvaturePoint& base, const ConformalJet& jet,
                                               int n);

/// A^tau of g~ = e^{-2u} g:
///   A^tau + hess u + ((1-tau)/(n-2))(lap u) g + du (x) du - ((2-tau)/2)|du|^2 g.
[[nodiscard]] SymTensor conformal_schouten_log(const CurvaturePoint& base, const ConformalJet& jet,
                                               int n);

/// E of g~ = w^{4/(n-2)} g:
///   -2/(n-2) w^{-1} hess w + 2/(n-2) w^{-1} (lap w) g + 2n/(n-2)^2 w^{-2} dw (x) dw
///   - 2/(n-2)^2 w^{-2} |dw|^2 g + E_g.
[[nodiscard]] SymTensor conformal_einstein_power(const CurvaturePoint& base, double w,
                                                 const Vec& grad_w, const SymTensor& hess_w,
                                                 int n);

/// A^tau of g~ = w^{4/(n-2)} g; the Laplacian coefficient is -2(1-tau)/(n-2)^2.
[[nodiscard]] SymTensor conformal_schouten_power(const CurvaturePoint& base, double w,
                                                 const Vec& grad_w, const SymTensor& hess_w,
                                                 int n);

/// Eigenvalues of `a` relative to the conformal metric e^{-2u} g.
[[nodiscard]] Spectrum conformal_spectrum(const MetricTensor& g, double u, const SymTensor& a);

/// sigma_k(lambda(-E_{g~})) - target, g~ = e^{-2u} g, eigenvalues taken w.r.t. g~.
[[nodiscard]] double equation_residual_point(const CurvaturePoint& base, const ConformalJet& jet,
                                             int n, int k, double target);

}  // namespace sigmak
