#include "sigmak/conformal.hpp"

#include <cmath>
#include <string>

#include "sigmak/symfun.hpp"

namespace sigmak {

namespace {

void check_n(int n, int dim) {
  if (n < 3) {
    throw std::domain_error("curvature formulas need n >= 3, got " + std::to_string(n));
  }
  if (n != dim) {
    throw std::invalid_argument("n = " + std::to_string(n) + " does not match tensor dimension " +
                                std::to_string(dim));
  }
}

}  // namespace

CurvaturePoint CurvaturePoint::from_ricci(const MetricTensor& g, const SymTensor& ric, double scal,
                                          double tau) {
  const int n = g.dim();
  CurvaturePoint p;
  p.g = g;
  p.ric = ric;
  p.scal = scal;
  p.tau = tau;
  p.einstein = einstein_from_ric(ric, scal, g, n);
  p.schouten_tau = sigmak::schouten_tau(ric, scal, g, n, tau);
  return p;
}

ConformalJet ConformalJet::zero(int dim) {
  return {0.0, Vec(dim), SymTensor::zero(dim), 0.0};
}

ConformalJet ConformalJet::from_derivatives(const MetricTensor& g, double u, const Vec& grad,
                                            const SymTensor& hess) {
  return {u, grad, hess, g.trace_of(hess)};
}

bool ConformalJet::consistent_with(const MetricTensor& g, double tol) const {
  return std::abs(lap_u - g.trace_of(hess_u)) <= tol * (1.0 + std::abs(lap_u));
}

SymTensor einstein_from_ric(const SymTensor& ric, double scal, const MetricTensor& g, int n) {
  check_n(n, g.dim());
  return (1.0 / (n - 2)) * (ric - (0.5 * scal) * g.tensor());
}

SymTensor schouten_tau(const SymTensor& ric, double scal, const MetricTensor& g, int n,
                       double tau) {
  check_n(n, g.dim());
  return (1.0 / (n - 2)) * (ric - (tau * scal / (2.0 * (n - 1))) * g.tensor());
}

SymTensor conformal_einstein_log(const CurvaturePoint& base, const ConformalJet& jet, int n) {
  check_n(n, base.dim());
  const double grad_sq = base.g.inner_inverse(jet.grad_u, jet.grad_u);
  SymTensor e = base.einstein + jet.hess_u + SymTensor::outer(jet.grad_u);
  e += (-jet.lap_u + 0.5 * (n - 3) * grad_sq) * base.g.tensor();
  return e;
}

SymTensor conformal_schouten_log(const CurvaturePoint& base, const ConformalJet& jet, int n) {
  check_n(n, base.dim());
  const double tau = base.tau;
  const double grad_sq = base.g.inner_inverse(jet.grad_u, jet.grad_u);
  SymTensor a = base.schouten_tau + jet.hess_u + SymTensor::outer(jet.grad_u);
  a += ((1.0 - tau) / (n - 2) * jet.lap_u - 0.5 * (2.0 - tau) * grad_sq) * base.g.tensor();
  return a;
}

namespace {

// Shared power-law body; lap_coeff multiplies w^{-1} (lap w) g.
SymTensor power_law(const SymTensor& background, const MetricTensor& g, double w,
                    const Vec& grad_w, const SymTensor& hess_w, int n, double lap_coeff) {
  if (!(w > 0.0)) {
    throw std::domain_error("conformal factor w must be positive");
  }
  const double m = n - 2;
  const double lap_w = g.trace_of(hess_w);
  const double grad_sq = g.inner_inverse(grad_w, grad_w);
  SymTensor out = background;
  out += (-2.0 / (m * w)) * hess_w;
  out += (2.0 * n / (m * m * w * w)) * SymTensor::outer(grad_w);
  out += (lap_coeff * lap_w / w - 2.0 * grad_sq / (m * m * w * w)) * g.tensor();
  return out;
}

}  // namespace

SymTensor conformal_einstein_power(const CurvaturePoint& base, double w, const Vec& grad_w,
                                   const SymTensor& hess_w, int n) {
  check_n(n, base.dim());
  return power_law(base.einstein, base.g, w, grad_w, hess_w, n, 2.0 / (n - 2));
}

SymTensor conformal_schouten_power(const CurvaturePoint& base, double w, const Vec& grad_w,
                                   const SymTensor& hess_w, int n) {
  check_n(n, base.dim());
  const double m = n - 2;
  return power_law(base.schouten_tau, base.g, w, grad_w, hess_w, n,
                   -2.0 * (1.0 - base.tau) / (m * m));
}

Spectrum conformal_spectrum(const MetricTensor& g, double u, const SymTensor& a) {
  // g~ = e^{-2u} g, so g~^{-1} a = e^{2u} g^{-1} a.
  return gen_eigen(g, a).scaled(std::exp(2.0 * u));
}

double equation_residual_point(const CurvaturePoint& base, const ConformalJet& jet, int n, int k,
                               double target) {
  if (k < 1 || k > n) {
    throw std::domain_error("equation_residual_point: index must satisfy 1 <= k <= n");
  }
  const SymTensor minus_e = -conformal_einstein_log(base, jet, n);
  const MetricTensor g_tilde = base.g.scaled(std::exp(-2.0 * jet.u));
  return sigma_k(gen_eigen(g_tilde, minus_e), k) - target;
}

}  // namespace sigmak
