#include "sigmak/exactsol.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "sigmak/symfun.hpp"

namespace sigmak {

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::flat:
      return "flat";
    case ModelKind::torus:
      return "torus";
    case ModelKind::round_sphere:
      return "round_sphere";
  }
  return "unknown";
}

CurvaturePoint model_curvature(const Model& model, const Vec& point) {
  if (point.dim() != model.n) {
    throw std::invalid_argument("model_curvature: point dimension does not match model");
  }
  return model_curvature(model);
}

CurvaturePoint model_curvature(const Model& model) {
  const int n = model.n;
  const MetricTensor g = MetricTensor::euclidean(n);
  switch (model.kind) {
    case ModelKind::flat:
    case ModelKind::torus:
      return CurvaturePoint::from_ricci(g, SymTensor::zero(n), 0.0, model.tau);
    case ModelKind::round_sphere: {
      if (!(model.radius > 0.0)) {
        throw std::domain_error("sphere radius must be positive");
      }
      const double sec = 1.0 / (model.radius * model.radius);
      return CurvaturePoint::from_ricci(g, ((n - 1) * sec) * SymTensor::identity(n),
                                        n * (n - 1) * sec, model.tau);
    }
  }
  throw std::invalid_argument("unknown model");
}

// ---------------------------------------------------------------------------
// Bubbles

void BubbleParams::validate() const {
  if (!(a > 0.0)) {
    throw std::domain_error("bubble: a must be positive");
  }
  if (n < 3 || n > kMaxDim) {
    throw std::domain_error("bubble: n must be in 3..6");
  }
  if (k < 1 || k > n) {
    throw std::domain_error("bubble: k must satisfy 1 <= k <= n");
  }
  if (p.dim() != n) {
    throw std::domain_error("bubble: centre has wrong dimension");
  }
  if (form == BubbleForm::theorem && !(scale_b > 0.0)) {
    throw std::domain_error("bubble: b must be positive");
  }
}

double BubbleParams::theorem_a() const { return form == BubbleForm::theorem ? a : 2.0 * a; }

double BubbleParams::theorem_b() const { return form == BubbleForm::theorem ? scale_b : a; }

double BubbleParams::target() const {
  const double at = theorem_a();
  const double bt = theorem_b();
  return binomial(n, k) * std::pow(2.0 * bt * bt / (at * at), k);
}

BubbleParams BubbleParams::normalized(int n, int k, double tau, double a, double curvature_const) {
  BubbleParams p;
  p.form = BubbleForm::theorem;
  p.a = a;
  p.p = Vec(n);
  p.curvature_const = curvature_const;
  p.n = n;
  p.tau = tau;
  p.k = k;
  // C(n,k) (2 b^2/a^2)^k = 1
  p.scale_b = a * std::sqrt(0.5 * lambda_k(n, k));
  p.validate();
  return p;
}

double theorem_bubble_constant(int n, double tau) { return (n - 2) / (n * tau - 2.0 * n + 2.0); }

double lemma_bubble_constant(int n, double tau) { return (n - 2) / (2.0 * n - 2.0 - n * tau); }

namespace {

double bubble_k_coeff(const BubbleParams& params) {
  const double b = params.theorem_b();
  return params.curvature_const * b * b;
}

}  // namespace

double bubble_value(const BubbleParams& params, const Vec& x) {
  return bubble_derivatives(params, x).w;
}

RadialDerivatives bubble_derivatives(const BubbleParams& params, const Vec& x) {
  params.validate();
  const int n = params.n;
  if (x.dim() != n) {
    throw std::invalid_argument("bubble: point has wrong dimension");
  }
  const Vec d = x - params.p;
  const double kc = bubble_k_coeff(params);
  const double q = 1.0 + kc * d.norm_sq();
  if (!(q > 0.0)) {
    throw std::domain_error("bubble: profile denominator is not positive at the point");
  }
  const double m = 0.5 * (n - 2);
  RadialDerivatives out;
  out.w = std::pow(params.theorem_a() / q, m);
  const double s = -2.0 * m * kc * out.w / q;
  out.grad = s * d;
  out.hess = s * SymTensor::identity(n);
  out.hess += (4.0 * m * (m + 1.0) * kc * kc * out.w / (q * q)) * SymTensor::outer(d);
  return out;
}

SymTensor bubble_minus_schouten(const BubbleParams& params, const Vec& x) {
  const RadialDerivatives rd = bubble_derivatives(params, x);
  const int n = params.n;
  const CurvaturePoint flat = CurvaturePoint::from_ricci(MetricTensor::euclidean(n),
                                                         SymTensor::zero(n), 0.0, params.tau);
  return -conformal_schouten_power(flat, rd.w, rd.grad, rd.hess, n);
}

Spectrum bubble_spectrum(const BubbleParams& params, const Vec& x) {
  const int n = params.n;
  const double w = bubble_value(params, x);
  // g~ = w^{4/(n-2)} g_flat
  return sym_eigen(bubble_minus_schouten(params, x)).scaled(std::pow(w, -4.0 / (n - 2)));
}

double verify_liouville(const BubbleParams& params, const std::vector<Vec>& samples) {
  const double target = params.target();
  double worst = 0.0;
  for (const Vec& x : samples) {
    worst = std::max(worst, std::abs(sigma_k(bubble_spectrum(params, x), params.k) - target));
  }
  return worst;
}

std::vector<Vec> liouville_samples(const BubbleParams& params, int count, std::uint64_t seed) {
  params.validate();
  const double kc = bubble_k_coeff(params);
  if (kc == 0.0) {
    throw std::domain_error("bubble: zero curvature constant");
  }
  // Positive constants are entire; negative ones live on a ball of radius 1/sqrt|kc|.
  const double r_lim = kc > 0.0 ? 4.0 / std::sqrt(kc) : 0.9 / std::sqrt(-kc);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Vec> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int j = 0; j < count; ++j) {
    Vec dir(params.n);
    double len = 0.0;
    while (len < 1e-8) {
      for (int i = 0; i < params.n; ++i) {
        dir[i] = normal(rng);
      }
      len = std::sqrt(dir.norm_sq());
    }
    const double r = r_lim * (j + 0.5) / count;
    out.push_back(params.p + (r / len) * dir);
  }
  return out;
}

namespace {

struct CandidateCheck {
  double residual = std::numeric_limits<double>::infinity();
  bool admissible = false;
};

CandidateCheck check_candidate(int n, int k, double tau, double a, double constant, int count,
                               std::uint64_t seed) {
  CandidateCheck out;
  if (!std::isfinite(constant) || constant == 0.0) {
    return out;
  }
  const BubbleParams params = BubbleParams::normalized(n, k, tau, a, constant);
  const auto samples = liouville_samples(params, count, seed);
  out.residual = verify_liouville(params, samples);
  out.admissible = std::all_of(samples.begin(), samples.end(), [&](const Vec& x) {
    return cone_membership(bubble_spectrum(params, x), k).member;
  });
  return out;
}

}  // namespace

ConstantResolution resolve_bubble_constant(int n, int k, double tau, double a, int sample_count,
                                           std::uint64_t seed, double tolerance) {
  const double c_thm = theorem_bubble_constant(n, tau);
  const double c_lem = lemma_bubble_constant(n, tau);
  const CandidateCheck thm = check_candidate(n, k, tau, a, c_thm, sample_count, seed);
  const CandidateCheck lem = check_candidate(n, k, tau, a, c_lem, sample_count, seed);

  ConstantResolution res;
  res.theorem_residual = thm.residual;
  res.lemma_residual = lem.residual;
  const bool thm_ok = thm.admissible && thm.residual < tolerance;
  const bool lem_ok = lem.admissible && lem.residual < tolerance;
  if (thm_ok && (!lem_ok || thm.residual <= lem.residual)) {
    res = {true, c_thm, "theorem", thm.residual, lem.residual, ""};
  } else if (lem_ok) {
    res = {true, c_lem, "lemma", thm.residual, lem.residual, ""};
  }
  if (res.resolved) {
    res.note = "constant (n-2)/(" + std::string(res.source == "theorem" ? "n tau - 2n + 2" :
                                                                         "2n - 2 - n tau") +
               ") selected by plug-in: residual below tolerance with -A^tau in Gamma_k^+";
    if (!(res.source == "theorem" ? lem.admissible : thm.admissible)) {
      res.note += "; the other candidate leaves Gamma_k^+";
    }
  } else {
    res.note = "no candidate constant reproduces the normalized target inside Gamma_k^+";
  }
  return res;
}

// ---------------------------------------------------------------------------
// Barrier

void BarrierParams::validate() const {
  if (!(delta > 0.0 && delta < 0.25)) {
    throw std::domain_error("barrier: delta must lie in (0, 1/4)");
  }
  if (!(r_min > 0.0 && r_min < r_max)) {
    throw std::domain_error("barrier: need 0 < r_min < r_max");
  }
}

BarrierProfile barrier_profile(const BarrierParams& params, double r) {
  if (!(r > 0.0)) {
    throw std::domain_error("barrier: r must be positive");
  }
  const double a = params.exponent();
  BarrierProfile p;
  p.v = std::pow(r, -a) * std::exp(r);
  p.dv = p.v * (r - a) / r;
  p.d2v = p.v * ((r - a) * (r - a) + a) / (r * r);
  return p;
}

BarrierModel barrier_eigs(const BarrierParams& params, double r) {
  if (!(r > 0.0)) {
    throw std::domain_error("barrier: r must be positive");
  }
  const double a = params.exponent();
  BarrierModel m;
  m.r = r;
  m.d1 = 2.0 / r;
  m.d2 = (4.0 * (1.0 - a) * a + 2.0 * (4.0 * a - 1.0) * r - 4.0 * r * r) / (r * r);
  m.triple = {m.d1 - m.d2, m.d1, m.d1};
  m.sigma1 = sigma_k(m.triple, 1);
  m.sigma2 = sigma_k(m.triple, 2);
  return m;
}

Spectrum barrier_full_spectrum(const BarrierParams& params, double r,
                               BarrierBackground background) {
  const BarrierProfile p = barrier_profile(params, r);
  constexpr int n = 3;
  const bool sphere = background == BarrierBackground::unit_sphere;
  const CurvaturePoint base =
      model_curvature(sphere ? Model::round_sphere(1.0, n) : Model::flat(n));
  // orthonormal frame (radial, tangential, tangential)
  const double tangential = sphere ? p.dv * std::cos(r) / std::sin(r) : p.dv / r;
  const Vec grad{p.dv, 0.0, 0.0};
  const SymTensor hess = SymTensor::diagonal({p.d2v, tangential, tangential});
  return sym_eigen(conformal_einstein_power(base, p.v, grad, hess, n));
}

std::vector<double> log_grid(double r_min, double r_max, int count) {
  if (count < 2 || !(r_min > 0.0) || !(r_max > r_min)) {
    throw std::domain_error("log_grid: need count >= 2 and 0 < r_min < r_max");
  }
  std::vector<double> g(static_cast<std::size_t>(count));
  const double lo = std::log(r_min);
  const double step = (std::log(r_max) - lo) / (count - 1);
  for (int i = 0; i < count; ++i) {
    g[static_cast<std::size_t>(i)] = std::exp(lo + step * i);
  }
  g.back() = r_max;
  return g;
}

namespace {

double sorted_l1(std::array<double, 3> model, const Spectrum& full) {
  std::sort(model.begin(), model.end(), std::greater<>());
  double s = 0.0;
  for (int i = 0; i < 3; ++i) {
    s += std::abs(model[static_cast<std::size_t>(i)] - full[i]);
  }
  return s;
}

}  // namespace

BarrierScan barrier_scan(const BarrierParams& params, const std::vector<double>& grid) {
  params.validate();
  if (grid.empty()) {
    throw std::domain_error("barrier_scan: empty grid");
  }
  BarrierScan scan;
  scan.delta = params.delta;
  bool signs_hold = true;
  for (double r : grid) {
    if (!(r > 0.0 && r < 1.0)) {
      throw std::domain_error("barrier_scan: grid must lie in (0, 1)");
    }
    BarrierSample s;
    s.model = barrier_eigs(params, r);
    s.flat = barrier_full_spectrum(params, r, BarrierBackground::flat);
    s.sphere = barrier_full_spectrum(params, r, BarrierBackground::unit_sphere);
    s.flat_deviation = sorted_l1(s.model.triple, s.flat);
    s.sphere_deviation = sorted_l1(s.model.triple, s.sphere);
    const double scale = r * s.model.d1;
    scan.fitted_c = std::max(scan.fitted_c, s.sphere_deviation / scale);
    scan.flat_max_ratio = std::max(scan.flat_max_ratio, s.flat_deviation / scale);
    if (signs_hold && s.model.sigma1 < 0.0 && s.model.sigma2 < 0.0) {
      scan.r1 = r;
      scan.found = true;
    } else {
      signs_hold = false;
    }
    scan.samples.push_back(s);
  }
  return scan;
}

// ---------------------------------------------------------------------------

double hawking_bound(double alpha, double c0) {
  if (!(alpha >= 0.0) || !(c0 > 0.0) || c0 < alpha) {
    throw std::domain_error("hawking_bound: need c0 > 0 and c0 >= alpha >= 0");
  }
  if (alpha == 0.0) {
    return 1.0 / c0;
  }
  if (c0 == alpha) {
    return std::numeric_limits<double>::infinity();
  }
  const double x = c0 / alpha;
  // arccoth(x) = log((x+1)/(x-1))/2
  return 0.5 * std::log1p(2.0 / (x - 1.0)) / alpha;
}

}  // namespace sigmak
