#include "sigmak/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>
#include <ostream>

#include "sigmak/krylov.hpp"
#include "sigmak/symfun.hpp"

namespace sigmak {

// ---------------------------------------------------------------------------
// Problem

DeformationProblem DeformationProblem::make(const Model& model, ScalarField h, int k) {
  if (model.n != 3) {
    throw std::domain_error("deformation problem: only n = 3 is supported");
  }
  if (k < 1 || k > 3) {
    throw std::domain_error("deformation problem: k must satisfy 1 <= k <= 3");
  }
  const Grid& g = h.grid();
  const auto* radial = std::get_if<RadialGrid>(&g);
  switch (model.kind) {
    case ModelKind::round_sphere:
      if (radial == nullptr || radial->kind != RadialKind::sphere_polar || model.radius != 1.0) {
        throw std::invalid_argument("round sphere model needs the unit sphere_polar grid");
      }
      break;
    case ModelKind::torus:
      if (!std::holds_alternative<TorusGrid>(g)) {
        throw std::invalid_argument("torus model needs a torus grid");
      }
      break;
    case ModelKind::flat:
      throw std::invalid_argument("flat model has no closed discretization; use the torus");
  }
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (!(h[i] > 0.0)) {
      throw std::domain_error("prescribed h must be positive (node " + std::to_string(i) + ")");
    }
  }
  DeformationProblem p{model, std::move(h), 3, k, sigmak::lambda_k(3, k), 1e-10};
  return p;
}

std::pair<double, double> phi(double t) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw std::domain_error("phi: t must lie in [0, 1]");
  }
  if (t >= 0.5) {
    return {1.0, 0.0};
  }
  const double s = 2.0 * t;
  return {3.0 * s * s - 2.0 * s * s * s, 2.0 * (6.0 * s - 6.0 * s * s)};
}

SymTensor deformation_tensor(const DeformationProblem& prob, const ConformalJet& jet, double t) {
  const int n = prob.n;
  const double f = phi(t).first;
  const CurvaturePoint base = prob.curvature();
  SymTensor w = (-f) * base.einstein - jet.hess_u - SymTensor::outer(jet.grad_u);
  const double diag =
      prob.lambda_k * (1.0 - f) + jet.lap_u + 0.5 * (3 - n) * jet.grad_u.norm_sq();
  for (int i = 0; i < n; ++i) {
    w(i, i) += diag;
  }
  return w;
}

double normalized_integral(const DeformationProblem& prob, std::span<const double> u) {
  const double vol = grid_volume(prob.grid());
  return integrate_exp(prob.grid(), u, prob.n) / std::pow(vol, 2.0 / (prob.n + 1));
}

namespace {

double min_margin(const SigmaJet& sj, int k) {
  double m = std::numeric_limits<double>::infinity();
  for (int j = 1; j <= k; ++j) {
    m = std::min(m, sj.sigma[static_cast<std::size_t>(j)]);
  }
  return m;
}

void check_finite(std::span<const double> u) {
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (!std::isfinite(u[i])) {
      throw std::domain_error("non-finite value at node " + std::to_string(i));
    }
  }
}

}  // namespace

ResidualField deformation_residual(const DeformationProblem& prob, std::span<const double> u,
                                   double t) {
  check_finite(u);
  const std::size_t count = node_count(prob.grid());
  if (u.size() != count) {
    throw std::invalid_argument("deformation_residual: field length mismatch");
  }
  const double f = phi(t).first;
  const double nonlocal = (1.0 - t) * normalized_integral(prob, u);
  const int k = prob.k;

  ResidualField out;
  out.values.resize(count);
  out.cone_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < count; ++i) {
    const ConformalJet jet = jet_at(prob.grid(), u, i);
    const SigmaJet sj = sigma_jet(deformation_tensor(prob, jet, t), k);
    const double margin = min_margin(sj, k);
    if (margin < out.cone_margin) {
      out.cone_margin = margin;
      out.worst_node = i;
    }
    if (margin > prob.cone_threshold) {
      out.values[i] = std::pow(sj.sigma[static_cast<std::size_t>(k)], 1.0 / k) -
                      f * std::pow(prob.h[i], 1.0 / k) * std::exp(-2.0 * u[i]) - nonlocal;
    } else {
      out.values[i] = -(prob.cone_threshold - margin) - 1.0;
      out.admissible = false;
    }
  }
  return out;
}

ResidualField deformation_residual(const DeformationProblem& prob, const ScalarField& u,
                                   double t) {
  return deformation_residual(prob, u.values(), t);
}

// ---------------------------------------------------------------------------
// Jacobian

DeformationJacobian::DeformationJacobian(const DeformationProblem& prob,
                                         std::span<const double> u, double t)
    : prob_(&prob) {
  check_finite(u);
  const std::size_t count = node_count(prob.grid());
  if (u.size() != count) {
    throw std::invalid_argument("jacobian: field length mismatch");
  }
  const int n = prob.n;
  const int k = prob.k;
  const double f = phi(t).first;
  coeffs_.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    const ConformalJet jet = jet_at(prob.grid(), u, i);
    const SigmaJet sj = sigma_jet(deformation_tensor(prob, jet, t), k);
    if (!(min_margin(sj, k) > prob.cone_threshold)) {
      throw std::domain_error("jacobian undefined: node " + std::to_string(i) +
                              " is outside Gamma_k^+");
    }
    const double sk = sj.sigma[static_cast<std::size_t>(k)];
    // d sigma_k^{1/k} = (1/k) sigma_k^{1/k - 1} <T_{k-1}, dW>
    const SymTensor c = ((1.0 / k) * std::pow(sk, 1.0 / k - 1.0)) * sj.gradient;
    const double trc = c.trace();
    NodeCoeffs& nc = coeffs_[i];
    nc.second = trc * SymTensor::identity(n) - c;
    nc.first = Vec(n);
    for (int a = 0; a < n; ++a) {
      double cu = 0.0;
      for (int b = 0; b < n; ++b) {
        cu += c(a, b) * jet.grad_u[b];
      }
      nc.first[a] = -2.0 * cu + (3 - n) * trc * jet.grad_u[a];
    }
    nc.zeroth = 2.0 * f * std::pow(prob.h[i], 1.0 / k) * std::exp(-2.0 * u[i]);
  }

  // -(1-t) (S/V)^p with p = 2/(n+1); derivative 2 (1-t) (S/V)^{p-1} w_i e^{-(n+1)u_i} / V
  const auto w = quadrature_weights(prob.grid());
  const double vol = grid_volume(prob.grid());
  const double p = 2.0 / (n + 1);
  double s = 0.0;
  nonlocal_.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    nonlocal_[i] = w[i] * std::exp(-(n + 1) * u[i]) / vol;
    s += nonlocal_[i];
  }
  const double scale = 2.0 * (1.0 - t) * std::pow(s, p - 1.0);
  for (double& q : nonlocal_) {
    q *= scale;
  }

  diagonal_.resize(count);
  std::vector<double> e(count, 0.0);
  for (std::size_t i = 0; i < count; ++i) {
    e[i] = 1.0;
    diagonal_[i] = local(jet_at(prob.grid(), e, i), i) + nonlocal_[i];
    e[i] = 0.0;
  }
}

double DeformationJacobian::local(const ConformalJet& jet_v, std::size_t node) const {
  const NodeCoeffs& nc = coeffs_[node];
  return nc.second.contract(jet_v.hess_u) + nc.first.dot(jet_v.grad_u) + nc.zeroth * jet_v.u;
}

void DeformationJacobian::apply(std::span<const double> v, std::span<double> out) const {
  const std::size_t count = coeffs_.size();
  if (v.size() != count || out.size() != count) {
    throw std::invalid_argument("jacobian apply: length mismatch");
  }
  double rank_one = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    rank_one += nonlocal_[i] * v[i];
  }
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = local(jet_at(prob_->grid(), v, i), i) + rank_one;
  }
}

std::vector<double> DeformationJacobian::apply(std::span<const double> v) const {
  std::vector<double> out(v.size());
  apply(v, out);
  return out;
}

ScalarField jacobian_action(const DeformationProblem& prob, const ScalarField& u, double t,
                            const ScalarField& v) {
  const DeformationJacobian jac(prob, u.values(), t);
  return {prob.grid(), jac.apply(v.values())};
}

// ---------------------------------------------------------------------------
// Newton corrector

namespace {

double sup_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) {
    m = std::max(m, std::abs(x));
  }
  return m;
}

}  // namespace

ContinuationState make_state(const DeformationProblem& prob, ScalarField u, double t) {
  const ResidualField r = deformation_residual(prob, u, t);
  ContinuationState s;
  s.t = t;
  s.residual_sup = sup_abs(r.values);
  s.cone_margin = r.cone_margin;
  s.admissible = r.admissible;
  s.apriori_ratio = field_norms(u).apriori_ratio;
  s.u = std::move(u);
  return s;
}

std::string to_string(NewtonStatus status) {
  switch (status) {
    case NewtonStatus::converged:
      return "converged";
    case NewtonStatus::line_search_stall:
      return "line_search_stall";
    case NewtonStatus::max_iterations:
      return "max_iterations";
    case NewtonStatus::cone_exit:
      return "cone_exit";
  }
  return "unknown";
}

NewtonResult newton_correct(const DeformationProblem& prob, const ContinuationState& start,
                            const SolverConfig& config) {
  NewtonResult res;
  res.state = start;
  if (!start.admissible) {
    res.status = NewtonStatus::cone_exit;
    return res;
  }
  const double t = start.t;
  const GmresOptions gopts{config.gmres_restart, config.gmres_max_iter, config.linear_rel_tol};
  const std::size_t count = start.u.size();
  // Nonmonotone reference: the conformal directions make the Jacobian nearly
  // singular on round backgrounds and full steps often overshoot once.
  std::deque<double> recent{res.state.residual_sup};

  while (true) {
    if (res.state.residual_sup <= config.newton_tol) {
      res.status = NewtonStatus::converged;
      return res;
    }
    if (res.iterations >= config.newton_max_iter) {
      res.status = NewtonStatus::max_iterations;
      return res;
    }
    const auto u = res.state.u.values();
    const ResidualField f = deformation_residual(prob, u, t);
    const DeformationJacobian jac(prob, u, t);
    std::vector<double> rhs(count);
    for (std::size_t i = 0; i < count; ++i) {
      rhs[i] = -f.values[i];
    }
    std::vector<double> step(count, 0.0);
    const GmresResult lin = gmres(
        [&](std::span<const double> x, std::span<double> y) { jac.apply(x, y); }, jac.diagonal(),
        rhs, step, gopts);
    res.linear_iterations += lin.iterations;

    double alpha = 1.0;
    bool accepted = false;
    bool last_inadmissible = false;
    std::vector<double> trial(count);
    for (int halving = 0; halving <= config.max_halvings; ++halving, alpha *= 0.5) {
      for (std::size_t i = 0; i < count; ++i) {
        trial[i] = u[i] + alpha * step[i];
      }
      ResidualField r;
      try {
        r = deformation_residual(prob, trial, t);
      } catch (const std::exception&) {
        last_inadmissible = false;
        continue;
      }
      last_inadmissible = !r.admissible;
      const double reference = *std::max_element(recent.begin(), recent.end());
      if (r.admissible && sup_abs(r.values) < (1.0 - 1e-4 * alpha) * reference) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      res.status = last_inadmissible ? NewtonStatus::cone_exit : NewtonStatus::line_search_stall;
      return res;
    }
    res.state = make_state(prob, ScalarField(prob.grid(), trial), t);
    ++res.iterations;
    recent.push_back(res.state.residual_sup);
    if (static_cast<int>(recent.size()) > std::max(1, config.nonmonotone_window)) {
      recent.pop_front();
    }
  }
}

// ---------------------------------------------------------------------------
// Path following

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::converged:
      return "converged";
    case SolveStatus::min_step:
      return "min_step";
    case SolveStatus::start_failed:
      return "start_failed";
  }
  return "unknown";
}

double independent_residual(const DeformationProblem& prob, const ScalarField& u) {
  const CurvaturePoint base = prob.curvature();
  double worst = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const ConformalJet jet = jet_at(u, i);
    worst = std::max(worst,
                     std::abs(equation_residual_point(base, jet, prob.n, prob.k, prob.h[i])));
  }
  return worst;
}

namespace {

PathRecord record_of(const NewtonResult& nr) {
  return {nr.state.t,         nr.state.residual_sup, nr.state.cone_margin,
          nr.state.apriori_ratio, nr.iterations,     nr.linear_iterations};
}

}  // namespace

ContinuationResult continuation_solve(const DeformationProblem& prob, const SolverConfig& config) {
  return continuation_solve(prob, config, ScalarField::constant(prob.grid(), 0.0));
}

ContinuationResult continuation_solve(const DeformationProblem& prob, const SolverConfig& config,
                                      const ScalarField& u0) {
  DeformationProblem local = prob;
  local.cone_threshold = config.cone_threshold;

  ContinuationResult out;
  const CurvaturePoint base = local.curvature();
  const ConeReport bg = cone_membership(gen_eigen(base.g, -base.einstein), local.k);
  out.background_admissible = bg.member;
  out.background_margin = bg.margin;
  if (!bg.member) {
    out.warnings.push_back("background not negative k-admissible: min sigma_j(lambda(-E)) = " +
                           std::to_string(bg.margin) + "; attempting the homotopy anyway");
  }

  NewtonResult nr = newton_correct(local, make_state(local, u0, 0.0), config);
  out.last_newton = nr.status;
  out.final_state = nr.state;
  if (nr.status != NewtonStatus::converged) {
    out.status = SolveStatus::start_failed;
    return out;
  }
  out.path.push_back(record_of(nr));

  ContinuationState current = nr.state;
  double dt = config.dt_initial;
  int easy = 0;
  while (current.t < 1.0) {
    const double t_try = std::min(1.0, current.t + dt);
    bool ok = false;
    try {
      nr = newton_correct(local, make_state(local, current.u, t_try), config);
      ok = nr.status == NewtonStatus::converged;
    } catch (const std::exception& e) {
      out.warnings.push_back("step to t = " + std::to_string(t_try) + " failed: " + e.what());
      nr.status = NewtonStatus::line_search_stall;
    }
    out.last_newton = nr.status;
    if (ok) {
      current = nr.state;
      out.path.push_back(record_of(nr));
      if (nr.iterations <= config.easy_newton_iters) {
        if (++easy >= config.easy_successes) {
          dt = std::min(dt * config.dt_growth, config.dt_max);
          easy = 0;
        }
      } else {
        easy = 0;
      }
    } else {
      easy = 0;
      dt *= 0.5;
      if (dt < config.dt_min) {
        out.status = SolveStatus::min_step;
        out.final_state = current;
        return out;
      }
    }
  }
  out.status = SolveStatus::converged;
  out.final_state = current;
  out.independent_residual = independent_residual(local, current.u);
  return out;
}

void write_path_csv(std::ostream& out, const std::vector<PathRecord>& path) {
  out << "t,residual_sup,cone_margin,apriori_ratio,newton_iters,linear_iters\n";
  char buf[256];
  for (const PathRecord& r : path) {
    std::snprintf(buf, sizeof buf, "%.12g,%.6e,%.6e,%.6e,%d,%d\n", r.t, r.residual_sup,
                  r.cone_margin, r.apriori_ratio, r.newton_iters, r.linear_iters);
    out << buf;
  }
}

}  // namespace sigmak
