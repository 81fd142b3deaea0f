#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "cli.hpp"
#include "sigmak/continuation.hpp"
#include "sigmak/exactsol.hpp"
#include "sigmak/expr.hpp"
#include "sigmak/symfun.hpp"

namespace sigmak::cli {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

std::string fmt(const char* pattern, double value) {
  char buf[128];
  std::snprintf(buf, sizeof buf, pattern, value);
  return buf;
}

Json record_json(const CheckRecord& r) {
  Json j;
  j["name"] = r.name;
  j["status"] = r.passed ? "pass" : "fail";
  j["measured"] = r.measured;
  j["relation"] = r.relation;
  j["tolerance"] = r.tolerance;
  if (!r.detail.empty()) {
    j["detail"] = r.detail;
  }
  return j;
}

CheckRecord at_most(std::string name, double measured, double tolerance) {
  return {std::move(name), measured <= tolerance, measured, tolerance, {}, "<="};
}

CheckRecord above(std::string name, double measured, double bound) {
  return {std::move(name), measured > bound, measured, bound, {}, ">"};
}

fs::path prepare_out(const RunConfig& cfg) {
  const fs::path dir(cfg.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw UsageError("cannot create output directory " + cfg.out + ": " + ec.message());
  }
  return dir;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw UsageError("cannot write " + path.string());
  }
  return out;
}

// Shortest text that reads back to the same double.
std::string num(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

Json base_config(const RunConfig& cfg) {
  Json j;
  j["seed"] = cfg.seed;
  j["out"] = cfg.out;
  return j;
}

}  // namespace

bool Report::all_passed() const {
  for (const auto& r : records) {
    if (!r.passed) {
      return false;
    }
  }
  return true;
}

int Report::exit_code() const {
  if (solver_failed) {
    return kSolverFailure;
  }
  return all_passed() ? kPass : kCheckFailure;
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 14695981039346656037ull;
  for (const unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

Json Report::document(const std::string& command) const {
  Json doc;
  doc["command"] = command;
  doc["config"] = config;
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(fnv1a(config.dump())));
  doc["config_hash"] = hash;
  doc["status"] = solver_failed ? "solver_failure" : all_passed() ? "pass" : "fail";
  Json recs = Json::array();
  for (const auto& r : records) {
    recs.push_back(record_json(r));
  }
  doc["records"] = recs;
  doc["diagnostics"] = diagnostics;
  doc["artifacts"] = artifacts;
  return doc;
}

// ---------------------------------------------------------------------------

Report cmd_verify(const RunConfig& cfg) {
  SuiteOptions opts;
  opts.seed = cfg.seed;
  if (cfg.n_given) {
    if (cfg.n < 3 || cfg.n > kMaxDim) {
      throw UsageError("verify: n must lie in 3..6");
    }
    opts.n = cfg.n;
  }
  if (cfg.k_given) {
    const int n_max = cfg.n_given ? cfg.n : kMaxDim;
    if (cfg.k < 1 || cfg.k > n_max) {
      throw UsageError("verify: k must lie in 1..n");
    }
    opts.k = cfg.k;
  }
  opts.corrupt_sigma = cfg.corrupt_sigma;

  Report rep;
  rep.config = base_config(cfg);
  rep.config["n"] = opts.n == 0 ? Json("all") : Json(opts.n);
  rep.config["k"] = opts.k == 0 ? Json("all") : Json(opts.k);
  if (cfg.corrupt_sigma) {
    rep.config["corrupt_sigma"] = true;
  }
  rep.records = verify_all(opts);
  rep.diagnostics["identity_samples"] = opts.identity_samples;
  rep.diagnostics["gradient_samples"] = opts.gradient_samples;
  rep.diagnostics["ricci_samples"] = opts.ricci_samples;
  rep.diagnostics["convention_samples"] = opts.convention_samples;
  rep.diagnostics["perturbation_samples"] = opts.perturbation_samples;
  prepare_out(cfg);
  return rep;
}

// ---------------------------------------------------------------------------

Report cmd_bubble(const RunConfig& cfg) {
  if (cfg.n < 3 || cfg.n > kMaxDim || cfg.k < 1 || cfg.k > cfg.n) {
    throw UsageError("bubble: need 3 <= n <= 6 and 1 <= k <= n");
  }
  if (!cfg.auto_constants && !cfg.constant) {
    throw UsageError("bubble: pass --constant C or --auto-constants");
  }
  const double tau = cfg.tau.value_or(cfg.n - 1.0);
  const double tol = cfg.tol.value_or(1e-9);
  const int samples = cfg.nodes > 0 ? cfg.nodes : 100;

  Report rep;
  rep.config = base_config(cfg);
  rep.config["n"] = cfg.n;
  rep.config["k"] = cfg.k;
  rep.config["tau"] = tau;
  rep.config["tol"] = tol;
  rep.config["samples"] = samples;
  rep.config["auto_constants"] = cfg.auto_constants;
  if (cfg.constant) {
    rep.config["constant"] = *cfg.constant;
  }

  double constant = cfg.constant.value_or(0.0);
  if (cfg.auto_constants) {
    ConstantResolution res;
    try {
      res = resolve_bubble_constant(cfg.n, cfg.k, tau, 1.0, samples, cfg.seed, tol);
    } catch (const std::exception& e) {
      res.note = e.what();
    }
    rep.diagnostics["resolved"] = res.resolved;
    rep.diagnostics["constant"] = res.constant;
    rep.diagnostics["sign"] = res.constant > 0 ? "+" : res.constant < 0 ? "-" : "0";
    rep.diagnostics["source"] = res.source;
    rep.diagnostics["theorem_candidate"] = theorem_bubble_constant(cfg.n, tau);
    rep.diagnostics["theorem_residual"] = res.theorem_residual;
    rep.diagnostics["lemma_candidate"] = lemma_bubble_constant(cfg.n, tau);
    rep.diagnostics["lemma_residual"] = res.lemma_residual;
    rep.diagnostics["note"] = res.note;
    rep.records.push_back({"bubble constant resolved", res.resolved, res.resolved ? 1.0 : 0.0,
                           1.0, res.note, "=="});
    if (!res.resolved) {
      return rep;
    }
    constant = res.constant;
  }

  const BubbleParams p = BubbleParams::normalized(cfg.n, cfg.k, tau, 1.0, constant);
  const auto xs = liouville_samples(p, samples, cfg.seed);
  const fs::path dir = prepare_out(cfg);
  const fs::path csv = dir / "bubble.csv";
  std::ofstream out = open_out(csv);
  out << "radius,sigma_k,target,residual,cone_margin\n";
  double worst = 0.0;
  int outside = 0;
  for (const Vec& x : xs) {
    const Spectrum s = bubble_spectrum(p, x);
    const double sk = sigma_k(s, cfg.k);
    const double margin = cone_margin(s, cfg.k);
    worst = std::max(worst, std::abs(sk - p.target()));
    outside += margin > 0.0 ? 0 : 1;
    out << num(std::sqrt(x.norm_sq())) << ',' << num(sk) << ',' << num(p.target()) << ','
        << num(sk - p.target()) << ',' << num(margin) << '\n';
  }
  rep.artifacts.push_back(csv.string());
  rep.records.push_back(at_most("Liouville residual |sigma_k(-lambda(A)) - target|", worst, tol));
  rep.records.push_back({"-A^tau in Gamma_k^+ at every sample", outside == 0,
                         static_cast<double>(outside), 0.0, "count of samples outside", "<="});
  rep.diagnostics["target"] = p.target();
  rep.diagnostics["profile_constant"] = constant;
  return rep;
}

// ---------------------------------------------------------------------------

Report cmd_barrier(const RunConfig& cfg) {
  if (cfg.deltas.empty()) {
    throw UsageError("barrier: empty delta list");
  }
  const int count = cfg.nodes > 0 ? cfg.nodes : 200;
  const double r_min = 1e-4;
  for (double d : cfg.deltas) {
    try {
      BarrierParams{d, r_min, cfg.r_max}.validate();
    } catch (const std::domain_error& e) {
      throw UsageError(std::string(e.what()) + " (got delta = " + fmt("%g", d) + ")");
    }
  }
  if (!(cfg.r_max < 1.0) || count < 10) {
    throw UsageError("barrier: need r_max < 1 and at least 10 scan points");
  }

  Report rep;
  rep.config = base_config(cfg);
  rep.config["delta"] = cfg.deltas;
  rep.config["r_min"] = r_min;
  rep.config["r_max"] = cfg.r_max;
  rep.config["points"] = count;

  const fs::path dir = prepare_out(cfg);
  const fs::path csv = dir / "barrier.csv";
  std::ofstream out = open_out(csv);
  out << "delta,r,d1,d2,sigma1,sigma2,lambda1,lambda2,lambda3\n";

  const auto coarse_grid = log_grid(r_min, cfg.r_max, count);
  const auto fine_grid = log_grid(r_min, cfg.r_max, 4 * count);
  std::vector<BarrierScan> fine_scans;
  double fitted_c = 0.0;
  Json per_delta = Json::array();
  for (double d : cfg.deltas) {
    const BarrierParams params{d, r_min, cfg.r_max};
    const BarrierScan s = barrier_scan(params, coarse_grid);
    const BarrierScan f = barrier_scan(params, fine_grid);
    fitted_c = std::max(fitted_c, s.fitted_c);
    bool signs = s.found && s.r1 > 0.0;
    for (const auto& smp : s.samples) {
      const auto& m = smp.model;
      if (m.r <= s.r1 && !(m.sigma1 < 0.0 && m.sigma2 < 0.0)) {
        signs = false;
      }
      out << num(d) << ',' << num(m.r) << ',' << num(m.d1) << ',' << num(m.d2) << ','
          << num(m.sigma1) << ',' << num(m.sigma2) << ',' << num(smp.sphere[0]) << ','
          << num(smp.sphere[1]) << ',' << num(smp.sphere[2]) << '\n';
    }
    const std::string tag = "delta = " + fmt("%g", d);
    rep.records.push_back(
        {tag + ": sigma1 < 0 and sigma2 < 0 on (0, r1]", signs, s.r1, 0.0, "measured is r1", ">"});
    const double shift = s.r1 > 0.0 ? std::abs(f.r1 - s.r1) / s.r1 : INFINITY;
    rep.records.push_back(at_most(tag + ": relative change of r1 under x4 refinement", shift, 0.05));
    Json j;
    j["delta"] = d;
    j["exponent"] = params.exponent();
    j["r1"] = s.r1;
    j["r1_refined"] = f.r1;
    j["fitted_c"] = s.fitted_c;
    j["flat_max_ratio"] = s.flat_max_ratio;
    per_delta.push_back(j);
    fine_scans.push_back(f);
  }
  double fine_ratio = 0.0;
  for (const auto& f : fine_scans) {
    for (const auto& smp : f.samples) {
      fine_ratio = std::max(fine_ratio, smp.sphere_deviation / (smp.model.r * smp.model.d1));
    }
  }
  CheckRecord fit = at_most("full eigenvalues within C r D1 of (D1-D2, D1, D1), one C for all delta",
                            fine_ratio, 1.01 * fitted_c);
  fit.detail = "C = " + fmt("%.6g", fitted_c) + " fitted on the scan grid, checked on the x4 grid";
  rep.records.push_back(fit);
  rep.diagnostics["fitted_c"] = fitted_c;
  rep.diagnostics["background"] = "unit S^3; the flat background reproduces the model exactly";
  rep.diagnostics["scans"] = per_delta;
  rep.artifacts.push_back(csv.string());
  return rep;
}

// ---------------------------------------------------------------------------

Report cmd_solve(const RunConfig& cfg) {
  if (cfg.model == "radial") {
    throw UsageError("solve: needs a closed model (sphere or torus)");
  }
  if (cfg.n != 3) {
    throw UsageError("solve: only n = 3 is supported");
  }
  if (cfg.k != 2 && cfg.k != 3) {
    throw UsageError("solve: k must be 2 or 3");
  }
  const bool torus = cfg.model == "torus";
  const int nodes = cfg.nodes > 0 ? cfg.nodes : (torus ? 16 : 100);
  const Grid grid = torus ? Grid(TorusGrid{nodes, 1.0}) : Grid(RadialGrid::sphere(nodes));
  const std::string h_spec = cfg.h.empty() ? fmt("%g", binomial(3, cfg.k)) : cfg.h;

  SolverConfig scfg;
  scfg.newton_tol = cfg.tol.value_or(scfg.newton_tol);

  DeformationProblem prob;
  try {
    std::visit([](const auto& g) { g.validate(); }, grid);
    prob = DeformationProblem::make(torus ? Model::torus() : Model::round_sphere(),
                                    field_from_spec(h_spec, grid), cfg.k);
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception& e) {
    throw UsageError(std::string("solve: ") + e.what());
  }

  Report rep;
  rep.config = base_config(cfg);
  rep.config["model"] = cfg.model;
  rep.config["n"] = cfg.n;
  rep.config["k"] = cfg.k;
  rep.config["h"] = h_spec;
  rep.config["nodes"] = nodes;
  rep.config["tol"] = scfg.newton_tol;

  const ContinuationResult res = continuation_solve(prob, scfg);
  const ContinuationState& fin = res.final_state;
  const bool reached = res.status == SolveStatus::converged;
  rep.solver_failed = !reached;

  const fs::path dir = prepare_out(cfg);
  const fs::path field_path = dir / "solution.field";
  const fs::path path_csv = dir / "path.csv";
  save_field(field_path.string(), fin.u);
  {
    std::ofstream out = open_out(path_csv);
    write_path_csv(out, res.path);
  }
  rep.artifacts = {field_path.string(), path_csv.string()};

  rep.records.push_back({"continuation reaches t = 1", reached, fin.t, 1.0,
                         to_string(res.status), ">="});
  rep.records.push_back(at_most("final residual sup|F|", fin.residual_sup, scfg.newton_tol));
  rep.records.push_back(above("final cone margin", fin.cone_margin, scfg.cone_threshold));
  if (reached) {
    rep.records.push_back(at_most("independent residual sup|sigma_k(lambda(-E)) - h|",
                                  res.independent_residual, 1e-7));
  }

  const FieldNorms norms = field_norms(fin.u);
  auto& d = rep.diagnostics;
  if (!reached) {
    d["diagnosis"] = res.background_admissible
                         ? "path failure at t = " + fmt("%.6g", fin.t) + " (" +
                               to_string(res.last_newton) + ")"
                         : "background not negative k-admissible; path failure at t = " +
                               fmt("%.6g", fin.t) + " (" + to_string(res.last_newton) + ")";
  }
  d["final_t"] = fin.t;
  d["background_admissible"] = res.background_admissible;
  d["background_margin"] = res.background_margin;
  d["last_newton"] = to_string(res.last_newton);
  d["path_steps"] = res.path.size();
  d["sup_abs_u"] = norms.sup_abs;
  d["sup_grad_sq"] = norms.sup_grad_sq;
  d["sup_hess"] = norms.sup_hess;
  d["inf_u"] = norms.inf_u;
  d["sup_u"] = norms.sup_u;
  d["harnack_ratio"] = norms.sup_u - norms.inf_u;
  d["apriori_ratio"] = fin.apriori_ratio;
  d["warnings"] = res.warnings;
  return rep;
}

}  // namespace sigmak::cli
