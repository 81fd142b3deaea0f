#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "cli.hpp"

using namespace sigmak::cli;

int main(int argc, char** argv) {
  CLI::App app{"sigma_k curvature toolkit: property suites, exact-solution checks and solves"};
  app.set_help_flag("--help", "print help and exit");
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "key = value file mirroring the long options; flags win");

  RunConfig cfg;
  std::optional<double> tol;
  std::optional<double> tau;
  std::optional<double> constant;
  app.add_option("--seed", cfg.seed, "RNG seed")->capture_default_str();
  app.add_option("--out", cfg.out, "output directory")->capture_default_str();
  app.add_option("--model", cfg.model, "background for solve")
      ->check(CLI::IsMember({"sphere", "torus", "radial"}))
      ->capture_default_str();
  auto* n_opt = app.add_option("--n", cfg.n, "dimension")->capture_default_str();
  auto* k_opt = app.add_option("--k", cfg.k, "order of sigma_k")->capture_default_str();
  app.add_option("--h", cfg.h, "prescribed curvature: expression or @field-file (default C(n,k))");
  app.add_option("--nodes", cfg.nodes,
                 "grid nodes (solve: sphere 100, torus 16 per axis), bubble samples (100), "
                 "barrier scan points (200)");
  app.add_option("--tol", tol, "pass tolerance (solve 1e-10, bubble 1e-9)");
  app.add_flag("--auto-constants", cfg.auto_constants, "bubble: resolve the profile constant");
  app.add_option("--tau", tau, "bubble: Schouten parameter (default n-1)");
  app.add_option("--constant", constant, "bubble: profile constant when not auto-resolved");
  app.add_option("--delta", cfg.deltas, "barrier: comma separated list in (0, 1/4)")
      ->delimiter(',')
      ->capture_default_str();
  app.add_option("--r-max", cfg.r_max, "barrier: scan upper radius")->capture_default_str();
  app.add_flag("--corrupt-sigma", cfg.corrupt_sigma)->group("");

  auto* verify = app.add_subcommand("verify", "symmetric-function, gradient and convention suites");
  auto* bubble = app.add_subcommand("bubble", "Liouville bubble reproduction");
  auto* barrier = app.add_subcommand("barrier", "barrier eigenvalue scan");
  auto* solve = app.add_subcommand("solve", "continuation solve of the prescribed sigma_k equation");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::Error& e) {
    app.exit(e);
    return kUsage;
  }
  cfg.tol = tol;
  cfg.tau = tau;
  cfg.constant = constant;
  cfg.n_given = n_opt->count() > 0;
  cfg.k_given = k_opt->count() > 0;

  try {
    Report rep;
    if (verify->parsed()) {
      cfg.command = "verify";
      rep = cmd_verify(cfg);
    } else if (bubble->parsed()) {
      cfg.command = "bubble";
      rep = cmd_bubble(cfg);
    } else if (barrier->parsed()) {
      cfg.command = "barrier";
      rep = cmd_barrier(cfg);
    } else if (solve->parsed()) {
      cfg.command = "solve";
      rep = cmd_solve(cfg);
    }
    const std::string text = rep.document(cfg.command).dump(2) + "\n";
    const auto path = std::filesystem::path(cfg.out) / "report.json";
    std::ofstream(path) << text;
    std::cout << text;
    return rep.exit_code();
  } catch (const UsageError& e) {
    std::cerr << "sigmak: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "sigmak: " << e.what() << "\n";
    return kSolverFailure;
  }
}
