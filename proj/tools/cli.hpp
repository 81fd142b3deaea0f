#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "sigmak/suites.hpp"

namespace sigmak::cli {

/// Exit status contract.
enum Exit : int { kPass = 0, kCheckFailure = 1, kUsage = 2, kSolverFailure = 3 };

/// Thrown for configurations the command cannot run (exit 2).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  std::uint64_t seed = 1;
  std::string out = "sigmak-out";
  std::string model = "sphere";
  int n = 3;
  int k = 2;
  std::string h;  ///< empty: the constant C(n, k), which the round metric solves
  int nodes = 0;  ///< 0: per-command default
  std::optional<double> tol;
  bool auto_constants = false;
  std::optional<double> tau;
  std::optional<double> constant;
  std::vector<double> deltas{0.05, 0.1, 0.2};
  double r_max = 0.5;
  bool corrupt_sigma = false;
  bool n_given = false;
  bool k_given = false;
};

struct Report {
  nlohmann::ordered_json config;
  std::vector<CheckRecord> records;
  nlohmann::ordered_json diagnostics = nlohmann::ordered_json::object();
  std::vector<std::string> artifacts;
  bool solver_failed = false;

  [[nodiscard]] bool all_passed() const;
  [[nodiscard]] int exit_code() const;
  /// Deterministic document: no timestamps, insertion-ordered keys.
  [[nodiscard]] nlohmann::ordered_json document(const std::string& command) const;
};

/// 64-bit FNV-1a.
[[nodiscard]] std::uint64_t fnv1a(const std::string& text);

Report cmd_verify(const RunConfig& cfg);
Report cmd_bubble(const RunConfig& cfg);
Report cmd_barrier(const RunConfig& cfg);
Report cmd_solve(const RunConfig& cfg);

}  // namespace sigmak::cli
