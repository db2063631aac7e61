#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "dislo/config.hpp"
#include "dislo/diagnostics.hpp"
#include "dislo/scheme.hpp"

namespace dislo {

struct RunOptions {
  /// Keep every accepted state (needed for Q1 reconstruction across the run).
  bool keep_all_states = false;
  /// Abort on the first bound violation; defaults to true only for strict_paper.
  bool abort_on_violation = false;
  bool abort_on_violation_set = false;
  /// Extra per-step observer, called after the bound monitor.
  StepHook observer;
};

struct RunResult {
  RunConfig config;
  SmoothedKernel kernel;
  State initial;
  State final_state;
  /// Initial state, every every_k_steps-th state, and the final state.
  std::vector<State> snapshots;
  std::vector<State> all_states;
  std::vector<DiagnosticsRecord> records;
  std::map<std::string, std::size_t> violations;
  MonitorExtremes extremes;
  std::vector<double> dt_sequence;

  double dx = 0.0;
  std::size_t steps = 0;
  double L_P = 0.0;
  double kernel_l1 = 0.0;
  double tail_integral = 0.0;
  double tv0 = 0.0;
  double sup0 = 0.0;
  double zeta0 = 0.0;
  double zeta_run = 0.0;
  CflBounds cfl{0.0, 0.0};
  bool strict_cfl_satisfied = false;
  double wall_seconds = 0.0;
  std::vector<std::string> warnings;

  Grid grid() const { return Grid(config.P, config.N); }
  std::size_t total_violations() const;
  /// max_i |u_i + L^P x_i| of the final state.
  double final_sup_v() const;
};

/// Projects the profile, builds the kernel and advances to T under the bound
/// monitor. Throws ConfigError for invalid input (including a failed
/// strict_paper CFL check), NumericalError on solver failure, and
/// BoundViolation when aborting on a violated bound.
RunResult run_simulation(const RunConfig& config, const RunOptions& options = {});

/// v_i = u_i + L^P x_i.
std::vector<double> physical_profile(const State& s, const Grid& grid);

nlohmann::json run_manifest(const RunResult& r);

/// Snapshot CSVs (i, x_i, u_i, u_i + L^P x_i, theta_{i+1/2} + L^P) and run.json.
/// Keys of extra are merged into the manifest.
void write_run_outputs(const RunResult& r, const std::filesystem::path& dir,
                       const nlohmann::json& extra = nlohmann::json::object());

/// Per-step CSV: n, t, tv, entropy, sup_norm, min_grad, fp_iters, contraction.
void write_entropy_csv(const RunResult& r, const std::filesystem::path& path);

}  // namespace dislo
