#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "dislo/config.hpp"
#include "dislo/grid.hpp"

namespace dislo {

struct SweepAxis {
  /// Dotted config key, e.g. "domain.P".
  std::string key;
  std::vector<double> values;
};

struct ReferencePoint {
  double parameter;
  double expected;
  /// Relative tolerance.
  double tolerance;
};

struct ExperimentPlan {
  std::string name;
  RunConfig base;
  std::vector<SweepAxis> sweep;
  /// Empty: nothing is written.
  std::filesystem::path output_dir;
  std::vector<ReferencePoint> reference;
};

/// Canned plans: "table2", "figures12", "sigma-compare", "refinement".
ExperimentPlan default_plan(const std::string& name);

struct Table2Row {
  double P = 0.0;
  std::size_t N = 0;
  double sup_v = 0.0;
  double min_v = 0.0;
  double max_v = 0.0;
  double expected = 0.0;
  double rel_error = 0.0;
  bool has_reference = false;
  bool pass = false;
  std::size_t violations = 0;
  double wall_seconds = 0.0;
};

struct Table2Result {
  std::vector<Table2Row> rows;
  bool pass = false;
  nlohmann::json summary;
};

/// Sweeps domain.P at the base dx (N = P/dx), recording max_i |u_i + L^P x_i| at T.
Table2Result run_table2(const ExperimentPlan& plan);

struct Figures12Result {
  std::vector<State> snapshots;
  /// (t, TV of u + L^P x on [-P, P)) at t = 0 and after every step.
  std::vector<std::pair<double, double>> tv_series;
  double tv_initial = 0.0;
  double tv_final = 0.0;
  double min_density = 0.0;
  bool initial_matches_projection = false;
  bool pass = false;
  nlohmann::json summary;
};

Figures12Result run_figures12(const ExperimentPlan& plan);

struct SigmaCompareLevel {
  std::size_t N = 0;
  double dx = 0.0;
  double gap = 0.0;
  double scale = 0.0;
  double wall_cesaro = 0.0;
  double wall_cell_average = 0.0;
};

struct SigmaCompareResult {
  std::vector<SigmaCompareLevel> levels;
  bool within_bound = false;
  bool gap_decreases = false;
  bool pass = false;
  nlohmann::json summary;
};

/// Runs the base config in both sigma modes for each "domain.N" sweep value
/// (default N and 2N, dt fixed).
SigmaCompareResult run_sigma_mode_comparison(const ExperimentPlan& plan);

struct RefinementResult {
  std::vector<std::size_t> N;
  std::vector<double> dt;
  /// gaps[k] = sup over coarse nodes of |U_{k+1} - U_k|.
  std::vector<double> gaps;
  std::vector<double> ratios;
  bool strictly_decreasing = false;
  nlohmann::json summary;
};

/// One level per "domain.N" sweep value (default N, 2N, 4N) with dt scaled by
/// N_0 / N; levels are compared on the coarsest space-time grid.
RefinementResult run_refinement(const ExperimentPlan& plan);

/// Runs a named plan and writes <output_dir>/summary.json. Returns whether the
/// experiment's checks passed.
bool run_experiment(const ExperimentPlan& plan, nlohmann::json* summary = nullptr);

}  // namespace dislo
