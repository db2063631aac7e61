#include "dislo/simulation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>

#include "dislo/error.hpp"
#include "dislo/io.hpp"
#include "dislo/parallel_kernels.hpp"

namespace dislo {

namespace fs = std::filesystem;

std::size_t RunResult::total_violations() const {
  std::size_t n = 0;
  for (const auto& [k, v] : violations) n += v;
  return n;
}

double RunResult::final_sup_v() const {
  const auto v = physical_profile(final_state, grid());
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

std::vector<double> physical_profile(const State& s, const Grid& grid) {
  std::vector<double> v(s.u.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = s.u[i] + s.L_P * grid.x(static_cast<long long>(i));
  }
  return v;
}

RunResult run_simulation(const RunConfig& config, const RunOptions& options) {
  validate(config);
  RunResult r;
  r.config = config;
  const Grid grid = r.grid();
  r.dx = grid.dx();

  const InitialProfile profile = make_profile(config);
  const auto params =
      make_periodization(config.kernel, config.P, config.M, config.quadrature_oversample);
  r.tail_integral = params.tail_integral;
  r.kernel = build_smoothed_kernel(config.kernel, params, grid, config.sigma_mode);
  r.kernel_l1 = r.kernel.kernel_l1;

  r.initial = project_initial(profile, grid);
  r.L_P = r.initial.L_P;
  r.tv0 = total_variation(r.initial.u);
  for (double x : r.initial.u) r.sup0 = std::max(r.sup0, std::abs(x));
  const auto& sc = config.scheme;
  r.zeta0 = zeta_bound(profile.sup_norm(), sc.T, r.kernel_l1);
  r.zeta_run = zeta_bound(r.L_P, sc.T, r.kernel_l1);
  r.cfl = theoretical_cfl(r.sup0, r.L_P, r.kernel_l1, sc.T);
  r.strict_cfl_satisfied = sc.dt < r.cfl.dt_max && sc.dt / r.dx < r.cfl.ratio_max;
  if (!r.strict_cfl_satisfied) {
    const std::string msg = "strict CFL not satisfied: dt = " + format_double(sc.dt) +
                            " (bound " + format_double(r.cfl.dt_max) + "), dt/dx = " +
                            format_double(sc.dt / r.dx) + " (bound " +
                            format_double(r.cfl.ratio_max) + ")";
    if (sc.cfl_mode == CflMode::strict_paper) throw ConfigError("time.dt: " + msg);
    if (sc.cfl_mode == CflMode::practical) r.warnings.push_back(msg);
  }

  BoundMonitor::Setup setup;
  setup.kernel_l1 = r.kernel_l1;
  setup.T = sc.T;
  setup.fixed_point_tol = sc.fixed_point_tol;
  setup.positivity_slack = sc.positivity_slack;
  setup.identity_slack = sc.identity_slack;
  setup.abort_on_violation = options.abort_on_violation_set
                                 ? options.abort_on_violation
                                 : sc.cfl_mode == CflMode::strict_paper;
  setup.check_contraction = sc.cfl_mode != CflMode::off;
  BoundMonitor monitor(r.initial, grid, setup);

  const std::size_t k = config.output.every_k_steps;
  r.snapshots.push_back(r.initial);
  if (options.keep_all_states) r.all_states.push_back(r.initial);
  auto hook = [&](const StepEvent& ev) {
    monitor(ev);
    r.dt_sequence.push_back(ev.dt);
    if (k > 0 && ev.next.n % k == 0) r.snapshots.push_back(ev.next);
    if (options.keep_all_states) r.all_states.push_back(ev.next);
    if (options.observer) options.observer(ev);
  };

  const auto t0 = std::chrono::steady_clock::now();
  auto finish = [&] {
    r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.records = monitor.records();
    r.violations = monitor.violation_counts();
    r.extremes = monitor.extremes();
  };
  try {
    r.final_state = sc.time_mode == TimeMode::uniform
                        ? advance_uniform(r.initial, r.kernel, grid, sc, hook)
                        : advance_adaptive(r.initial, r.kernel, grid, sc, hook);
  } catch (...) {
    finish();
    throw;
  }
  finish();
  r.steps = r.final_state.n;
  if (r.snapshots.back().n != r.final_state.n) r.snapshots.push_back(r.final_state);
  return r;
}

nlohmann::json run_manifest(const RunResult& r) {
  nlohmann::json j;
  j["config"] = to_json(r.config);
  nlohmann::json d;
  d["dx"] = r.dx;
  d["N_T"] = r.steps;
  d["L_P"] = r.L_P;
  d["kernel_l1"] = r.kernel_l1;
  d["tail_integral"] = r.tail_integral;
  d["sigma_l1_discrete"] = r.kernel.l1_discrete;
  d["tv0"] = r.tv0;
  d["sup_u0"] = r.sup0;
  d["zeta0"] = r.zeta0;
  d["zeta_run"] = r.zeta_run;
  d["cfl_dt_max"] = r.cfl.dt_max;
  d["cfl_ratio_max"] = r.cfl.ratio_max;
  d["strict_cfl_satisfied"] = r.strict_cfl_satisfied;
  j["derived"] = d;
  const Grid g = r.grid();
  nlohmann::json f;
  f["t"] = r.final_state.t;
  f["sup_v"] = r.final_sup_v();
  f["tv"] = total_variation(r.final_state.u);
  f["tv_v"] = total_variation_open(physical_profile(r.final_state, g));
  f["entropy"] = discrete_entropy(r.final_state.u, r.L_P, g);
  j["final"] = f;
  nlohmann::json e;
  e["min_density"] = r.extremes.min_density;
  e["max_convex_error"] = r.extremes.max_convex_error;
  e["max_tau_error"] = r.extremes.max_tau_error;
  e["max_scheme_residual_ratio"] = r.extremes.max_scheme_residual_ratio;
  e["max_contraction"] = r.extremes.max_contraction;
  e["max_velocity_ratio"] = r.extremes.max_velocity_ratio;
  j["extremes"] = e;
  j["violations"] = nlohmann::json::object();
  for (const auto& [k, v] : r.violations) j["violations"][k] = v;
  j["warnings"] = r.warnings;
  j["wall_seconds"] = r.wall_seconds;
  j["threads"] = kernels::max_threads();
  return j;
}

void write_run_outputs(const RunResult& r, const fs::path& dir, const nlohmann::json& extra) {
  const Grid g = r.grid();
  nlohmann::json files = nlohmann::json::array();
  for (const State& s : r.snapshots) {
    CsvWriter csv{"i", "x_i", "u_i", "u_i_plus_LPx_i", "theta_plus_LP"};
    const auto theta = discrete_gradient(s.u, g);
    for (std::size_t i = 0; i < s.u.size(); ++i) {
      const double x = g.x(static_cast<long long>(i));
      csv.row({static_cast<double>(i), x, s.u[i], s.u[i] + s.L_P * x, theta[i] + s.L_P});
    }
    char name[64];
    std::snprintf(name, sizeof name, "snapshot_%07zu.csv", s.n);
    csv.save(dir / name);
    files.push_back({{"n", s.n}, {"t", s.t}, {"file", name}});
  }
  auto j = run_manifest(r);
  j["snapshots"] = files;
  for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
  atomic_write(dir / "run.json", dump_json(j));
}

void write_entropy_csv(const RunResult& r, const fs::path& path) {
  CsvWriter csv{"n", "t", "tv", "entropy", "sup_norm", "min_grad", "fp_iters", "contraction"};
  for (const auto& rec : r.records) {
    csv.row({static_cast<double>(rec.n), rec.t, rec.tv, rec.entropy, rec.sup_norm, rec.min_grad,
             static_cast<double>(rec.fp_iters), rec.contraction});
  }
  csv.save(path);
}

}  // namespace dislo
