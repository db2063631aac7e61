#include "dislo/cli.hpp"

#include <cmath>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "dislo/config.hpp"
#include "dislo/diagnostics.hpp"
#include "dislo/error.hpp"
#include "dislo/experiments.hpp"
#include "dislo/io.hpp"
#include "dislo/kernel.hpp"
#include "dislo/parallel_kernels.hpp"
#include "dislo/simulation.hpp"

namespace dislo {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Globals {
  int threads = 0;
  std::optional<long long> seed;
};

json seed_json(const Globals& g) { return g.seed ? json(*g.seed) : json(nullptr); }

void report_warnings(const RunResult& r, std::ostream& err) {
  for (const auto& w : r.warnings) err << "warning: " << w << '\n';
}

int run_simulate(const std::string& config_path, const std::string& out_dir, const Globals& g,
                 std::ostream& out, std::ostream& err) {
  const RunConfig cfg = load_config(config_path);
  const fs::path dir = resolve_output(out_dir.empty() ? cfg.output.dir : out_dir);
  RunResult r;
  try {
    r = run_simulation(cfg);
  } catch (const BoundViolation& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  report_warnings(r, err);
  write_run_outputs(r, dir, {{"seed", seed_json(g)}});
  write_entropy_csv(r, dir / "entropy.csv");
  json s = {{"output_dir", dir.string()},
            {"steps", r.steps},
            {"t", r.final_state.t},
            {"sup_v", r.final_sup_v()},
            {"violations", run_manifest(r)["violations"]},
            {"wall_seconds", r.wall_seconds}};
  out << dump_json(s);
  if (r.total_violations() > 0) {
    err << "error: " << r.total_violations() << " bound violation(s) recorded\n";
    return 1;
  }
  return 0;
}

int run_entropy_report(const std::string& config_path, const std::string& out_path,
                       std::ostream& out, std::ostream& err) {
  const RunConfig cfg = load_config(config_path);
  RunResult r;
  try {
    r = run_simulation(cfg);
  } catch (const BoundViolation& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  report_warnings(r, err);
  const fs::path path =
      resolve_output(out_path.empty() ? fs::path(cfg.output.dir) / "entropy.csv" : fs::path(out_path));
  write_entropy_csv(r, path);
  out << dump_json({{"csv", path.string()},
                    {"rows", r.records.size()},
                    {"entropy0", r.records.front().entropy},
                    {"zeta0", r.zeta0},
                    {"zeta_run", r.zeta_run},
                    {"tv0", r.tv0}});
  return r.total_violations() > 0 ? 1 : 0;
}

struct InspectArgs {
  double P = 50.0;
  int M = 400;
  std::size_t N = 0;
  std::string mode = "cesaro";
  double amplitude = 1.0;
  double zeta = 1.0;
  int oversample = 16;
  std::string out;
};

int run_kernel_inspect(const InspectArgs& a, std::ostream& out) {
  KernelSpec spec{a.amplitude, a.zeta};
  spec.validate();
  const std::size_t N = a.N == 0 ? static_cast<std::size_t>(a.M) : a.N;
  const Grid grid(a.P, N);
  const auto params = make_periodization(spec, a.P, a.M, a.oversample);
  const SigmaMode mode = sigma_mode_from_string(a.mode);
  const SmoothedKernel k = build_smoothed_kernel(spec, params, grid, mode);
  const auto dft = dft_sign_check(k.samples);

  json coeffs = json::array();
  double max_coeff = -std::numeric_limits<double>::infinity();
  for (int m = -(k.M - 1); m <= k.M - 1; ++m) {
    coeffs.push_back(k.coeff(m));
    max_coeff = std::max(max_coeff, k.coeff(m));
  }
  CsvWriter csv{"x", "sigma"};
  json samples = json::array();
  const std::size_t R = grid.ring_size();
  for (std::size_t i = 0; i < R; ++i) {
    const double x = grid.x(static_cast<long long>(i));
    const double s = k.samples[grid.wrap(static_cast<long long>(i) - static_cast<long long>(N))];
    samples.push_back(s);
    csv.row({x, s});
  }
  json j = {{"P", a.P},
            {"M", a.M},
            {"N", N},
            {"mode", to_string(mode)},
            {"amplitude", a.amplitude},
            {"zeta", a.zeta},
            {"tail_integral", params.tail_integral},
            {"kernel_l1", k.kernel_l1},
            {"l1_discrete", k.l1_discrete},
            {"l1_bound", 5.0 * k.kernel_l1},
            {"max_coeff", max_coeff},
            {"dft_check",
             {{"max_real", dft.max_real}, {"max_abs_imag", dft.max_abs_imag}, {"pass", dft.pass}}},
            {"coeffs_m_from", -(k.M - 1)},
            {"coeffs", coeffs},
            {"samples_x0", -a.P},
            {"samples", samples}};
  if (!a.out.empty()) {
    const fs::path dir = resolve_output(a.out);
    atomic_write(dir / "kernel.json", dump_json(j));
    csv.save(dir / "kernel.csv");
  }
  out << dump_json(j);
  return 0;
}

struct ExperimentArgs {
  std::string name;
  std::vector<double> subset;
  std::string out;
  std::optional<double> T;
};

int run_experiment_cmd(const ExperimentArgs& a, const Globals& g, std::ostream& out) {
  ExperimentPlan plan = default_plan(a.name);
  if (!a.out.empty()) plan.output_dir = a.out;
  plan.output_dir = resolve_output(plan.output_dir);
  if (!a.subset.empty()) {
    if (a.name == "table2") {
      plan.sweep = {{"domain.P", a.subset}};
    } else if (a.name == "sigma-compare" || a.name == "refinement") {
      plan.sweep = {{"domain.N", a.subset}};
    } else {
      throw ConfigError("--subset: not supported for experiment '" + a.name + "'");
    }
  }
  if (a.T) {
    plan.base.scheme.T = *a.T;
    if (a.name == "figures12") {
      const double steps = std::round(*a.T / plan.base.scheme.dt);
      plan.base.output.every_k_steps =
          static_cast<std::size_t>(std::max(1.0, std::round(steps / 10.0)));
    }
    validate(plan.base);
  }
  json summary;
  const bool pass = run_experiment(plan, &summary);
  summary["seed"] = seed_json(g);
  summary["output_dir"] = plan.output_dir.string();
  atomic_write(plan.output_dir / "summary.json", dump_json(summary));
  out << dump_json(summary);
  return pass ? 0 : 1;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Periodic nonlocal eikonal solver for dislocation dynamics", "dislo"};
  app.require_subcommand(1);
  Globals g;
  long long seed = 0;
  app.add_option("--threads", g.threads, "OpenMP thread count (0: runtime default)")
      ->check(CLI::NonNegativeNumber);
  auto* seed_opt = app.add_option("--seed", seed, "Recorded in manifests; the solver is deterministic");

  auto* sim = app.add_subcommand("simulate", "Run one simulation from a JSON config");
  std::string config_path, out_dir;
  sim->add_option("--config", config_path, "JSON config file")->required();
  sim->add_option("--out", out_dir, "Output directory (default: output.dir)");

  auto* ent = app.add_subcommand("entropy-report", "Per-step diagnostics CSV");
  std::string ent_config, ent_out;
  ent->add_option("--config", ent_config, "JSON config file")->required();
  ent->add_option("--out", ent_out, "CSV path (default: <output.dir>/entropy.csv)");

  auto* ins = app.add_subcommand("kernel-inspect", "Smoothed kernel coefficients and samples");
  InspectArgs ia;
  ins->add_option("--P", ia.P, "Half period");
  ins->add_option("--M", ia.M, "Cesaro order");
  ins->add_option("--N", ia.N, "Grid half size (default: M)");
  ins->add_option("--mode", ia.mode, "cesaro or cell_average");
  ins->add_option("--amplitude", ia.amplitude, "Kernel amplitude");
  ins->add_option("--zeta", ia.zeta, "Core width");
  ins->add_option("--oversample", ia.oversample, "Quadrature oversampling factor");
  ins->add_option("--out", ia.out, "Write kernel.json and kernel.csv to this directory");

  auto* exp = app.add_subcommand("experiment", "Canned reproduction runs");
  exp->require_subcommand(1);
  auto* run = exp->add_subcommand("run", "Run a named experiment");
  ExperimentArgs ea;
  double T_override = 0.0;
  run->add_option("name", ea.name, "table2 | figures12 | sigma-compare | refinement")->required();
  run->add_option("--subset", ea.subset, "Sweep values (P for table2, N otherwise)")
      ->delimiter(',');
  run->add_option("--out", ea.out, "Output directory");
  auto* T_opt = run->add_option("--T", T_override, "Final time override");

  std::vector<const char*> argv{"dislo"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  if (*seed_opt) g.seed = seed;
  if (*T_opt) ea.T = T_override;
  if (g.threads > 0) kernels::set_num_threads(g.threads);

  try {
    if (*sim) return run_simulate(config_path, out_dir, g, out, err);
    if (*ent) return run_entropy_report(ent_config, ent_out, out, err);
    if (*ins) return run_kernel_inspect(ia, out);
    if (*run) return run_experiment_cmd(ea, g, out);
  } catch (const ConfigError& e) {
    err << "config error:\n";
    for (const auto& v : e.violations()) err << "  " << v << '\n';
    return 2;
  } catch (const BoundViolation& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

int dispatch(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return dispatch(args, std::cout, std::cerr);
}

}  // namespace dislo
