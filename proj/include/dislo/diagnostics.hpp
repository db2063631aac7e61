#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "dislo/grid.hpp"
#include "dislo/kernel.hpp"
#include "dislo/scheme.hpp"

namespace dislo {

/// f(x) = x ln x + 1/e for x >= 1/e, 0 otherwise.
double entropy_f(double x);

/// E(u) = sum_i dx f(theta_{i+1/2} + L^P).
double discrete_entropy(std::span<const double> u, double L_P, const Grid& grid);

/// sum_i |u_{i+1} - u_i| over the ring (seam included).
double total_variation(std::span<const double> u);

/// sum_{i<R-1} |v_{i+1} - v_i| on [-P, P) without the seam.
double total_variation_open(std::span<const double> v);

/// zeta = 5 T ||K||_1 exp(10 s T ||K||_1) (1/(e ln 2) + s), with s = ||v0||_inf
/// for the a priori constant and s = L^P for the per-run constant.
double zeta_bound(double s, double T, double kernel_l1);

struct DftSignReport {
  /// Re c_k for k = 0..R-1.
  std::vector<double> real_parts;
  double max_real = 0.0;
  double max_abs_imag = 0.0;
  bool pass = false;
};

/// c_k = (1/R) sum_l sigma_l exp(-2 pi i k l / R) by direct O(R^2) summation;
/// passes when max Re c_k <= tol and max |Im c_k| <= tol.
DftSignReport dft_sign_check(std::span<const double> samples, double tol = 1e-12);

/// Luxemburg norm inf{mu > 0 : sum dx (w/mu) ln(e + w/mu) <= 1} for w >= 0, by
/// bisection to relative tolerance rel_tol.
double zygmund_norm(std::span<const double> w, double dx, double rel_tol = 1e-13);

struct LemmaA1Report {
  double entropy_integral = 0.0;
  double l1 = 0.0;
  double zygmund = 0.0;
  /// int f(w) <= 1 + N + ||w||_1 ln(1 + N).
  double lhs1 = 0.0, rhs1 = 0.0;
  /// N <= 1 + ||w||_1 ln(1 + e^2) + int f(w).
  double lhs2 = 0.0, rhs2 = 0.0;
  bool pass = false;
};

LemmaA1Report lemma_a1_check(std::span<const double> w, double dx);

/// omega(gamma, h) = 1/ln(1 + 1/gamma) + 1/ln(1 + 1/h).
double modulus_of_continuity(double gamma, double h);

/// sup over grid nodes x and stored times t with t + h <= t_end of
/// |Q1(x + gamma, t + h) - Q1(x, t)| / omega(gamma, h).
double modulus_probe(std::span<const State> states, const Grid& grid, double gamma, double h);

struct DiagnosticsRecord {
  std::size_t n = 0;
  double t = 0.0;
  double tv = 0.0;
  double entropy = 0.0;
  double sup_norm = 0.0;
  double min_grad = 0.0;
  int fp_iters = 0;
  double contraction = 0.0;
  std::vector<std::string> violations;
};

/// Largest observed value of each checked quantity relative to its bound.
struct MonitorExtremes {
  double min_density = 0.0;
  double max_convex_error = 0.0;
  double max_tau_error = 0.0;
  double max_scheme_residual_ratio = 0.0;
  double max_contraction = 0.0;
  double max_velocity_ratio = 0.0;
  double max_entropy = 0.0;
};

/// Checks the discrete bounds after every step. Violations are recorded on the
/// step record; with abort_on_violation the first one throws BoundViolation.
class BoundMonitor {
 public:
  struct Setup {
    double kernel_l1 = 0.0;
    double T = 0.0;
    double fixed_point_tol = 1e-12;
    double positivity_slack = 1e-12;
    double identity_slack = 1e-10;
    bool abort_on_violation = false;
    bool check_contraction = true;
  };

  BoundMonitor(const State& initial, const Grid& grid, Setup setup);

  void operator()(const StepEvent& ev);
  StepHook hook();

  const std::vector<DiagnosticsRecord>& records() const noexcept { return records_; }
  const std::map<std::string, std::size_t>& violation_counts() const noexcept { return counts_; }
  std::size_t total_violations() const noexcept;
  const MonitorExtremes& extremes() const noexcept { return ext_; }

  double tv0() const noexcept { return tv0_; }
  double sup0() const noexcept { return sup0_; }
  double entropy0() const noexcept { return e0_; }
  double zeta_run() const noexcept { return zeta_run_; }

  DiagnosticsRecord record_for(const State& s) const;

 private:
  void flag(DiagnosticsRecord& rec, const std::string& bound, const std::string& detail);

  Grid grid_;
  Setup setup_;
  double L_;
  double growth_;
  double tv0_;
  double sup0_;
  double e0_;
  double zeta_run_;
  std::vector<DiagnosticsRecord> records_;
  std::map<std::string, std::size_t> counts_;
  MonitorExtremes ext_;
};

}  // namespace dislo
