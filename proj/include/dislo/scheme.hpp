#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dislo/fft.hpp"
#include "dislo/grid.hpp"
#include "dislo/kernel.hpp"

namespace dislo {

enum class CflMode { strict_paper, practical, off };
enum class TimeMode { uniform, adaptive };
enum class VelocityMode { fft, direct };

std::string to_string(CflMode m);
std::string to_string(TimeMode m);
std::string to_string(VelocityMode m);
CflMode cfl_mode_from_string(const std::string& s);
TimeMode time_mode_from_string(const std::string& s);
VelocityMode velocity_mode_from_string(const std::string& s);

struct SchemeConfig {
  double dt = 0.02;
  double T = 1400.0;
  double fixed_point_tol = 1e-12;
  int fixed_point_max_iter = 200;
  CflMode cfl_mode = CflMode::practical;
  TimeMode time_mode = TimeMode::uniform;
  VelocityMode velocity_mode = VelocityMode::fft;
  /// Slack on theta + L^P >= 0.
  double positivity_slack = 1e-12;
  /// Slack on the convex-combination and tau identities.
  double identity_slack = 1e-10;

  /// Collects every violated constraint into one ConfigError.
  void validate() const;
  /// round(T/dt); throws ConfigError in uniform mode if T is not a multiple of dt.
  std::size_t step_count() const;

  friend bool operator==(const SchemeConfig&, const SchemeConfig&) = default;
};

struct VelocityField {
  std::vector<double> lambda;
};

/// lambda_i[v] = sum_j dx sigma_j v_{i-j} on the ring, bound to one kernel.
class VelocityOperator {
 public:
  VelocityOperator(const SmoothedKernel& kernel, const Grid& grid, VelocityMode mode);

  VelocityMode mode() const noexcept { return mode_; }
  void apply(std::span<const double> v, std::span<double> lambda);
  VelocityField operator()(std::span<const double> v);

 private:
  VelocityMode mode_;
  double dx_;
  std::vector<double> samples_;
  std::unique_ptr<CircularConvolver> fft_;
};

VelocityField velocity(std::span<const double> v, const SmoothedKernel& kernel, const Grid& grid,
                       VelocityMode mode);

/// Right-hand sides of the uniform step-size conditions: dt < dt_max and dt/dx < ratio_max.
struct CflBounds {
  double dt_max;
  double ratio_max;
};

/// Pure report. dt_max is +inf when L^P ||K||_1 = 0.
CflBounds theoretical_cfl(double u0_sup, double L_P, double kernel_l1, double T);

/// Largest dt = T/n_steps with dt < safety * dt_max and dt/dx < safety * ratio_max.
double strict_time_step(const CflBounds& b, double dx, double T, double safety = 0.9);

struct StepStats {
  int iterations = 0;
  /// Last sup-norm increment of the fixed-point iteration.
  double residual = 0.0;
  /// Largest ratio of successive increments while above the noise floor.
  double contraction = 0.0;
  /// sup_i |(u^{n+1}-u^n)/dt - scheme rhs evaluated with lambda[u^{n+1}]|.
  double scheme_residual = 0.0;
  bool converged = false;
  /// lambda[u^{n+1}].
  std::vector<double> lambda;
};

/// Solves u^{n+1} = F(u^{n+1}) by Banach iteration started at u^n.
/// Returns converged = false instead of throwing on non-convergence.
std::pair<State, StepStats> fixed_point_step(const State& state, VelocityOperator& velocity,
                                             const Grid& grid, const SchemeConfig& config,
                                             double dt);

std::pair<State, StepStats> fixed_point_step(const State& state, const SmoothedKernel& kernel,
                                             const Grid& grid, const SchemeConfig& config);

struct StepEvent {
  const State& previous;
  const State& next;
  const StepStats& stats;
  double dt;
};

using StepHook = std::function<void(const StepEvent&)>;

/// Runs round(T/dt) steps from initial.n (restarts continue the step count
/// until n == round(T/dt)). Throws NumericalError on fixed-point failure.
State advance_uniform(const State& initial, const SmoothedKernel& kernel, const Grid& grid,
                      const SchemeConfig& config, const StepHook& hook = {});

/// Adaptive steps: dt_{n+1} = min(dt_n, 0.9 / (10 L ||K|| (|u^n|+1)),
/// 0.9 dx / (10 ||K|| (|u^n|+1))), halving on fixed-point failure (at most 10
/// consecutive halvings). The last step is clipped to land on T.
State advance_adaptive(const State& initial, const SmoothedKernel& kernel, const Grid& grid,
                       const SchemeConfig& config, const StepHook& hook = {});

/// Bilinear space-time interpolation of a sequence of states with increasing t.
double q1_reconstruct(std::span<const State> states, const Grid& grid, double x, double t);

void write_state(std::ostream& out, const State& s);
State read_state(std::istream& in);

}  // namespace dislo
