#include "dislo/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <limits>
#include <ostream>

#include "dislo/error.hpp"
#include "dislo/parallel_kernels.hpp"

namespace dislo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMaxHalvings = 10;
constexpr double kAdaptiveSafety = 0.9;
// Increments below this multiple of the tolerance are rounding noise and are
// not used when measuring the contraction factor.
constexpr double kContractionFloor = 100.0;

double sup_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

void check_ring(const Grid& grid, std::size_t n, const char* what) {
  if (n != grid.ring_size()) {
    throw ConfigError(std::string(what) + ": size " + std::to_string(n) +
                      " does not match ring size " + std::to_string(grid.ring_size()));
  }
}

double scheme_residual(std::span<const double> u_old, std::span<const double> u_new,
                       std::span<const double> lambda, double dt, double dx, double L) {
  const std::size_t R = u_old.size();
  double worst = 0.0;
  for (std::size_t i = 0; i < R; ++i) {
    const std::size_t ip = i + 1 == R ? 0 : i + 1;
    const std::size_t im = i == 0 ? R - 1 : i - 1;
    const double lp = std::max(lambda[i], 0.0);
    const double lm = std::max(-lambda[i], 0.0);
    const double th_p = (u_old[ip] - u_old[i]) / dx + L;
    const double th_m = (u_old[i] - u_old[im]) / dx + L;
    const double lhs = (u_new[i] - u_old[i]) / dt;
    worst = std::max(worst, std::abs(lhs - (lp * th_p - lm * th_m)));
  }
  return worst;
}

}  // namespace

std::string to_string(CflMode m) {
  switch (m) {
    case CflMode::strict_paper: return "strict_paper";
    case CflMode::practical: return "practical";
    case CflMode::off: return "off";
  }
  return "?";
}

std::string to_string(TimeMode m) { return m == TimeMode::uniform ? "uniform" : "adaptive"; }

std::string to_string(VelocityMode m) { return m == VelocityMode::fft ? "fft" : "direct"; }

CflMode cfl_mode_from_string(const std::string& s) {
  if (s == "strict_paper") return CflMode::strict_paper;
  if (s == "practical") return CflMode::practical;
  if (s == "off") return CflMode::off;
  throw ConfigError("solver.cfl_mode: unknown value '" + s + "'");
}

TimeMode time_mode_from_string(const std::string& s) {
  if (s == "uniform") return TimeMode::uniform;
  if (s == "adaptive") return TimeMode::adaptive;
  throw ConfigError("time.time_mode: unknown value '" + s + "'");
}

VelocityMode velocity_mode_from_string(const std::string& s) {
  if (s == "fft") return VelocityMode::fft;
  if (s == "direct") return VelocityMode::direct;
  throw ConfigError("solver.velocity_mode: unknown value '" + s + "'");
}

void SchemeConfig::validate() const {
  std::vector<std::string> bad;
  if (!(dt > 0.0) || !std::isfinite(dt)) bad.push_back("time.dt: must be positive and finite");
  if (!(T > 0.0) || !std::isfinite(T)) bad.push_back("time.T: must be positive and finite");
  if (!(fixed_point_tol > 0.0)) bad.push_back("solver.fixed_point_tol: must be positive");
  if (fixed_point_max_iter < 1) bad.push_back("solver.max_iter: must be >= 1");
  if (!(positivity_slack >= 0.0)) bad.push_back("solver.positivity_slack: must be >= 0");
  if (!(identity_slack >= 0.0)) bad.push_back("solver.identity_slack: must be >= 0");
  if (bad.empty() && time_mode == TimeMode::uniform) {
    const double steps = T / dt;
    const double rounded = std::round(steps);
    if (rounded < 1.0 || std::abs(steps - rounded) > 1e-9 * std::max(1.0, rounded)) {
      bad.push_back("time.T: T must be an integer multiple of dt in uniform mode");
    }
  }
  if (!bad.empty()) throw ConfigError(std::move(bad));
}

std::size_t SchemeConfig::step_count() const {
  validate();
  return static_cast<std::size_t>(std::llround(T / dt));
}

VelocityOperator::VelocityOperator(const SmoothedKernel& kernel, const Grid& grid,
                                   VelocityMode mode)
    : mode_(mode), dx_(grid.dx()), samples_(kernel.samples) {
  check_ring(grid, samples_.size(), "velocity kernel");
  if (mode_ == VelocityMode::fft) fft_ = std::make_unique<CircularConvolver>(samples_, dx_);
}

void VelocityOperator::apply(std::span<const double> v, std::span<double> lambda) {
  if (v.size() != samples_.size() || lambda.size() != samples_.size()) {
    throw ConfigError("velocity: field size does not match ring size");
  }
  if (fft_) {
    fft_->apply(v, lambda);
  } else {
    kernels::circular_convolve_omp(samples_, v, dx_, lambda);
  }
}

VelocityField VelocityOperator::operator()(std::span<const double> v) {
  VelocityField f;
  f.lambda.resize(v.size());
  apply(v, f.lambda);
  return f;
}

VelocityField velocity(std::span<const double> v, const SmoothedKernel& kernel, const Grid& grid,
                       VelocityMode mode) {
  VelocityOperator op(kernel, grid, mode);
  return op(v);
}

CflBounds theoretical_cfl(double u0_sup, double L_P, double kernel_l1, double T) {
  CflBounds b{kInf, kInf};
  if (kernel_l1 <= 0.0) return b;
  const double ue = u0_sup * std::exp(10.0 * L_P * T * kernel_l1);
  const double first = 1.0 / (ue + 1.0);
  const double third = ue > 0.0 ? 1.0 / (3.0 * ue) : kInf;
  b.ratio_max = std::min(first, third) / (10.0 * kernel_l1);
  if (L_P > 0.0) b.dt_max = std::min(first, 1.0) / (10.0 * L_P * kernel_l1);
  return b;
}

double strict_time_step(const CflBounds& b, double dx, double T, double safety) {
  const double cap = std::min(safety * b.dt_max, safety * b.ratio_max * dx);
  if (!std::isfinite(cap)) return T;
  if (!(cap > 0.0)) throw ConfigError("strict CFL bound admits no positive time step");
  const double steps = std::ceil(T / cap);
  return T / steps;
}

std::pair<State, StepStats> fixed_point_step(const State& state, VelocityOperator& velocity,
                                             const Grid& grid, const SchemeConfig& config,
                                             double dt) {
  const std::size_t R = grid.ring_size();
  check_ring(grid, state.u.size(), "state");
  const double dx = grid.dx();
  const double r = dt / dx;
  const double dtL = dt * state.L_P;
  const double tol = config.fixed_point_tol;

  std::vector<double> v = state.u;
  std::vector<double> next(R);
  StepStats st;
  st.lambda.resize(R);
  double prev_inc = 0.0;
  for (int k = 1; k <= config.fixed_point_max_iter; ++k) {
    velocity.apply(v, st.lambda);
    kernels::upwind_map_omp(state.u, st.lambda, r, dtL, next);
    const double inc = kernels::max_abs_diff_omp(next, v);
    if (k > 1 && prev_inc > kContractionFloor * tol) {
      st.contraction = std::max(st.contraction, inc / prev_inc);
    }
    v.swap(next);
    prev_inc = inc;
    st.iterations = k;
    st.residual = inc;
    if (inc < tol) {
      st.converged = true;
      break;
    }
  }

  velocity.apply(v, st.lambda);
  st.scheme_residual = scheme_residual(state.u, v, st.lambda, dt, dx, state.L_P);

  State out;
  out.n = state.n + 1;
  out.t = state.t + dt;
  out.u = std::move(v);
  out.L_P = state.L_P;
  return {std::move(out), std::move(st)};
}

std::pair<State, StepStats> fixed_point_step(const State& state, const SmoothedKernel& kernel,
                                             const Grid& grid, const SchemeConfig& config) {
  VelocityOperator op(kernel, grid, config.velocity_mode);
  return fixed_point_step(state, op, grid, config, config.dt);
}

State advance_uniform(const State& initial, const SmoothedKernel& kernel, const Grid& grid,
                      const SchemeConfig& config, const StepHook& hook) {
  config.validate();
  if (config.time_mode != TimeMode::uniform) {
    throw ConfigError("advance_uniform: time_mode must be uniform");
  }
  check_ring(grid, initial.u.size(), "initial state");
  const std::size_t steps = config.step_count();
  if (initial.n > steps) throw ConfigError("advance_uniform: initial step beyond T/dt");

  VelocityOperator op(kernel, grid, config.velocity_mode);
  State cur = initial;
  while (cur.n < steps) {
    auto [next, st] = fixed_point_step(cur, op, grid, config, config.dt);
    if (!st.converged) {
      throw NumericalError("fixed-point iteration did not converge at step " +
                           std::to_string(next.n) + " (increment " + std::to_string(st.residual) +
                           " after " + std::to_string(st.iterations) + " iterations)");
    }
    next.t = static_cast<double>(next.n) * config.dt;
    if (hook) hook(StepEvent{cur, next, st, config.dt});
    cur = std::move(next);
  }
  return cur;
}

State advance_adaptive(const State& initial, const SmoothedKernel& kernel, const Grid& grid,
                       const SchemeConfig& config, const StepHook& hook) {
  config.validate();
  check_ring(grid, initial.u.size(), "initial state");
  const double Kn = kernel.kernel_l1;
  const double L = initial.L_P;
  if (L > 0.0 && Kn > 0.0 && !(config.dt < 1.0 / (10.0 * L * Kn))) {
    throw ConfigError("time.dt: adaptive mode requires dt0 < 1/(10 L^P ||K||_1) = " +
                      std::to_string(1.0 / (10.0 * L * Kn)));
  }

  VelocityOperator op(kernel, grid, config.velocity_mode);
  const double dx = grid.dx();
  State cur = initial;
  double dt = config.dt;
  // Relative tolerance for landing on T.
  const double t_eps = 1e-12 * config.T;
  while (cur.t < config.T - t_eps) {
    const double s = sup_abs(cur.u);
    double bound_dt = kInf;
    double bound_ratio = kInf;
    if (Kn > 0.0) {
      bound_ratio = 1.0 / (10.0 * Kn * (s + 1.0));
      if (L > 0.0) bound_dt = bound_ratio / L;
    }
    dt = std::min({dt, kAdaptiveSafety * bound_dt, kAdaptiveSafety * dx * bound_ratio});
    double step_dt = std::min(dt, config.T - cur.t);

    int halvings = 0;
    for (;;) {
      auto [next, st] = fixed_point_step(cur, op, grid, config, step_dt);
      if (st.converged) {
        const double s_next = sup_abs(next.u);
        if (s_next > 2.0 * s + 1e-12) {
          throw BoundViolation("adaptive_linf_doubling",
                               "|u^{n+1}| = " + std::to_string(s_next) + " > 2 |u^n| = " +
                                   std::to_string(2.0 * s) + " at step " + std::to_string(next.n));
        }
        if (config.T - next.t <= t_eps) next.t = config.T;
        if (hook) hook(StepEvent{cur, next, st, step_dt});
        cur = std::move(next);
        break;
      }
      if (++halvings > kMaxHalvings) {
        throw NumericalError("fixed-point iteration did not converge after " +
                             std::to_string(kMaxHalvings) + " step halvings at t = " +
                             std::to_string(cur.t));
      }
      step_dt *= 0.5;
      dt = step_dt;
    }
  }
  return cur;
}

double q1_reconstruct(std::span<const State> states, const Grid& grid, double x, double t) {
  if (states.empty()) throw ConfigError("q1_reconstruct: no states");
  const double t0 = states.front().t;
  const double t1 = states.back().t;
  if (t < t0 - 1e-12 * std::max(1.0, std::abs(t0)) ||
      t > t1 + 1e-12 * std::max(1.0, std::abs(t1))) {
    throw ConfigError("q1_reconstruct: t outside the stored time range");
  }
  const double P = grid.half_period();
  const double dx = grid.dx();
  const double xi = (x + P) / dx;
  const double fl = std::floor(xi);
  const double a = xi - fl;
  const long long i0 = static_cast<long long>(fl);
  const std::size_t ia = grid.wrap(i0);
  const std::size_t ib = grid.wrap(i0 + 1);

  auto space = [&](const State& s) {
    check_ring(grid, s.u.size(), "q1_reconstruct state");
    return (1.0 - a) * s.u[ia] + a * s.u[ib];
  };
  if (states.size() == 1) return space(states.front());

  auto it = std::upper_bound(states.begin(), states.end(), t,
                             [](double tv, const State& s) { return tv < s.t; });
  std::size_t k = static_cast<std::size_t>(it - states.begin());
  if (k == 0) k = 1;
  if (k >= states.size()) k = states.size() - 1;
  const State& lo = states[k - 1];
  const State& hi = states[k];
  const double span_t = hi.t - lo.t;
  const double b = span_t > 0.0 ? std::clamp((t - lo.t) / span_t, 0.0, 1.0) : 0.0;
  return (1.0 - b) * space(lo) + b * space(hi);
}

namespace {
constexpr std::uint64_t kStateMagic = 0x31534f4c53494400ULL;

template <class T>
void put(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw ConfigError("state: truncated input");
  return v;
}
}  // namespace

void write_state(std::ostream& out, const State& s) {
  put(out, kStateMagic);
  put(out, static_cast<std::uint64_t>(s.n));
  put(out, s.t);
  put(out, s.L_P);
  put(out, static_cast<std::uint64_t>(s.u.size()));
  out.write(reinterpret_cast<const char*>(s.u.data()),
            static_cast<std::streamsize>(s.u.size() * sizeof(double)));
  if (!out) throw Error("state: write failed");
}

State read_state(std::istream& in) {
  if (get<std::uint64_t>(in) != kStateMagic) throw ConfigError("state: bad magic");
  State s;
  s.n = static_cast<std::size_t>(get<std::uint64_t>(in));
  s.t = get<double>(in);
  s.L_P = get<double>(in);
  const auto n = get<std::uint64_t>(in);
  if (n > (std::uint64_t{1} << 32)) throw ConfigError("state: implausible size");
  s.u.resize(static_cast<std::size_t>(n));
  in.read(reinterpret_cast<char*>(s.u.data()), static_cast<std::streamsize>(n * sizeof(double)));
  if (!in) throw ConfigError("state: truncated input");
  return s;
}

}  // namespace dislo
