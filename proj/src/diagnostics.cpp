#include "dislo/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "dislo/error.hpp"

namespace dislo {

namespace {

constexpr double kInvE = 1.0 / std::numbers::e;

double sup_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// a * g with 0 * inf = 0.
double scaled(double a, double g) { return a == 0.0 ? 0.0 : a * g; }

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

double entropy_f(double x) {
  if (!(x >= 0.0)) throw ConfigError("entropy_f: negative argument");
  if (x < kInvE) return 0.0;
  return x * std::log(x) + kInvE;
}

double discrete_entropy(std::span<const double> u, double L_P, const Grid& grid) {
  const std::size_t R = u.size();
  const double dx = grid.dx();
  double sum = 0.0;
  for (std::size_t i = 0; i < R; ++i) {
    const std::size_t ip = i + 1 == R ? 0 : i + 1;
    const double d = (u[ip] - u[i]) / dx + L_P;
    sum += dx * entropy_f(std::max(d, 0.0));
  }
  return sum;
}

double total_variation(std::span<const double> u) {
  const std::size_t R = u.size();
  double tv = 0.0;
  for (std::size_t i = 0; i < R; ++i) tv += std::abs(u[i + 1 == R ? 0 : i + 1] - u[i]);
  return tv;
}

double total_variation_open(std::span<const double> v) {
  double tv = 0.0;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) tv += std::abs(v[i + 1] - v[i]);
  return tv;
}

double zeta_bound(double s, double T, double kernel_l1) {
  const double a = 5.0 * T * kernel_l1;
  if (a == 0.0) return 0.0;
  return a * std::exp(10.0 * s * T * kernel_l1) * (1.0 / (std::numbers::e * std::numbers::ln2) + s);
}

DftSignReport dft_sign_check(std::span<const double> samples, double tol) {
  const std::size_t R = samples.size();
  DftSignReport rep;
  rep.real_parts.assign(R, 0.0);
  if (R == 0) {
    rep.pass = true;
    return rep;
  }
  std::vector<double> c(R), s(R);
  for (std::size_t k = 0; k < R; ++k) {
    const double a = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(R);
    c[k] = std::cos(a);
    s[k] = std::sin(a);
  }
  rep.max_real = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < R; ++k) {
    double re = 0.0, im = 0.0;
    std::size_t idx = 0;
    for (std::size_t l = 0; l < R; ++l) {
      re += samples[l] * c[idx];
      im -= samples[l] * s[idx];
      idx += k;
      if (idx >= R) idx -= R;
    }
    re /= static_cast<double>(R);
    im /= static_cast<double>(R);
    rep.real_parts[k] = re;
    rep.max_real = std::max(rep.max_real, re);
    rep.max_abs_imag = std::max(rep.max_abs_imag, std::abs(im));
  }
  rep.pass = rep.max_real <= tol && rep.max_abs_imag <= tol;
  return rep;
}

double zygmund_norm(std::span<const double> w, double dx, double rel_tol) {
  double l1 = 0.0;
  for (double x : w) {
    if (!(x >= 0.0)) throw ConfigError("zygmund_norm: w must be nonnegative");
    l1 += dx * x;
  }
  if (l1 == 0.0) return 0.0;
  auto phi = [&](double mu) {
    double sum = 0.0;
    for (double x : w) {
      const double q = x / mu;
      sum += dx * q * std::log(std::numbers::e + q);
    }
    return sum;
  };
  // phi(||w||_1) >= 1, so the root lies above the L1 norm.
  double lo = l1;
  double hi = 2.0 * l1;
  while (phi(hi) > 1.0) {
    lo = hi;
    hi *= 2.0;
  }
  while (hi - lo > rel_tol * hi) {
    const double mid = 0.5 * (lo + hi);
    if (phi(mid) > 1.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

LemmaA1Report lemma_a1_check(std::span<const double> w, double dx) {
  LemmaA1Report r;
  for (double x : w) {
    if (!(x >= 0.0)) throw ConfigError("lemma_a1_check: w must be nonnegative");
    r.entropy_integral += dx * entropy_f(x);
    r.l1 += dx * x;
  }
  r.zygmund = zygmund_norm(w, dx);
  r.lhs1 = r.entropy_integral;
  r.rhs1 = 1.0 + r.zygmund + r.l1 * std::log(1.0 + r.zygmund);
  r.lhs2 = r.zygmund;
  r.rhs2 = 1.0 + r.l1 * std::log(1.0 + std::numbers::e * std::numbers::e) + r.entropy_integral;
  r.pass = r.lhs1 <= r.rhs1 && r.lhs2 <= r.rhs2;
  return r;
}

double modulus_of_continuity(double gamma, double h) {
  if (!(gamma > 0.0) || !(h > 0.0)) throw ConfigError("modulus: gamma and h must be positive");
  return 1.0 / std::log1p(1.0 / gamma) + 1.0 / std::log1p(1.0 / h);
}

double modulus_probe(std::span<const State> states, const Grid& grid, double gamma, double h) {
  const double omega = modulus_of_continuity(gamma, h);
  if (states.size() < 2) throw ConfigError("modulus_probe: need at least two snapshots");
  const double t_end = states.back().t;
  if (states.front().t + h > t_end) {
    throw ConfigError("modulus_probe: snapshots do not cover [t, t + h]");
  }
  double worst = 0.0;
  for (const State& s : states) {
    if (s.t + h > t_end) break;
    for (std::size_t i = 0; i < grid.ring_size(); ++i) {
      const double x = grid.x(static_cast<long long>(i));
      const double a = s.u[i];
      const double b = q1_reconstruct(states, grid, x + gamma, s.t + h);
      worst = std::max(worst, std::abs(b - a));
    }
  }
  return worst / omega;
}

BoundMonitor::BoundMonitor(const State& initial, const Grid& grid, Setup setup)
    : grid_(grid), setup_(setup), L_(initial.L_P) {
  growth_ = std::exp(10.0 * L_ * setup_.T * setup_.kernel_l1);
  tv0_ = total_variation(initial.u);
  sup0_ = sup_abs(initial.u);
  e0_ = discrete_entropy(initial.u, L_, grid_);
  zeta_run_ = zeta_bound(L_, setup_.T, setup_.kernel_l1);
  records_.push_back(record_for(initial));
  ext_.min_density = records_.back().min_grad;
  ext_.max_entropy = records_.back().entropy;
}

DiagnosticsRecord BoundMonitor::record_for(const State& s) const {
  DiagnosticsRecord r;
  r.n = s.n;
  r.t = s.t;
  r.tv = total_variation(s.u);
  r.entropy = discrete_entropy(s.u, s.L_P, grid_);
  r.sup_norm = sup_abs(s.u);
  const auto theta = discrete_gradient(s.u, grid_);
  double mg = std::numeric_limits<double>::infinity();
  for (double th : theta) mg = std::min(mg, th + s.L_P);
  r.min_grad = theta.empty() ? 0.0 : mg;
  return r;
}

void BoundMonitor::flag(DiagnosticsRecord& rec, const std::string& bound,
                        const std::string& detail) {
  rec.violations.push_back(bound);
  ++counts_[bound];
  if (setup_.abort_on_violation) {
    records_.push_back(rec);
    throw BoundViolation(bound, detail + " at step " + std::to_string(rec.n));
  }
}

std::size_t BoundMonitor::total_violations() const noexcept {
  std::size_t n = 0;
  for (const auto& [k, v] : counts_) n += v;
  return n;
}

StepHook BoundMonitor::hook() {
  return [this](const StepEvent& ev) { (*this)(ev); };
}

void BoundMonitor::operator()(const StepEvent& ev) {
  const auto& prev = ev.previous.u;
  const auto& next = ev.next.u;
  const auto& lam = ev.stats.lambda;
  const std::size_t R = next.size();
  const double dx = grid_.dx();
  const double dt = ev.dt;
  const double r = dt / dx;
  const double K = setup_.kernel_l1;

  DiagnosticsRecord rec = record_for(ev.next);
  rec.fp_iters = ev.stats.iterations;
  rec.contraction = ev.stats.contraction;
  const double tv_prev = total_variation(prev);
  const double e_prev = discrete_entropy(prev, L_, grid_);

  double convex_err = 0.0;
  double tau_err = 0.0;
  for (std::size_t i = 0; i < R; ++i) {
    const std::size_t ip = i + 1 == R ? 0 : i + 1;
    const std::size_t ipp = ip + 1 == R ? 0 : ip + 1;
    const std::size_t im = i == 0 ? R - 1 : i - 1;
    const double d_m = (prev[i] - prev[im]) / dx + L_;
    const double d_0 = (prev[ip] - prev[i]) / dx + L_;
    const double d_p = (prev[ipp] - prev[ip]) / dx + L_;
    const double lp_i = std::max(lam[i], 0.0);
    const double lm_i = std::max(-lam[i], 0.0);
    const double lp_ip = std::max(lam[ip], 0.0);
    const double lm_ip = std::max(-lam[ip], 0.0);
    const double a1 = r * lp_ip;
    const double a2 = r * lm_i;
    const double a3 = 1.0 - r * (lp_i + lm_ip);
    const double lhs = (next[ip] - next[i]) / dx + L_;
    convex_err = std::max(convex_err, std::abs(lhs - (a1 * d_p + a2 * d_m + a3 * d_0)));
    const double tau = (next[i] - prev[i]) / dt;
    tau_err = std::max(tau_err, std::abs(tau - (lp_i * d_0 - lm_i * d_m)));
  }
  const double lam_sup = sup_abs(lam);

  ext_.min_density = std::min(ext_.min_density, rec.min_grad);
  ext_.max_convex_error = std::max(ext_.max_convex_error, convex_err);
  ext_.max_tau_error = std::max(ext_.max_tau_error, tau_err);
  const double res_cap = 10.0 * setup_.fixed_point_tol / dt;
  ext_.max_scheme_residual_ratio =
      std::max(ext_.max_scheme_residual_ratio, ev.stats.scheme_residual / res_cap);
  ext_.max_contraction = std::max(ext_.max_contraction, ev.stats.contraction);
  if (rec.sup_norm > 0.0 && K > 0.0) {
    ext_.max_velocity_ratio = std::max(ext_.max_velocity_ratio, lam_sup / (5.0 * K * rec.sup_norm));
  }
  ext_.max_entropy = std::max(ext_.max_entropy, rec.entropy);

  if (rec.min_grad < -setup_.positivity_slack) {
    flag(rec, "positivity", "min(theta + L) = " + fmt(rec.min_grad));
  }
  const double linf_cap = scaled(sup0_, growth_) + 1e-9;
  if (rec.sup_norm > linf_cap) {
    flag(rec, "linf", "|u| = " + fmt(rec.sup_norm) + " > " + fmt(linf_cap));
  }
  const double tv_cap = scaled(tv0_, growth_) + 1e-9;
  if (rec.tv > tv_cap) flag(rec, "tv", "TV = " + fmt(rec.tv) + " > " + fmt(tv_cap));
  if (rec.tv * (1.0 - 5.0 * L_ * dt * K) > tv_prev + 1e-10) {
    flag(rec, "tv_step", "TV(n+1) = " + fmt(rec.tv) + ", TV(n) = " + fmt(tv_prev));
  }
  const double e_step_cap =
      scaled(5.0 * dt * K * tv0_ * (1.0 / (std::numbers::e * std::numbers::ln2) + L_), growth_) +
      1e-9;
  if (rec.entropy - e_prev > e_step_cap) {
    flag(rec, "entropy_step",
         "E(n+1) - E(n) = " + fmt(rec.entropy - e_prev) + " > " + fmt(e_step_cap));
  }
  const double e_cap = e0_ + scaled(zeta_run_, tv0_) + 1e-9;
  if (rec.entropy > e_cap) {
    flag(rec, "entropy_cumulative", "E = " + fmt(rec.entropy) + " > " + fmt(e_cap));
  }
  if (convex_err > setup_.identity_slack) {
    flag(rec, "convex_combination", "error " + fmt(convex_err));
  }
  if (tau_err > setup_.identity_slack) flag(rec, "tau_identity", "error " + fmt(tau_err));
  if (!(ev.stats.scheme_residual < res_cap)) {
    flag(rec, "scheme_residual", fmt(ev.stats.scheme_residual) + " >= " + fmt(res_cap));
  }
  if (lam_sup > 5.0 * K * rec.sup_norm * (1.0 + 1e-12) + 1e-14) {
    flag(rec, "velocity", "|lambda| = " + fmt(lam_sup));
  }
  if (setup_.check_contraction && !(ev.stats.contraction < 1.0)) {
    flag(rec, "contraction", "factor " + fmt(ev.stats.contraction));
  }
  records_.push_back(std::move(rec));
}

}  // namespace dislo
