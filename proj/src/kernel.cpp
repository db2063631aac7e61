#include "dislo/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "dislo/error.hpp"
#include "dislo/fft.hpp"
#include "dislo/parallel_kernels.hpp"

namespace dislo {
namespace {

constexpr double kPi = std::numbers::pi;

// Sign tolerance for c_m(sigma).
constexpr double kSignSlack = 1e-12;
constexpr double kL1Slack = 1e-9;

void symmetrize(std::vector<double>& ring) {
  const std::size_t R = ring.size();
  for (std::size_t j = 1; j < R - j; ++j) {
    const double avg = 0.5 * (ring[j] + ring[R - j]);
    ring[j] = avg;
    ring[R - j] = avg;
  }
}

double discrete_l1(std::span<const double> samples, double dx) {
  double s = 0.0;
  for (double v : samples) s += std::abs(v);
  return s * dx;
}

void check_same_period(const PeriodizationParams& params, const Grid& grid) {
  if (std::abs(params.P - grid.half_period()) > 1e-12 * std::max(1.0, params.P)) {
    throw ConfigError("smoothed kernel: grid half-period differs from periodization P");
  }
}

}  // namespace

void KernelSpec::validate() const {
  std::vector<std::string> errs;
  if (!(zeta > 0.0) || !std::isfinite(zeta)) errs.push_back("kernel.zeta must be > 0");
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) {
    errs.push_back("kernel.amplitude must be >= 0");
  }
  if (!errs.empty()) throw ConfigError(std::move(errs));
}

PeriodizationParams make_periodization(const KernelSpec& spec, double P, int M,
                                       int quadrature_oversample) {
  spec.validate();
  std::vector<std::string> errs;
  if (!(P >= 1.0)) errs.push_back("domain.P must be >= 1");
  if (M < 1) errs.push_back("smoothing.M must be >= 1");
  if (quadrature_oversample < 4) errs.push_back("smoothing.quadrature_oversample must be >= 4");
  if (!errs.empty()) throw ConfigError(std::move(errs));
  PeriodizationParams p;
  p.P = P;
  p.M = M;
  p.quadrature_oversample = quadrature_oversample;
  p.tail_integral = tail_integral(spec, P);
  return p;
}

std::string to_string(SigmaMode mode) {
  return mode == SigmaMode::cesaro ? "cesaro" : "cell_average";
}

SigmaMode sigma_mode_from_string(const std::string& s) {
  if (s == "cesaro") return SigmaMode::cesaro;
  if (s == "cell_average") return SigmaMode::cell_average;
  throw ConfigError("smoothing.mode must be 'cesaro' or 'cell_average', got '" + s + "'");
}

double SmoothedKernel::coeff(int m) const {
  if (std::abs(m) >= M) return 0.0;
  return coeffs[static_cast<std::size_t>(m + M - 1)];
}

double eval_physical_kernel(const KernelSpec& spec, double x) {
  const double z2 = spec.zeta * spec.zeta;
  const double x2 = x * x;
  const double d = x2 + z2;
  return spec.amplitude * (x2 - z2) / (d * d);
}

double kernel_derivative(const KernelSpec& spec, double x) {
  const double d = x * x + spec.zeta * spec.zeta;
  return spec.amplitude * 2.0 * x * (3.0 * spec.zeta * spec.zeta - x * x) / (d * d * d);
}

double kernel_antiderivative(const KernelSpec& spec, double x) {
  return -spec.amplitude * x / (x * x + spec.zeta * spec.zeta);
}

double tail_integral(const KernelSpec& spec, double P) {
  if (!(P >= spec.zeta)) {
    throw ConfigError("tail_integral: closed form needs P >= zeta (P=" + std::to_string(P) +
                      ", zeta=" + std::to_string(spec.zeta) + ")");
  }
  // K >= 0 on |x| >= zeta, antiderivative -A x/(x^2+zeta^2) vanishes at infinity.
  return 2.0 * spec.amplitude * P / (P * P + spec.zeta * spec.zeta);
}

double kernel_l1_norm(const KernelSpec& spec) {
  // |x| <= zeta contributes A/zeta, the tail from zeta contributes A/zeta.
  return 2.0 * spec.amplitude / spec.zeta;
}

double fejer_eval(int M, double P, double x) {
  if (M < 1) throw ConfigError("fejer_eval: M must be >= 1");
  const double period = 2.0 * P;
  const double delta = x - period * std::round(x / period);
  const double eps = kPi * delta / period;
  const double s = std::sin(eps);
  if (std::abs(s) < 1e-9) {
    // (sin(M e)/sin(e))^2 / M = M (1 - (M^2 - 1) e^2 / 3) + O(e^4)
    const double m = static_cast<double>(M);
    return m * (1.0 - (m * m - 1.0) * eps * eps / 3.0);
  }
  const double r = std::sin(M * eps) / s;
  return r * r / M;
}

double periodized_kernel_integral(const KernelSpec& spec, double P, double a, double b) {
  if (b < a) return -periodized_kernel_integral(spec, P, b, a);
  const double period = 2.0 * P;
  long long k = static_cast<long long>(std::floor((a + P) / period));
  double cur = a;
  double acc = 0.0;
  while (cur < b) {
    const double end = std::min(b, (2.0 * static_cast<double>(k) + 1.0) * P);
    if (end > cur) {
      const double shift = -period * static_cast<double>(k);
      acc += kernel_antiderivative(spec, end + shift) - kernel_antiderivative(spec, cur + shift);
      cur = end;
    }
    ++k;
  }
  return acc;
}

double PeriodizedCoefficients::at(int m) const {
  return values[static_cast<std::size_t>(m + m_max)];
}

PeriodizedCoefficients fourier_coeffs_periodized(const KernelSpec& spec,
                                                 const PeriodizationParams& params, int m_max,
                                                 std::size_t ring_size) {
  if (m_max < params.M) throw ConfigError("fourier_coeffs_periodized: m_max must be >= M");
  if (params.quadrature_oversample < 4) {
    throw ConfigError("fourier_coeffs_periodized: quadrature_oversample must be >= 4");
  }
  const std::size_t base =
      std::max({ring_size, static_cast<std::size_t>(4 * params.M),
                static_cast<std::size_t>(2 * m_max + 1)});
  const std::size_t nf = static_cast<std::size_t>(params.quadrature_oversample) * base;
  const double P = params.P;
  const double h = 2.0 * P / static_cast<double>(nf);

  std::vector<double> samples(nf);
  kernels::sample_uniform_omp([&](double x) { return eval_physical_kernel(spec, x); }, -P, h,
                              samples);
  const auto X = rfft(samples);

  PeriodizedCoefficients out;
  out.m_max = m_max;
  out.quadrature_points = nf;
  out.values.assign(static_cast<std::size_t>(2 * m_max + 1), 0.0);
  // K' jumps across the seam at +-P, so the plain trapezoid rule is only
  // second order there. Subtract the Euler-Maclaurin endpoint terms.
  const double d1 = kernel_derivative(spec, P);
  const double e = 1e-3 * P;
  const double d3 =
      (kernel_derivative(spec, P + e) - 2.0 * d1 + kernel_derivative(spec, P - e)) / (e * e);
  // Samples start at -P: c_m = (1/nf) exp(i pi m) X_m.
  for (int m = 0; m <= m_max; ++m) {
    const double sign = (m % 2 == 0) ? 1.0 : -1.0;
    const auto c = X[static_cast<std::size_t>(m)] * (sign / static_cast<double>(nf));
    out.max_imag_residue = std::max(out.max_imag_residue, std::abs(c.imag()));
    const double w = std::numbers::pi * m / P;
    const double jump1 = 2.0 * sign * d1;
    const double jump3 = 2.0 * sign * (d3 - 3.0 * w * w * d1);
    const double corr = (h * h / 12.0 * jump1 - std::pow(h, 4) / 720.0 * jump3) / (2.0 * P);
    const double v = c.real() - corr;
    out.values[static_cast<std::size_t>(m_max + m)] = v;
    out.values[static_cast<std::size_t>(m_max - m)] = v;
  }
  if (out.max_imag_residue > 1e-8) {
    throw NumericalError("fourier_coeffs_periodized: imaginary residue " +
                         std::to_string(out.max_imag_residue) + " exceeds 1e-8");
  }
  return out;
}

std::vector<double> cesaro_coefficients(const PeriodizedCoefficients& c_KP,
                                        const PeriodizationParams& params) {
  const int M = params.M;
  if (c_KP.m_max < M - 1) throw ConfigError("cesaro_coefficients: c_KP must cover |m| < M");
  std::vector<double> out(static_cast<std::size_t>(2 * M - 1));
  double worst = -std::numeric_limits<double>::infinity();
  int worst_m = 0;
  for (int m = -(M - 1); m <= M - 1; ++m) {
    const double am = std::abs(static_cast<double>(m));
    const double fejer = 1.0 - am / M;
    const double fejer2 = 1.0 - am / (2.0 * M);
    const double c = fejer * (c_KP.at(m) - 2.0 / params.P * fejer2 * params.tail_integral);
    out[static_cast<std::size_t>(m + M - 1)] = c;
    if (c > worst) {
      worst = c;
      worst_m = m;
    }
  }
  if (worst > kSignSlack) {
    throw BoundViolation("coefficient_sign", "c_m(sigma) = " + std::to_string(worst) +
                                                 " > 0 at m=" + std::to_string(worst_m));
  }
  return out;
}

std::vector<double> evaluate_even_series(std::span<const double> coeffs, std::size_t ring_size) {
  if (coeffs.size() % 2 != 1) throw Error("evaluate_even_series: coefficient count must be odd");
  const std::size_t R = ring_size;
  const long long K = static_cast<long long>(coeffs.size() / 2);
  std::vector<double> out(R, 0.0);
  if (R == 0) return out;
  if (R >= coeffs.size()) {
    std::vector<double> folded(R, 0.0);
    for (long long m = -K; m <= K; ++m) {
      long long idx = m % static_cast<long long>(R);
      if (idx < 0) idx += static_cast<long long>(R);
      folded[static_cast<std::size_t>(idx)] += coeffs[static_cast<std::size_t>(m + K)];
    }
    std::vector<std::complex<double>> half(R / 2 + 1);
    for (std::size_t k = 0; k < half.size(); ++k) half[k] = folded[k];
    return irfft(half, R);
  }
  std::vector<double> cos_table(R);
  for (std::size_t k = 0; k < R; ++k) {
    cos_table[k] = std::cos(2.0 * kPi * static_cast<double>(k) / static_cast<double>(R));
  }
  for (std::size_t j = 0; j < R; ++j) {
    double acc = coeffs[static_cast<std::size_t>(K)];
    for (long long m = 1; m <= K; ++m) {
      const std::size_t phase = static_cast<std::size_t>(m) * j % R;
      acc += (coeffs[static_cast<std::size_t>(K + m)] + coeffs[static_cast<std::size_t>(K - m)]) *
             cos_table[phase];
    }
    out[j] = acc;
  }
  return out;
}

SmoothedKernel build_smoothed_kernel(const KernelSpec& spec, const PeriodizationParams& params,
                                     const Grid& grid, SigmaMode mode) {
  const int M = params.M;
  if (grid.n() < static_cast<std::size_t>(M)) {
    throw ConfigError("N >= M required (N=" + std::to_string(grid.n()) +
                      ", M=" + std::to_string(M) + ")");
  }
  check_same_period(params, grid);
  const std::size_t R = grid.ring_size();
  const double dx = grid.dx();
  const double P = params.P;

  SmoothedKernel k;
  k.mode = mode;
  k.M = M;
  k.dx = dx;
  const auto c_KP = fourier_coeffs_periodized(spec, params, M, R);
  k.coeffs = cesaro_coefficients(c_KP, params);

  if (mode == SigmaMode::cesaro) {
    k.samples = evaluate_even_series(k.coeffs, R);
  } else {
    // Cell averages of K^P_M = K^P - (2/P) tail F_{2M}.
    std::vector<double> f2m_coeffs(static_cast<std::size_t>(4 * M - 1));
    for (int m = -(2 * M - 1); m <= 2 * M - 1; ++m) {
      const double am = std::abs(static_cast<double>(m));
      const double arg = kPi * am / (2.0 * static_cast<double>(grid.n()));
      const double sinc = m == 0 ? 1.0 : std::sin(arg) / arg;
      f2m_coeffs[static_cast<std::size_t>(m + 2 * M - 1)] = (1.0 - am / (2.0 * M)) * sinc;
    }
    const auto f2m_cell = evaluate_even_series(f2m_coeffs, R);
    std::vector<double> km_cell(R);
    std::vector<double> fejer(R);
    for (std::size_t j = 0; j < R; ++j) {
      const double x = static_cast<double>(grid.lag(j)) * dx;
      const double k_cell = periodized_kernel_integral(spec, P, x - 0.5 * dx, x + 0.5 * dx) / dx;
      km_cell[j] = k_cell - 2.0 / P * params.tail_integral * f2m_cell[j];
      fejer[j] = fejer_eval(M, P, x);
    }
    k.samples.assign(R, 0.0);
    kernels::circular_convolve_omp(fejer, km_cell, dx / (2.0 * P), k.samples);
  }
  k.kernel_l1 = kernel_l1_norm(spec);
  symmetrize(k.samples);
  k.l1_discrete = discrete_l1(k.samples, dx);
  const double bound = 5.0 * kernel_l1_norm(spec);
  if (k.l1_discrete > bound + kL1Slack) {
    throw BoundViolation("kernel_l1", "sum dx |sigma| = " + std::to_string(k.l1_discrete) +
                                          " > 5 ||K||_1 = " + std::to_string(bound));
  }
  return k;
}

SmoothedKernel zero_kernel(const Grid& grid, int M) {
  SmoothedKernel k;
  k.M = M;
  k.dx = grid.dx();
  k.coeffs.assign(static_cast<std::size_t>(2 * M - 1), 0.0);
  k.samples.assign(grid.ring_size(), 0.0);
  return k;
}

}  // namespace dislo
