#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "dislo/grid.hpp"

namespace dislo {

/// Peierls-Nabarro kernel K(x) = A (x^2 - zeta^2) / (x^2 + zeta^2)^2.
struct KernelSpec {
  double amplitude = 1.0;
  double zeta = 1.0;

  /// Throws ConfigError unless zeta > 0 and amplitude >= 0.
  void validate() const;
};

struct PeriodizationParams {
  double P = 50.0;
  int M = 400;
  /// int_{|x| >= P} |K|.
  double tail_integral = 0.0;
  int quadrature_oversample = 16;
};

/// Fills tail_integral from the kernel; validates P >= max(1, zeta) and M >= 1.
PeriodizationParams make_periodization(const KernelSpec& spec, double P, int M,
                                       int quadrature_oversample = 16);

enum class SigmaMode { cesaro, cell_average };

std::string to_string(SigmaMode mode);
SigmaMode sigma_mode_from_string(const std::string& s);

/// Smoothed periodic kernel sigma^P_M.
///
/// coeffs[k] holds c_m(sigma^P_M) for m = k - (M-1), i.e. m = -(M-1)..(M-1).
/// samples[j] holds sigma_{M,j} at lag j*dx (ring index j, so
/// samples[2N-j] is the lag -j sample).
struct SmoothedKernel {
  std::vector<double> coeffs;
  std::vector<double> samples;
  SigmaMode mode = SigmaMode::cesaro;
  double l1_discrete = 0.0;
  /// ||K||_1 of the physical kernel this was built from.
  double kernel_l1 = 0.0;
  int M = 0;
  double dx = 0.0;

  double coeff(int m) const;
};

double eval_physical_kernel(const KernelSpec& spec, double x);

/// K'(x) = 2 A x (3 zeta^2 - x^2) / (x^2 + zeta^2)^3.
double kernel_derivative(const KernelSpec& spec, double x);

/// Antiderivative of K: -A x / (x^2 + zeta^2).
double kernel_antiderivative(const KernelSpec& spec, double x);

/// Closed form 2 A P / (P^2 + zeta^2); rejects P < zeta with ConfigError.
double tail_integral(const KernelSpec& spec, double P);

/// ||K||_{L^1(R)} = 2 A / zeta.
double kernel_l1_norm(const KernelSpec& spec);

/// Fejer kernel F_M(x) = (1/M) (sin(M pi x / 2P) / sin(pi x / 2P))^2 on the
/// 2P-periodic circle; equals M at x in 2P Z.
double fejer_eval(int M, double P, double x);

/// Integral of the periodised kernel K^P over [a, b], b - a <= 2P.
double periodized_kernel_integral(const KernelSpec& spec, double P, double a, double b);

/// Real Fourier coefficients c_m(K^P) for m = -m_max..m_max (index m + m_max),
/// by the periodic trapezoid rule with endpoint corrections for the kink of K^P
/// at +-P, on quadrature_oversample * max(ring_size, 4M,
/// 2 m_max + 1) points. Throws NumericalError if an imaginary residue exceeds 1e-8.
struct PeriodizedCoefficients {
  std::vector<double> values;
  int m_max = 0;
  double max_imag_residue = 0.0;
  std::size_t quadrature_points = 0;

  double at(int m) const;
};

PeriodizedCoefficients fourier_coeffs_periodized(const KernelSpec& spec,
                                                 const PeriodizationParams& params, int m_max,
                                                 std::size_t ring_size = 0);

/// c_m(sigma^P_M) = (1 - |m|/M) (c_m(K^P) - (2/P)(1 - |m|/2M) tail) for |m| < M.
/// Returned in index order m = -(M-1)..(M-1). Throws BoundViolation if any
/// value exceeds +1e-12.
std::vector<double> cesaro_coefficients(const PeriodizedCoefficients& c_KP,
                                        const PeriodizationParams& params);

/// Evaluates sum_{|m| <= K} c_m exp(2 pi i m j / R) for j = 0..R-1, where
/// coeffs is symmetric (index m + K) and real. Uses an inverse DFT of the folded
/// coefficients when R >= 2K+1, direct summation otherwise.
std::vector<double> evaluate_even_series(std::span<const double> coeffs, std::size_t ring_size);

/// Builds sigma^P_M on the grid. Requires grid.n() >= M and grid P == params.P.
/// Throws BoundViolation if sum_j dx |sigma_j| > 5 ||K||_1 + 1e-9.
SmoothedKernel build_smoothed_kernel(const KernelSpec& spec, const PeriodizationParams& params,
                                     const Grid& grid, SigmaMode mode);

/// A kernel with all coefficients and samples equal to zero.
SmoothedKernel zero_kernel(const Grid& grid, int M);

}  // namespace dislo
