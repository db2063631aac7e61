#include "dislo/parallel_kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>

#include "dislo/error.hpp"

namespace dislo::kernels {
namespace {

void check_sizes(std::size_t a, std::size_t b, std::size_t c, const char* what) {
  if (a != b || a != c) throw Error(std::string(what) + ": length mismatch");
}

inline double convolve_at(std::span<const double> kernel, std::span<const double> v,
                          std::size_t i) {
  const std::size_t n = v.size();
  double acc = 0.0;
  // j <= i: v index i - j; j > i: wraps to i - j + n.
  for (std::size_t j = 0; j <= i; ++j) acc += kernel[j] * v[i - j];
  for (std::size_t j = i + 1; j < n; ++j) acc += kernel[j] * v[i + n - j];
  return acc;
}

inline double upwind_at(std::span<const double> u, std::span<const double> lambda, double r,
                        double dt_L, std::size_t i) {
  const std::size_t n = u.size();
  const double ui = u[i];
  const double up = u[i + 1 == n ? 0 : i + 1];
  const double um = u[i == 0 ? n - 1 : i - 1];
  const double lam = lambda[i];
  const double lp = 0.5 * (lam + std::abs(lam));
  const double lm = 0.5 * (std::abs(lam) - lam);
  return ui + r * (lp * (up - ui) - lm * (ui - um)) + dt_L * lam;
}

}  // namespace

void set_num_threads(int k) {
  if (k > 0) omp_set_num_threads(k);
}

int max_threads() { return omp_get_max_threads(); }

void circular_convolve_serial(std::span<const double> kernel, std::span<const double> v,
                              double scale, std::span<double> out) {
  check_sizes(kernel.size(), v.size(), out.size(), "circular_convolve");
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = scale * convolve_at(kernel, v, i);
}

void circular_convolve_omp(std::span<const double> kernel, std::span<const double> v,
                           double scale, std::span<double> out) {
  check_sizes(kernel.size(), v.size(), out.size(), "circular_convolve");
  const long long n = static_cast<long long>(v.size());
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < n; ++i) {
    out[i] = scale * convolve_at(kernel, v, static_cast<std::size_t>(i));
  }
}

void upwind_map_serial(std::span<const double> u, std::span<const double> lambda, double r,
                       double dt_L, std::span<double> out) {
  check_sizes(u.size(), lambda.size(), out.size(), "upwind_map");
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = upwind_at(u, lambda, r, dt_L, i);
}

void upwind_map_omp(std::span<const double> u, std::span<const double> lambda, double r,
                    double dt_L, std::span<double> out) {
  check_sizes(u.size(), lambda.size(), out.size(), "upwind_map");
  const long long n = static_cast<long long>(u.size());
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < n; ++i) {
    out[i] = upwind_at(u, lambda, r, dt_L, static_cast<std::size_t>(i));
  }
}

double max_abs_diff_serial(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error("max_abs_diff: length mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double max_abs_diff_omp(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error("max_abs_diff: length mismatch");
  const long long n = static_cast<long long>(a.size());
  double m = 0.0;
#pragma omp parallel for reduction(max : m) schedule(static)
  for (long long i = 0; i < n; ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace dislo::kernels
