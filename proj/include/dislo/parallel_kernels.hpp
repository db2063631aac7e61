#pragma once

// Data-parallel inner loops of the solver. Every loop has a serial reference
// and an OpenMP variant; each output element is computed by the same
// sequential arithmetic in both, so results are bitwise identical for any
// thread count.

#include <cstddef>
#include <span>

namespace dislo::kernels {

void set_num_threads(int k);
int max_threads();

/// out_i = scale * sum_j kernel_j * v_{(i-j) mod n}.
void circular_convolve_serial(std::span<const double> kernel, std::span<const double> v,
                              double scale, std::span<double> out);
void circular_convolve_omp(std::span<const double> kernel, std::span<const double> v,
                           double scale, std::span<double> out);

/// Upwind fixed-point map
///   out_i = u_i + r (lam_i^+ (u_{i+1} - u_i) - lam_i^- (u_i - u_{i-1})) + dt_L * lam_i
/// with r = dt/dx, dt_L = dt * L^P and circular neighbours.
void upwind_map_serial(std::span<const double> u, std::span<const double> lambda, double r,
                       double dt_L, std::span<double> out);
void upwind_map_omp(std::span<const double> u, std::span<const double> lambda, double r,
                    double dt_L, std::span<double> out);

/// max_i |a_i - b_i|; max is order independent so the parallel reduction is exact.
double max_abs_diff_serial(std::span<const double> a, std::span<const double> b);
double max_abs_diff_omp(std::span<const double> a, std::span<const double> b);

/// out_k = f(x0 + k*h).
template <class F>
void sample_uniform_serial(F&& f, double x0, double h, std::span<double> out) {
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = f(x0 + static_cast<double>(k) * h);
}

template <class F>
void sample_uniform_omp(F&& f, double x0, double h, std::span<double> out) {
  const long long n = static_cast<long long>(out.size());
#pragma omp parallel for schedule(static)
  for (long long k = 0; k < n; ++k) out[k] = f(x0 + static_cast<double>(k) * h);
}

}  // namespace dislo::kernels
