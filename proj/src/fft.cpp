#include "dislo/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <mutex>

#include "dislo/error.hpp"

namespace dislo {
namespace {

// FFTW planning is not thread-safe; execution on distinct buffers is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct RealBuffer {
  explicit RealBuffer(std::size_t n) : p(fftw_alloc_real(std::max<std::size_t>(n, 1))) {}
  ~RealBuffer() { fftw_free(p); }
  RealBuffer(const RealBuffer&) = delete;
  RealBuffer& operator=(const RealBuffer&) = delete;
  double* p;
};

struct ComplexBuffer {
  explicit ComplexBuffer(std::size_t n) : p(fftw_alloc_complex(std::max<std::size_t>(n, 1))) {}
  ~ComplexBuffer() { fftw_free(p); }
  ComplexBuffer(const ComplexBuffer&) = delete;
  ComplexBuffer& operator=(const ComplexBuffer&) = delete;
  fftw_complex* p;
};

struct Plan {
  fftw_plan p = nullptr;
  ~Plan() {
    if (p) {
      std::lock_guard lock(planner_mutex());
      fftw_destroy_plan(p);
    }
  }
};

}  // namespace

std::vector<std::complex<double>> rfft(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n == 0) return {};
  RealBuffer in(n);
  ComplexBuffer out(n / 2 + 1);
  Plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan.p = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.p, out.p, FFTW_ESTIMATE);
  }
  std::copy(x.begin(), x.end(), in.p);
  fftw_execute(plan.p);
  std::vector<std::complex<double>> X(n / 2 + 1);
  for (std::size_t k = 0; k < X.size(); ++k) X[k] = {out.p[k][0], out.p[k][1]};
  return X;
}

std::vector<double> irfft(std::span<const std::complex<double>> half_spectrum, std::size_t n) {
  if (n == 0) return {};
  if (half_spectrum.size() != n / 2 + 1) throw Error("irfft: spectrum size mismatch");
  ComplexBuffer in(n / 2 + 1);
  RealBuffer out(n);
  Plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan.p = fftw_plan_dft_c2r_1d(static_cast<int>(n), in.p, out.p, FFTW_ESTIMATE);
  }
  for (std::size_t k = 0; k < half_spectrum.size(); ++k) {
    in.p[k][0] = half_spectrum[k].real();
    in.p[k][1] = half_spectrum[k].imag();
  }
  fftw_execute(plan.p);
  return std::vector<double>(out.p, out.p + n);
}

struct CircularConvolver::Impl {
  Impl(std::size_t n) : n(n), real(n), spec(n / 2 + 1), kernel_spec(n / 2 + 1) {}
  std::size_t n;
  RealBuffer real;
  ComplexBuffer spec;
  std::vector<std::complex<double>> kernel_spec;
  Plan forward;
  Plan backward;
};

CircularConvolver::CircularConvolver(std::span<const double> kernel, double scale)
    : impl_(std::make_unique<Impl>(kernel.size())) {
  const std::size_t n = kernel.size();
  if (n == 0) throw Error("CircularConvolver: empty kernel");
  {
    std::lock_guard lock(planner_mutex());
    impl_->forward.p = fftw_plan_dft_r2c_1d(static_cast<int>(n), impl_->real.p, impl_->spec.p,
                                            FFTW_ESTIMATE);
    impl_->backward.p = fftw_plan_dft_c2r_1d(static_cast<int>(n), impl_->spec.p, impl_->real.p,
                                             FFTW_ESTIMATE);
  }
  std::copy(kernel.begin(), kernel.end(), impl_->real.p);
  fftw_execute(impl_->forward.p);
  // Fold the overall scale and the 1/n of the inverse transform into the kernel spectrum.
  const double f = scale / static_cast<double>(n);
  for (std::size_t k = 0; k < n / 2 + 1; ++k) {
    impl_->kernel_spec[k] = std::complex<double>(impl_->spec.p[k][0], impl_->spec.p[k][1]) * f;
  }
}

CircularConvolver::~CircularConvolver() = default;
CircularConvolver::CircularConvolver(CircularConvolver&&) noexcept = default;
CircularConvolver& CircularConvolver::operator=(CircularConvolver&&) noexcept = default;

std::size_t CircularConvolver::size() const noexcept { return impl_->n; }

void CircularConvolver::apply(std::span<const double> v, std::span<double> out) {
  const std::size_t n = impl_->n;
  if (v.size() != n || out.size() != n) throw Error("CircularConvolver: length mismatch");
  std::copy(v.begin(), v.end(), impl_->real.p);
  fftw_execute(impl_->forward.p);
  for (std::size_t k = 0; k < n / 2 + 1; ++k) {
    const std::complex<double> z =
        std::complex<double>(impl_->spec.p[k][0], impl_->spec.p[k][1]) * impl_->kernel_spec[k];
    impl_->spec.p[k][0] = z.real();
    impl_->spec.p[k][1] = z.imag();
  }
  fftw_execute(impl_->backward.p);
  std::copy(impl_->real.p, impl_->real.p + n, out.begin());
}

}  // namespace dislo
