#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace dislo {

/// Unnormalized forward real DFT, X_k = sum_j x_j exp(-2 pi i j k / n), k = 0..n/2.
std::vector<std::complex<double>> rfft(std::span<const double> x);

/// Unnormalized inverse of rfft: x_j = sum_{k=0}^{n-1} X_k exp(+2 pi i j k / n),
/// where X holds the n/2+1 nonredundant entries of a Hermitian spectrum.
std::vector<double> irfft(std::span<const std::complex<double>> half_spectrum, std::size_t n);

/// Circular convolution out_i = scale * sum_j kernel_j v_{i-j} on a ring of
/// fixed size, via a cached FFTW plan and the precomputed kernel spectrum.
///
/// Instances hold scratch buffers: one convolver per thread.
class CircularConvolver {
 public:
  CircularConvolver(std::span<const double> kernel, double scale);
  ~CircularConvolver();
  CircularConvolver(CircularConvolver&&) noexcept;
  CircularConvolver& operator=(CircularConvolver&&) noexcept;
  CircularConvolver(const CircularConvolver&) = delete;
  CircularConvolver& operator=(const CircularConvolver&) = delete;

  std::size_t size() const noexcept;
  void apply(std::span<const double> v, std::span<double> out);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace dislo
