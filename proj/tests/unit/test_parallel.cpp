#include <doctest.h>

#include <cmath>
#include <random>

#include "dislo/fft.hpp"
#include "dislo/parallel_kernels.hpp"
#include "oracles.hpp"

using namespace dislo;

namespace {

std::vector<double> randn(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> d;
  std::vector<double> v(n);
  for (double& x : v) x = d(rng);
  return v;
}

}  // namespace

TEST_CASE("rfft against a direct DFT") {
  std::mt19937_64 rng(1);
  for (std::size_t n : {1u, 2u, 7u, 16u, 33u, 128u}) {
    const auto x = randn(rng, n);
    const auto X = rfft(x);
    const auto ref = oracle::dft(x);
    REQUIRE(X.size() == n / 2 + 1);
    for (std::size_t k = 0; k < X.size(); ++k) {
      CHECK(std::abs(X[k] - ref[k]) < 1e-11 * static_cast<double>(n));
    }
    const auto back = irfft(X, n);
    for (std::size_t j = 0; j < n; ++j) CHECK(back[j] / static_cast<double>(n) == doctest::Approx(x[j]).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("FFT convolution against the direct sum") {
  std::mt19937_64 rng(2);
  for (std::size_t n : {8u, 9u, 32u, 128u, 250u}) {
    const auto k = randn(rng, n);
    CircularConvolver conv(k, 0.37);
    CHECK(conv.size() == n);
    for (int trial = 0; trial < 20; ++trial) {
      const auto v = randn(rng, n);
      std::vector<double> out(n);
      conv.apply(v, out);
      const auto ref = oracle::convolve(k, v, 0.37);
      CHECK(oracle::sup_diff(out, ref) <= 1e-10 * oracle::sup_abs(ref));
    }
  }
  std::vector<double> k(4, 1.0), bad(5);
  CircularConvolver c(k, 1.0);
  CHECK_THROWS(c.apply(bad, bad));
  CircularConvolver moved = std::move(c);
  std::vector<double> v{1, 0, 0, 0}, out(4);
  moved.apply(v, out);
  for (double x : out) CHECK(x == doctest::Approx(1.0));
}

TEST_CASE("serial and OpenMP kernels agree bitwise") {
  std::mt19937_64 rng(3);
  for (int threads : {1, 2, 4}) {
    kernels::set_num_threads(threads);
    for (std::size_t n : {3u, 64u, 1001u}) {
      const auto k = randn(rng, n);
      const auto v = randn(rng, n);
      std::vector<double> a(n), b(n);
      kernels::circular_convolve_serial(k, v, 0.1, a);
      kernels::circular_convolve_omp(k, v, 0.1, b);
      CHECK(a == b);
      const auto ref = oracle::convolve(k, v, 0.1);
      CHECK(oracle::sup_diff(a, ref) <= 1e-12 * oracle::sup_abs(ref) + 1e-15);

      kernels::upwind_map_serial(v, k, 0.3, 0.01, a);
      kernels::upwind_map_omp(v, k, 0.3, 0.01, b);
      CHECK(a == b);
      CHECK(kernels::max_abs_diff_serial(a, v) == kernels::max_abs_diff_omp(a, v));

      std::vector<double> sa(n), sb(n);
      auto f = [](double x) { return std::sin(x) * x; };
      kernels::sample_uniform_serial(f, -1.0, 0.01, sa);
      kernels::sample_uniform_omp(f, -1.0, 0.01, sb);
      CHECK(sa == sb);
    }
  }
  kernels::set_num_threads(1);
}

TEST_CASE("upwind map formula") {
  const std::vector<double> u{0.0, 1.0, 3.0, 2.0};
  const std::vector<double> lam{0.5, -2.0, 0.0, 1.0};
  std::vector<double> out(4);
  const double r = 0.1, dtL = 0.05;
  kernels::upwind_map_serial(u, lam, r, dtL, out);
  for (std::size_t i = 0; i < 4; ++i) {
    const double up = u[(i + 1) % 4], um = u[(i + 3) % 4];
    const double lp = std::max(lam[i], 0.0), lm = std::max(-lam[i], 0.0);
    const double ref = u[i] + r * (lp * (up - u[i]) - lm * (u[i] - um)) + dtL * lam[i];
    CHECK(out[i] == doctest::Approx(ref).epsilon(1e-15));
  }
  std::vector<double> short_out(3);
  CHECK_THROWS(kernels::upwind_map_omp(u, lam, r, dtL, short_out));
}
