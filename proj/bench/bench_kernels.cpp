#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "dislo/fft.hpp"
#include "dislo/kernel.hpp"
#include "dislo/parallel_kernels.hpp"
#include "dislo/scheme.hpp"

using namespace dislo;

namespace {

std::vector<double> randn(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d;
  std::vector<double> v(n);
  for (double& x : v) x = d(rng);
  return v;
}

void BM_convolve_serial(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const auto k = randn(n, 1), v = randn(n, 2);
  std::vector<double> out(n);
  for (auto _ : st) {
    kernels::circular_convolve_serial(k, v, 0.1, out);
    benchmark::DoNotOptimize(out.data());
  }
}

void BM_convolve_omp(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const auto k = randn(n, 1), v = randn(n, 2);
  std::vector<double> out(n);
  for (auto _ : st) {
    kernels::circular_convolve_omp(k, v, 0.1, out);
    benchmark::DoNotOptimize(out.data());
  }
}

void BM_convolve_fft(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const auto k = randn(n, 1), v = randn(n, 2);
  CircularConvolver conv(k, 0.1);
  std::vector<double> out(n);
  for (auto _ : st) {
    conv.apply(v, out);
    benchmark::DoNotOptimize(out.data());
  }
}

void BM_upwind_serial(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const auto u = randn(n, 3), lam = randn(n, 4);
  std::vector<double> out(n);
  for (auto _ : st) {
    kernels::upwind_map_serial(u, lam, 0.2, 0.01, out);
    benchmark::DoNotOptimize(out.data());
  }
}

void BM_upwind_omp(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const auto u = randn(n, 3), lam = randn(n, 4);
  std::vector<double> out(n);
  for (auto _ : st) {
    kernels::upwind_map_omp(u, lam, 0.2, 0.01, out);
    benchmark::DoNotOptimize(out.data());
  }
}

// One step of the reference run (P=50, N=500, M=400).
void BM_full_step(benchmark::State& st) {
  const KernelSpec spec{1.0, 1.0};
  const Grid g(50.0, 500);
  const auto k = build_smoothed_kernel(spec, make_periodization(spec, 50.0, 400), g, SigmaMode::cesaro);
  const auto s0 = project_initial(InitialProfile::arctan(), g);
  SchemeConfig c;
  c.velocity_mode = st.range(0) == 0 ? VelocityMode::direct : VelocityMode::fft;
  VelocityOperator op(k, g, c.velocity_mode);
  for (auto _ : st) {
    auto r = fixed_point_step(s0, op, g, c, c.dt);
    benchmark::DoNotOptimize(r.first.u.data());
  }
  st.SetLabel(c.velocity_mode == VelocityMode::fft ? "fft" : "direct");
}

}  // namespace

BENCHMARK(BM_convolve_serial)->RangeMultiplier(4)->Range(64, 4096);
BENCHMARK(BM_convolve_omp)->RangeMultiplier(4)->Range(64, 4096);
BENCHMARK(BM_convolve_fft)->RangeMultiplier(4)->Range(64, 4096);
BENCHMARK(BM_upwind_serial)->RangeMultiplier(8)->Range(1 << 10, 1 << 20);
BENCHMARK(BM_upwind_omp)->RangeMultiplier(8)->Range(1 << 10, 1 << 20);
BENCHMARK(BM_full_step)->Arg(0)->Arg(1);

BENCHMARK_MAIN();
