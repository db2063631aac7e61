#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "dislo/diagnostics.hpp"
#include "dislo/error.hpp"
#include "dislo/scheme.hpp"
#include "oracles.hpp"

using namespace dislo;

namespace {

struct Setup {
  Grid grid;
  SmoothedKernel kernel;
  State initial;
};

Setup arctan_setup(double P, std::size_t N, int M, SigmaMode mode = SigmaMode::cesaro) {
  const KernelSpec spec{1.0, 1.0};
  Grid g(P, N);
  auto k = build_smoothed_kernel(spec, make_periodization(spec, P, M), g, mode);
  auto s = project_initial(InitialProfile::arctan(), g);
  return {g, std::move(k), std::move(s)};
}

SchemeConfig config(double dt, double T) {
  SchemeConfig c;
  c.dt = dt;
  c.T = T;
  return c;
}

}  // namespace

TEST_CASE("velocity field") {
  auto s = arctan_setup(10.0, 32, 16);
  const std::size_t R = s.grid.ring_size();
  std::mt19937_64 rng(5);
  std::normal_distribution<double> d;

  std::vector<double> zero(R, 0.0);
  CHECK(oracle::sup_abs(velocity(zero, s.kernel, s.grid, VelocityMode::fft).lambda) == 0.0);

  const std::size_t k = 5;
  std::vector<double> e(R, 0.0);
  e[k] = 1.0;
  for (auto mode : {VelocityMode::fft, VelocityMode::direct}) {
    const auto lam = velocity(e, s.kernel, s.grid, mode).lambda;
    for (std::size_t i = 0; i < R; ++i) {
      const double ref = s.grid.dx() * s.kernel.samples[s.grid.wrap(static_cast<long long>(i) - static_cast<long long>(k))];
      CHECK(lam[i] == doctest::Approx(ref).epsilon(1e-12).scale(1e-3));
    }
  }

  std::vector<double> ones(R, 1.0);
  const auto lam1 = velocity(ones, s.kernel, s.grid, VelocityMode::direct).lambda;
  for (double l : lam1) CHECK(l == doctest::Approx(2.0 * 10.0 * s.kernel.coeff(0)).epsilon(1e-11));

  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> v(R);
    for (double& x : v) x = d(rng);
    const auto a = velocity(v, s.kernel, s.grid, VelocityMode::fft).lambda;
    const auto b = velocity(v, s.kernel, s.grid, VelocityMode::direct).lambda;
    const auto ref = oracle::convolve(s.kernel.samples, v, s.grid.dx());
    CHECK(oracle::sup_diff(a, b) <= 1e-10 * oracle::sup_abs(b));
    CHECK(oracle::sup_diff(b, ref) <= 1e-12 * oracle::sup_abs(ref));
    CHECK(oracle::sup_abs(b) <= 5.0 * 2.0 * oracle::sup_abs(v));
  }
  std::vector<double> bad(R + 1);
  CHECK_THROWS_AS(velocity(bad, s.kernel, s.grid, VelocityMode::fft), ConfigError);
}

TEST_CASE("theoretical CFL bounds") {
  const auto b0 = theoretical_cfl(4.0, 0.0, 2.0, 1.0);
  CHECK(std::isinf(b0.dt_max));
  CHECK(std::isfinite(b0.ratio_max));

  const auto b = theoretical_cfl(4.0, 0.02, 2.0, 1.0);
  const double e = std::exp(0.4);
  CHECK(b.dt_max == doctest::Approx(2.5 / (4.0 * e + 1.0)).epsilon(1e-14));
  CHECK(b.dt_max == doctest::Approx(0.3589).epsilon(1e-3));
  CHECK(b.ratio_max == doctest::Approx(std::min(1.0 / (4.0 * e + 1.0), 1.0 / (12.0 * e)) / 20.0).epsilon(1e-14));
  CHECK(theoretical_cfl(4.0, 0.02, 2.0, 2.0).dt_max < b.dt_max);

  const auto small = theoretical_cfl(0.01, 0.02, 2.0, 1.0);
  CHECK(small.dt_max == doctest::Approx(1.0 / (10.0 * 0.02 * 2.0 * (0.01 * e + 1.0))));

  const double dt = strict_time_step(b, 0.1, 1.0);
  CHECK(dt < b.dt_max);
  CHECK(dt / 0.1 < b.ratio_max);
  CHECK(std::abs(1.0 / dt - std::round(1.0 / dt)) < 1e-9);
}

TEST_CASE("scheme config validation") {
  CHECK_NOTHROW(config(0.02, 1400.0).validate());
  CHECK(config(0.02, 1400.0).step_count() == 70000);
  CHECK_THROWS_AS(config(0.3, 1.0).validate(), ConfigError);
  CHECK_THROWS_AS(config(0.0, 1.0).validate(), ConfigError);
  auto c = config(0.3, 1.0);
  c.time_mode = TimeMode::adaptive;
  CHECK_NOTHROW(c.validate());
  CHECK(cfl_mode_from_string("strict_paper") == CflMode::strict_paper);
  CHECK_THROWS_AS(velocity_mode_from_string("slow"), ConfigError);
  CHECK_THROWS_AS(time_mode_from_string("x"), ConfigError);
}

TEST_CASE("fixed-point step trivial cases") {
  const Grid g(5.0, 8);
  const auto z = zero_kernel(g, 4);
  auto s = project_initial(InitialProfile::arctan(), g);
  auto [next, st] = fixed_point_step(s, z, g, config(0.1, 1.0));
  CHECK(next.u == s.u);
  CHECK(st.iterations == 1);
  CHECK(st.converged);
  CHECK(next.n == 1);

  auto k = arctan_setup(5.0, 8, 4).kernel;
  State c{0, 0.0, std::vector<double>(16, 0.75), 0.0};
  auto [n2, st2] = fixed_point_step(c, k, g, config(0.1, 1.0));
  for (double u : n2.u) CHECK(u == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("first step of the reference run satisfies the convex-combination identity") {
  auto s = arctan_setup(50.0, 500, 400);
  const double dt = 0.02;
  auto [next, st] = fixed_point_step(s.initial, s.kernel, s.grid, config(dt, 1400.0));
  REQUIRE(st.converged);
  CHECK(st.contraction < 1.0);
  CHECK(st.scheme_residual < 10.0 * 1e-12 / dt);
  const auto lam = velocity(next.u, s.kernel, s.grid, VelocityMode::direct).lambda;
  const auto th0 = discrete_gradient(s.initial.u, s.grid);
  const auto th1 = discrete_gradient(next.u, s.grid);
  const double L = s.initial.L_P;
  const double r = dt / s.grid.dx();
  const std::size_t R = s.grid.ring_size();
  double worst = 0.0;
  for (std::size_t i = 0; i < R; ++i) {
    const std::size_t ip = (i + 1) % R, im = (i + R - 1) % R;
    const double a1 = r * std::max(lam[ip], 0.0);
    const double a2 = r * std::max(-lam[i], 0.0);
    const double a3 = 1.0 - r * (std::max(lam[i], 0.0) + std::max(-lam[ip], 0.0));
    CHECK(a3 >= 0.0);
    const double rhs = a1 * (th0[ip] + L) + a2 * (th0[im] + L) + a3 * (th0[i] + L);
    worst = std::max(worst, std::abs(th1[i] + L - rhs));
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("non-convergence is reported") {
  auto s = arctan_setup(10.0, 32, 16);
  auto c = config(0.05, 1.0);
  c.fixed_point_max_iter = 1;
  auto [next, st] = fixed_point_step(s.initial, s.kernel, s.grid, c);
  CHECK_FALSE(st.converged);
  CHECK_THROWS_AS(advance_uniform(s.initial, s.kernel, s.grid, c), NumericalError);
  c.time_mode = TimeMode::adaptive;
  c.dt = 0.01;
  CHECK_THROWS_AS(advance_adaptive(s.initial, s.kernel, s.grid, c), NumericalError);
}

TEST_CASE("uniform advance") {
  SUBCASE("zero kernel leaves the state unchanged") {
    const Grid g(5.0, 8);
    const auto z = zero_kernel(g, 4);
    const auto s = project_initial(InitialProfile::arctan(), g);
    int calls = 0;
    const auto f = advance_uniform(s, z, g, config(0.25, 5.0), [&](const StepEvent&) { ++calls; });
    CHECK(calls == 20);
    CHECK(f.u == s.u);
    CHECK(f.t == doctest::Approx(5.0));
  }
  SUBCASE("T must be a multiple of dt") {
    auto s = arctan_setup(10.0, 32, 16);
    CHECK_THROWS_AS(advance_uniform(s.initial, s.kernel, s.grid, config(0.3, 1.0)), ConfigError);
  }
  SUBCASE("restart from a serialized state is bitwise identical") {
    auto s = arctan_setup(10.0, 100, 50);
    const auto c = config(0.02, 0.2);
    const State full = advance_uniform(s.initial, s.kernel, s.grid, c);
    CHECK(full.n == 10);
    std::stringstream buf;
    advance_uniform(s.initial, s.kernel, s.grid, c, [&](const StepEvent& ev) {
      if (ev.next.n == 5) write_state(buf, ev.next);
    });
    const State mid = read_state(buf);
    CHECK(mid.n == 5);
    const State resumed = advance_uniform(mid, s.kernel, s.grid, c);
    CHECK(resumed.u == full.u);
    CHECK(resumed.t == full.t);
    for (auto mode : {VelocityMode::direct}) {
      auto cd = c;
      cd.velocity_mode = mode;
      const State a = advance_uniform(s.initial, s.kernel, s.grid, cd);
      const State b = advance_uniform(s.initial, s.kernel, s.grid, cd);
      CHECK(a.u == b.u);
      CHECK(oracle::sup_diff(a.u, full.u) < 1e-12);
    }
  }
}

TEST_CASE("state serialization") {
  State s{42, 1.25, {1.0, -2.0, 3.5e-300, 7.0}, 0.125};
  std::stringstream buf;
  write_state(buf, s);
  CHECK(read_state(buf) == s);
  std::stringstream junk("not a state");
  CHECK_THROWS_AS(read_state(junk), ConfigError);
}

TEST_CASE("adaptive advance") {
  SUBCASE("flat problem keeps the initial step") {
    const Grid g(5.0, 8);
    const auto z = zero_kernel(g, 4);
    State s{0, 0.0, std::vector<double>(16, 1.0), 0.0};
    auto c = config(0.1, 1.05);
    c.time_mode = TimeMode::adaptive;
    std::vector<double> dts;
    const auto f = advance_adaptive(s, z, g, c, [&](const StepEvent& ev) { dts.push_back(ev.dt); });
    REQUIRE(dts.size() == 11);
    for (std::size_t i = 0; i + 1 < dts.size(); ++i) CHECK(dts[i] == 0.1);
    CHECK(dts.back() == doctest::Approx(0.05));
    CHECK(f.t == 1.05);
  }
  SUBCASE("steps are nonincreasing and the run matches a uniform run") {
    auto s = arctan_setup(10.0, 50, 16);
    auto c = config(0.004, 1.0);
    c.time_mode = TimeMode::adaptive;
    std::vector<double> dts;
    const auto fa = advance_adaptive(s.initial, s.kernel, s.grid, c,
                                     [&](const StepEvent& ev) { dts.push_back(ev.dt); });
    CHECK(fa.t == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t i = 0; i + 2 < dts.size(); ++i) CHECK(dts[i + 1] <= dts[i]);
    const double dmin = *std::min_element(dts.begin(), dts.end() - 1);
    const double steps = std::ceil(1.0 / dmin);
    const auto fu = advance_uniform(s.initial, s.kernel, s.grid, config(1.0 / steps, 1.0));
    CHECK(oracle::sup_diff(fa.u, fu.u) <= 10.0 * dmin);
  }
  SUBCASE("initial step must respect the adaptive bound") {
    auto s = arctan_setup(10.0, 50, 16);
    auto c = config(1.0, 1.0);
    c.time_mode = TimeMode::adaptive;
    CHECK_THROWS_AS(advance_adaptive(s.initial, s.kernel, s.grid, c), ConfigError);
  }
}

TEST_CASE("Q1 reconstruction") {
  const Grid g(2.0, 2);
  std::vector<State> st{{0, 0.0, {0.0, 1.0, 2.0, 3.0}, 0.0}, {1, 0.5, {4.0, 5.0, 6.0, 7.0}, 0.0}};
  CHECK(q1_reconstruct(st, g, g.x(2), 0.0) == 2.0);
  CHECK(q1_reconstruct(st, g, g.x(3), 0.5) == 7.0);
  CHECK(q1_reconstruct(st, g, -1.5, 0.0) == doctest::Approx(0.5));
  CHECK(q1_reconstruct(st, g, -1.5, 0.25) == doctest::Approx(2.5));
  CHECK(q1_reconstruct(st, g, 1.5, 0.0) == doctest::Approx(1.5));
  CHECK(q1_reconstruct(st, g, 1.5 + 4.0, 0.0) == doctest::Approx(1.5));
  CHECK_THROWS_AS(q1_reconstruct(st, g, 0.0, 0.7), ConfigError);
  CHECK_THROWS_AS(q1_reconstruct(std::vector<State>{}, g, 0.0, 0.0), ConfigError);
}

TEST_CASE("time refinement reduces the reconstruction gap") {
  auto s = arctan_setup(10.0, 50, 16);
  std::vector<std::vector<State>> runs;
  for (double dt : {0.05, 0.025, 0.0125}) {
    std::vector<State> states{s.initial};
    advance_uniform(s.initial, s.kernel, s.grid, config(dt, 1.0),
                    [&](const StepEvent& ev) { states.push_back(ev.next); });
    runs.push_back(std::move(states));
  }
  auto gap = [&](std::size_t a, std::size_t b) {
    double m = 0.0;
    for (const State& c : runs[0]) {
      for (std::size_t i = 0; i < s.grid.ring_size(); ++i) {
        const double x = s.grid.x(static_cast<long long>(i));
        m = std::max(m, std::abs(q1_reconstruct(runs[a], s.grid, x, c.t) -
                                 q1_reconstruct(runs[b], s.grid, x, c.t)));
      }
    }
    return m;
  };
  CHECK(gap(1, 2) < gap(0, 1));
}
