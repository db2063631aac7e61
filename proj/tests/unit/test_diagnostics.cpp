#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "dislo/diagnostics.hpp"
#include "dislo/error.hpp"
#include "oracles.hpp"

using namespace dislo;

namespace {

constexpr double kE = std::numbers::e;

std::vector<double> random_nonneg(std::mt19937_64& rng, std::size_t n) {
  std::exponential_distribution<double> d(1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double scale = std::pow(10.0, 4.0 * u(rng) - 2.0);
  std::vector<double> w(n);
  for (double& x : w) x = u(rng) < 0.2 ? 0.0 : scale * d(rng);
  return w;
}

}  // namespace

TEST_CASE("entropy density") {
  CHECK(entropy_f(0.0) == 0.0);
  CHECK(entropy_f(0.2) == 0.0);
  CHECK(entropy_f(1.0 / kE) == doctest::Approx(0.0).scale(1.0));
  CHECK(entropy_f(1.0) == doctest::Approx(1.0 / kE).epsilon(1e-15));
  CHECK(entropy_f(kE) == doctest::Approx(kE + 1.0 / kE).epsilon(1e-15));
  CHECK_THROWS_AS(entropy_f(-1e-3), ConfigError);

  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 5.0), l(0.0, 1.0);
  for (int k = 0; k < 1000; ++k) {
    const double a = u(rng), b = u(rng), s = l(rng);
    CHECK(entropy_f(s * a + (1 - s) * b) <= s * entropy_f(a) + (1 - s) * entropy_f(b) + 1e-14);
    CHECK(entropy_f(a) >= 0.0);
  }
}

TEST_CASE("discrete entropy") {
  const Grid g(3.0, 6);
  std::vector<double> flat(12, 0.4);
  CHECK(discrete_entropy(flat, 1.0, g) == doctest::Approx(6.0 / kE));
  CHECK(discrete_entropy(flat, 0.2, g) == 0.0);
  CHECK(discrete_entropy(flat, 0.0, g) == 0.0);

  const Grid a(10.0, 100);
  const auto s = project_initial(InitialProfile::arctan(), a);
  const auto ref = oracle::integrate(
      [](double x) { return entropy_f((2.0 / std::numbers::pi) / (1.0 + x * x)); }, -10.0, 10.0,
      1e-12, 40);
  CHECK(ref > 0.0);
  CHECK(discrete_entropy(s.u, s.L_P, a) == doctest::Approx(ref).epsilon(0.02));
}

TEST_CASE("total variation") {
  const std::vector<double> v{0.0, 1.0, 3.0, 2.0};
  CHECK(total_variation(v) == 6.0);
  CHECK(total_variation_open(v) == 4.0);
  CHECK(total_variation(std::vector<double>{}) == 0.0);
  CHECK(total_variation_open(std::vector<double>{5.0}) == 0.0);
}

TEST_CASE("zeta bound") {
  CHECK(zeta_bound(0.0, 1.0, 0.0) == 0.0);
  CHECK(zeta_bound(0.0, 1.0, 2.0) == doctest::Approx(10.0 / (kE * std::numbers::ln2)));
  const double z = zeta_bound(2.0, 1.0, 2.0);
  CHECK(z == doctest::Approx(10.0 * std::exp(40.0) * (1.0 / (kE * std::numbers::ln2) + 2.0)));
  CHECK(zeta_bound(0.1, 2.0, 2.0) > zeta_bound(0.1, 1.0, 2.0));
}

TEST_CASE("DFT sign check") {
  const KernelSpec spec{1.0, 1.0};
  for (auto mode : {SigmaMode::cesaro, SigmaMode::cell_average}) {
    const Grid g(10.0, 64);
    const auto k = build_smoothed_kernel(spec, make_periodization(spec, 10.0, 32), g, mode);
    const auto rep = dft_sign_check(k.samples);
    CHECK(rep.pass);
    CHECK(rep.max_real <= 1e-12);
    CHECK(rep.max_abs_imag <= 1e-12);
    const auto X = oracle::dft(k.samples);
    for (std::size_t j = 0; j < X.size(); ++j) {
      CHECK(std::abs(rep.real_parts[j] - X[j].real() / 128.0) <= 1e-15);
    }
  }
  const auto zero = dft_sign_check(std::vector<double>(16, 0.0));
  CHECK(zero.pass);
  CHECK(zero.max_real == 0.0);

  std::vector<double> delta(16, 0.0);
  delta[0] = 1.0;
  const auto bad = dft_sign_check(delta);
  CHECK_FALSE(bad.pass);
  CHECK(bad.max_real == doctest::Approx(1.0 / 16.0));

  std::vector<double> odd(16, 0.0);
  odd[1] = -1.0;
  CHECK_FALSE(dft_sign_check(odd).pass);
}

TEST_CASE("Zygmund norm") {
  const std::vector<double> ones(20, 1.0);
  const double dx = 0.1;
  const double ref = oracle::root(
      [](double mu) { return 2.0 / mu * std::log(kE + 1.0 / mu) - 1.0; }, 1.0, 10.0);
  CHECK(zygmund_norm(ones, dx) == doctest::Approx(ref).epsilon(1e-12));
  CHECK(zygmund_norm(std::vector<double>(8, 0.0), dx) == 0.0);
  CHECK_THROWS_AS(zygmund_norm(std::vector<double>{1.0, -1.0}, dx), ConfigError);

  std::mt19937_64 rng(31);
  for (int k = 0; k < 50; ++k) {
    const auto a = random_nonneg(rng, 64);
    const auto b = random_nonneg(rng, 64);
    std::vector<double> sum(64), sc(64);
    for (std::size_t i = 0; i < 64; ++i) {
      sum[i] = a[i] + b[i];
      sc[i] = 3.5 * a[i];
    }
    const double na = zygmund_norm(a, 0.05);
    CHECK(zygmund_norm(sc, 0.05) == doctest::Approx(3.5 * na).epsilon(1e-11));
    CHECK(zygmund_norm(sum, 0.05) <= (na + zygmund_norm(b, 0.05)) * (1.0 + 1e-12));
    double l1 = 0.0;
    for (double x : a) l1 += 0.05 * x;
    CHECK(na >= l1 * (1.0 - 1e-12));
  }
}

TEST_CASE("Orlicz-entropy inequalities on random inputs") {
  std::mt19937_64 rng(41);
  for (int k = 0; k < 100; ++k) {
    const auto w = random_nonneg(rng, 16 + 8 * (k % 10));
    const auto r = lemma_a1_check(w, 0.01 + 0.01 * (k % 7));
    CHECK(r.pass);
    CHECK(r.lhs1 <= r.rhs1);
    CHECK(r.lhs2 <= r.rhs2);
  }
  CHECK_THROWS_AS(lemma_a1_check(std::vector<double>{-1.0}, 1.0), ConfigError);
}

TEST_CASE("modulus of continuity probe") {
  CHECK(modulus_of_continuity(1.0, 1.0) == doctest::Approx(2.0 / std::log(2.0)));
  CHECK(modulus_of_continuity(0.01, 0.01) < modulus_of_continuity(0.1, 0.1));
  CHECK_THROWS_AS(modulus_of_continuity(0.0, 1.0), ConfigError);

  const Grid g(2.0, 4);
  std::vector<State> flat{{0, 0.0, std::vector<double>(8, 1.0), 0.0},
                          {1, 1.0, std::vector<double>(8, 1.0), 0.0}};
  CHECK(modulus_probe(flat, g, 0.5, 0.5) == 0.0);

  std::vector<State> ramp{{0, 0.0, std::vector<double>(8, 0.0), 0.0},
                          {1, 1.0, std::vector<double>(8, 1.0), 0.0}};
  CHECK(modulus_probe(ramp, g, 0.5, 0.5) == doctest::Approx(0.5 / modulus_of_continuity(0.5, 0.5)));
  CHECK_THROWS_AS(modulus_probe(std::span<const State>(ramp.data(), 1), g, 0.5, 0.5), ConfigError);
  CHECK_THROWS_AS(modulus_probe(ramp, g, 0.5, 2.0), ConfigError);
}

TEST_CASE("bound monitor on a short run") {
  const KernelSpec spec{1.0, 1.0};
  const Grid g(10.0, 100);
  const auto k = build_smoothed_kernel(spec, make_periodization(spec, 10.0, 50), g, SigmaMode::cesaro);
  const auto s0 = project_initial(InitialProfile::arctan(), g);
  SchemeConfig c;
  c.dt = 0.01;
  c.T = 0.2;
  BoundMonitor mon(s0, g, {k.kernel_l1, c.T, c.fixed_point_tol, 1e-12, 1e-10, false, true});
  CHECK(mon.records().size() == 1);
  CHECK(mon.records()[0].n == 0);
  CHECK(mon.tv0() == doctest::Approx(total_variation(s0.u)));
  CHECK(mon.zeta_run() == doctest::Approx(zeta_bound(s0.L_P, 0.2, 2.0)));
  advance_uniform(s0, k, g, c, mon.hook());
  CHECK(mon.records().size() == 21);
  CHECK(mon.total_violations() == 0);
  CHECK(mon.extremes().min_density >= -1e-12);
  CHECK(mon.extremes().max_contraction < 1.0);
  CHECK(mon.extremes().max_convex_error <= 1e-10);
  CHECK(mon.extremes().max_velocity_ratio <= 1.0);
  for (std::size_t i = 1; i < mon.records().size(); ++i) {
    CHECK(mon.records()[i].n == i);
    CHECK(mon.records()[i].entropy <= mon.entropy0() + mon.zeta_run() * mon.tv0() + 1e-9);
  }
}

TEST_CASE("bound monitor flags tampered steps") {
  const Grid g(2.0, 4);
  State prev{0, 0.0, {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7}, 0.0};
  const double d = 0.7 / 4.0;
  prev.L_P = d;
  State next = prev;
  next.n = 1;
  next.t = 0.1;
  next.u[3] = 5.0;
  StepStats st;
  st.iterations = 3;
  st.contraction = 1.5;
  st.converged = true;
  st.lambda.assign(8, 0.0);
  const BoundMonitor::Setup setup{1.0, 1.0, 1e-12, 1e-12, 1e-10, false, true};

  BoundMonitor mon(prev, g, setup);
  mon(StepEvent{prev, next, st, 0.1});
  const auto& counts = mon.violation_counts();
  CHECK(counts.count("positivity") == 1);
  CHECK(counts.count("linf") == 1);
  CHECK(counts.count("tau_identity") == 1);
  CHECK(counts.count("contraction") == 1);
  CHECK(mon.records().back().violations.size() == mon.total_violations());

  auto quiet = setup;
  quiet.check_contraction = false;
  BoundMonitor mon2(prev, g, quiet);
  mon2(StepEvent{prev, next, st, 0.1});
  CHECK(mon2.violation_counts().count("contraction") == 0);

  auto strict = setup;
  strict.abort_on_violation = true;
  BoundMonitor mon3(prev, g, strict);
  try {
    mon3(StepEvent{prev, next, st, 0.1});
    CHECK(false);
  } catch (const BoundViolation& e) {
    CHECK(e.bound() == "positivity");
  }
}
