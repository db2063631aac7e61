#pragma once

// Independent reference computations used only by the tests.

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <random>
#include <span>
#include <vector>

namespace oracle {

// Adaptive Gauss-Kronrod 7/15 on [a, b].
inline double gk15(const std::function<double(double)>& f, double a, double b, double& err,
                   double& roundoff) {
  static const double xgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                0.207784955007898467600689403773245, 0.0};
  static const double wgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
  static const double wg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                               0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double k = wgk[7] * fc;
  double g = wg[3] * fc;
  double kabs = wgk[7] * std::abs(fc);
  for (int j = 0; j < 7; ++j) {
    const double f1 = f(c - h * xgk[j]);
    const double f2 = f(c + h * xgk[j]);
    k += wgk[j] * (f1 + f2);
    kabs += wgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) g += wg[j / 2] * (f1 + f2);
  }
  err = std::abs((k - g) * h);
  // Error estimates below this are rounding noise.
  roundoff = 50.0 * 2.2e-16 * kabs * std::abs(h);
  return k * h;
}

inline double integrate_rec(const std::function<double(double)>& f, double a, double b, double tol,
                            int depth) {
  double err = 0.0, roundoff = 0.0;
  const double v = gk15(f, a, b, err, roundoff);
  if (err <= tol || err <= roundoff || depth > 40) return v;
  const double m = 0.5 * (a + b);
  return integrate_rec(f, a, m, 0.5 * tol, depth + 1) + integrate_rec(f, m, b, 0.5 * tol, depth + 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-14, int pieces = 1) {
  double s = 0.0;
  const double h = (b - a) / pieces;
  for (int k = 0; k < pieces; ++k) {
    s += integrate_rec(f, a + k * h, a + (k + 1) * h, tol / pieces, 0);
  }
  return s;
}

// Integral over the whole line via x = tan(s).
inline double integrate_line(const std::function<double(double)>& f, double tol = 1e-14) {
  auto g = [&](double s) {
    const double c = std::cos(s);
    return f(std::tan(s)) / (c * c);
  };
  const double e = 1e-9;
  return integrate(g, -std::numbers::pi / 2 + e, std::numbers::pi / 2 - e, tol, 64);
}

inline double pn_kernel(double A, double z, double x) {
  const double d = x * x + z * z;
  return A * (x * x - z * z) / (d * d);
}

inline std::vector<std::complex<double>> dft(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> X(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<long double> s = 0;
    for (std::size_t j = 0; j < n; ++j) {
      const long double a = -2.0L * std::numbers::pi_v<long double> *
                            static_cast<long double>((k * j) % n) / static_cast<long double>(n);
      s += static_cast<long double>(x[j]) * std::complex<long double>(std::cos(a), std::sin(a));
    }
    X[k] = std::complex<double>(static_cast<double>(s.real()), static_cast<double>(s.imag()));
  }
  return X;
}

inline std::vector<double> convolve(std::span<const double> k, std::span<const double> v, double scale) {
  const std::size_t n = v.size();
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    long double s = 0;
    for (std::size_t j = 0; j < n; ++j) s += static_cast<long double>(k[j]) * v[(i + n - j) % n];
    out[i] = static_cast<double>(scale * s);
  }
  return out;
}

inline double sup_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

inline double sup_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// Bisection on a monotone function with a sign change on [lo, hi].
inline double root(const std::function<double(double)>& f, double lo, double hi) {
  double flo = f(lo);
  for (int it = 0; it < 200; ++it) {
    const double m = 0.5 * (lo + hi);
    const double fm = f(m);
    if ((fm > 0) == (flo > 0)) {
      lo = m;
      flo = fm;
    } else {
      hi = m;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace oracle
