#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace dislo {

/// Uniform periodic ring of 2N nodes over [-P, P).
///
/// Node i sits at x_i = -P + i*dx, dx = P/N. Indices are taken modulo 2N so
/// x_{i+2N} is the same node as x_i.
class Grid {
 public:
  Grid(double half_period, std::size_t n);

  double half_period() const noexcept { return P_; }
  std::size_t n() const noexcept { return N_; }
  double dx() const noexcept { return dx_; }
  std::size_t ring_size() const noexcept { return 2 * N_; }

  /// Maps any signed index onto {0, ..., 2N-1}.
  std::size_t wrap(long long i) const noexcept;
  double x(long long i) const noexcept;
  /// Signed lag of ring index j, in [-N, N); the lag distance is lag(j)*dx.
  long long lag(std::size_t j) const noexcept;

 private:
  double P_;
  std::size_t N_;
  double dx_;
};

/// Discrete solution at one time level.
struct State {
  std::size_t n = 0;
  double t = 0.0;
  std::vector<double> u;
  double L_P = 0.0;

  friend bool operator==(const State&, const State&) = default;
};

/// Nondecreasing initial profile v0 on the real line.
class InitialProfile {
 public:
  enum class Kind { arctan, user_table };

  /// v0(x) = (2/pi) atan(x) + 1.
  static InitialProfile arctan();
  /// Linear interpolation through (x, v0) pairs, clamped outside the table.
  /// x must be strictly increasing and v0 nondecreasing.
  static InitialProfile table(std::vector<std::pair<double, double>> points);
  /// Two-column CSV (x, v0); a non-numeric first line is treated as a header.
  static InitialProfile load_csv(const std::string& path);

  Kind kind() const noexcept { return kind_; }
  double operator()(double x) const;
  /// sup |v0| over the real line.
  double sup_norm() const;
  const std::vector<std::pair<double, double>>& points() const noexcept { return points_; }

 private:
  explicit InitialProfile(Kind kind) : kind_(kind) {}

  Kind kind_;
  std::vector<std::pair<double, double>> points_;
};

/// Mean slope L^P = (v0(P) - v0(-P)) / (2P).
double slope_LP(const InitialProfile& profile, double P);

/// Samples u_i = v0(x_i) - L^P x_i. Throws ConfigError when some discrete
/// gradient (seam included) has theta + L^P < -1e-12.
State project_initial(const InitialProfile& profile, const Grid& grid);

/// theta_{i+1/2} = (u_{i+1} - u_i)/dx with circular wrap.
std::vector<double> discrete_gradient(std::span<const double> u, const Grid& grid);

}  // namespace dislo
