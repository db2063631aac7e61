#include "dislo/grid.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "dislo/error.hpp"

namespace dislo {

Grid::Grid(double half_period, std::size_t n) : P_(half_period), N_(n), dx_(half_period / n) {
  if (!(half_period > 0.0) || !std::isfinite(half_period)) {
    throw ConfigError("grid: P must be positive and finite");
  }
  if (n == 0) throw ConfigError("grid: N must be a positive integer");
}

std::size_t Grid::wrap(long long i) const noexcept {
  const auto r = static_cast<long long>(2 * N_);
  long long k = i % r;
  if (k < 0) k += r;
  return static_cast<std::size_t>(k);
}

double Grid::x(long long i) const noexcept {
  return -P_ + static_cast<double>(wrap(i)) * dx_;
}

long long Grid::lag(std::size_t j) const noexcept {
  const auto jj = static_cast<long long>(j % (2 * N_));
  return jj < static_cast<long long>(N_) ? jj : jj - static_cast<long long>(2 * N_);
}

InitialProfile InitialProfile::arctan() { return InitialProfile(Kind::arctan); }

InitialProfile InitialProfile::table(std::vector<std::pair<double, double>> points) {
  if (points.size() < 2) throw ConfigError("profile: table needs at least two points");
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto [x, v] = points[i];
    if (!std::isfinite(x) || !std::isfinite(v)) throw ConfigError("profile: non-finite table entry");
    if (i > 0) {
      if (!(x > points[i - 1].first)) throw ConfigError("profile: x must be strictly increasing");
      if (v < points[i - 1].second) throw ConfigError("profile: v0 must be nondecreasing");
    }
  }
  InitialProfile p(Kind::user_table);
  p.points_ = std::move(points);
  return p;
}

InitialProfile InitialProfile::load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("profile: cannot open " + path);
  std::vector<std::pair<double, double>> pts;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    double x = 0.0, v = 0.0;
    if (!(ss >> x >> v)) {
      if (first) {
        first = false;
        continue;
      }
      throw ConfigError("profile: malformed row in " + path + ": " + line);
    }
    first = false;
    pts.emplace_back(x, v);
  }
  return table(std::move(pts));
}

double InitialProfile::operator()(double x) const {
  if (kind_ == Kind::arctan) return 2.0 / std::numbers::pi * std::atan(x) + 1.0;
  if (x <= points_.front().first) return points_.front().second;
  if (x >= points_.back().first) return points_.back().second;
  auto it = std::upper_bound(points_.begin(), points_.end(), x,
                             [](double a, const auto& p) { return a < p.first; });
  const auto& [x1, v1] = *it;
  const auto& [x0, v0] = *(it - 1);
  const double s = (x - x0) / (x1 - x0);
  return v0 + s * (v1 - v0);
}

double InitialProfile::sup_norm() const {
  if (kind_ == Kind::arctan) return 2.0;
  double m = 0.0;
  for (const auto& [x, v] : points_) m = std::max(m, std::abs(v));
  return m;
}

double slope_LP(const InitialProfile& profile, double P) {
  if (!(P > 0.0)) throw ConfigError("slope_LP: P must be positive");
  return (profile(P) - profile(-P)) / (2.0 * P);
}

State project_initial(const InitialProfile& profile, const Grid& grid) {
  const double L = slope_LP(profile, grid.half_period());
  State s;
  s.L_P = L;
  s.u.resize(grid.ring_size());
  for (std::size_t i = 0; i < s.u.size(); ++i) {
    const double x = grid.x(static_cast<long long>(i));
    s.u[i] = profile(x) - L * x;
  }
  const auto theta = discrete_gradient(s.u, grid);
  for (std::size_t i = 0; i < theta.size(); ++i) {
    if (theta[i] + L < -1e-12) {
      throw ConfigError("profile: theta + L^P = " + std::to_string(theta[i] + L) + " at i=" +
                        std::to_string(i) + " (u0 + L^P x must be nondecreasing on [-P, P))");
    }
  }
  return s;
}

std::vector<double> discrete_gradient(std::span<const double> u, const Grid& grid) {
  const std::size_t R = u.size();
  std::vector<double> theta(R);
  const double inv = 1.0 / grid.dx();
  for (std::size_t i = 0; i + 1 < R; ++i) theta[i] = (u[i + 1] - u[i]) * inv;
  if (R > 0) theta[R - 1] = (u[0] - u[R - 1]) * inv;
  return theta;
}

}  // namespace dislo
