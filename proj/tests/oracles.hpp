#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the library's numerical code paths.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

namespace oracle {

inline constexpr double pi = std::numbers::pi;

/// alpha(m) from alpha(0) = 1, alpha(1) = 2, alpha(m) = 2 pi / m alpha(m - 2).
inline double alpha(int m) {
  if (m == 0) return 1.0;
  if (m == 1) return 2.0;
  return 2.0 * pi / m * alpha(m - 2);
}

/// Indices with |x_i - a| <= r by direct scan.
inline std::vector<std::size_t> linear_scan(const std::vector<double>& coords, int dim, const std::vector<double>& a,
                                            double r) {
  std::vector<std::size_t> out;
  const std::size_t n = coords.size() / dim;
  for (std::size_t i = 0; i < n; ++i) {
    double d2 = 0.0;
    for (int k = 0; k < dim; ++k) d2 += (coords[i * dim + k] - a[k]) * (coords[i * dim + k] - a[k]);
    if (d2 <= r * r) out.push_back(i);
  }
  return out;
}

/// Length of the unit circle inside the closed disc B((ax, ay), r), by
/// summing over `steps` equal arcs.
inline double circle_arc_in_ball(double ax, double ay, double r, int steps = 200000) {
  double total = 0.0;
  const double dt = 2.0 * pi / steps;
  for (int i = 0; i < steps; ++i) {
    const double t = (i + 0.5) * dt;
    const double dx = std::cos(t) - ax, dy = std::sin(t) - ay;
    if (dx * dx + dy * dy <= r * r) total += dt;
  }
  return total;
}

/// Largest ||V|| B(a, s) / (2 s) for the unit circle over a dense grid of
/// centers in [-1.5, 1.5]^2 and radii in [s_min, s_max], with closed-form arc
/// lengths.
inline double circle_maximal_sup(double s_min, double s_max, int centers_per_axis = 31, int radii = 200) {
  auto arc = [](double ax, double ay, double s) {
    const double d = std::hypot(ax, ay);
    if (s >= d + 1.0) return 2.0 * pi;
    if (s <= std::abs(1.0 - d)) return 0.0;
    if (d == 0.0) return s >= 1.0 ? 2.0 * pi : 0.0;
    // Angle at the origin between the center direction and an intersection point.
    const double c = (1.0 + d * d - s * s) / (2.0 * d);
    return 2.0 * std::acos(std::clamp(c, -1.0, 1.0));
  };
  double best = 0.0;
  for (int i = 0; i < centers_per_axis; ++i)
    for (int j = 0; j < centers_per_axis; ++j) {
      const double ax = -1.5 + 3.0 * i / (centers_per_axis - 1);
      const double ay = -1.5 + 3.0 * j / (centers_per_axis - 1);
      // Log-spaced radii plus the radii where the arc length saturates.
      std::vector<double> candidates{1.0 + std::hypot(ax, ay), std::abs(1.0 - std::hypot(ax, ay))};
      for (int k = 0; k < radii; ++k) candidates.push_back(s_min * std::pow(s_max / s_min, double(k) / (radii - 1)));
      for (double s : candidates)
        if (s >= s_min && s <= s_max) best = std::max(best, arc(ax, ay, s) / (2.0 * s));
    }
  return best;
}

/// Area of the lens where two discs of radii r1, r2 at distance d overlap.
inline double lens_area(double r1, double r2, double d) {
  if (d >= r1 + r2) return 0.0;
  if (d <= std::abs(r1 - r2)) return pi * std::pow(std::min(r1, r2), 2);
  const double a1 = r1 * r1 * std::acos((d * d + r1 * r1 - r2 * r2) / (2 * d * r1));
  const double a2 = r2 * r2 * std::acos((d * d + r2 * r2 - r1 * r1) / (2 * d * r2));
  const double k = 0.5 * std::sqrt((-d + r1 + r2) * (d + r1 - r2) * (d - r1 + r2) * (d + r1 + r2));
  return a1 + a2 - k;
}

/// Volume of the lens where two 3-balls overlap.
inline double lens_volume(double r1, double r2, double d) {
  if (d >= r1 + r2) return 0.0;
  if (d <= std::abs(r1 - r2)) return 4.0 / 3.0 * pi * std::pow(std::min(r1, r2), 3);
  return pi * std::pow(r1 + r2 - d, 2) * (d * d + 2 * d * (r1 + r2) - 3 * (r1 - r2) * (r1 - r2)) / (12 * d);
}

/// sup{y : mass{f <= y} <= lambda * total} located by bisection on the real
/// line with brute-force mass counting.
inline double median_by_bisection(const std::vector<double>& values, const std::vector<double>& weights,
                                  double lambda) {
  double total = 0.0;
  for (double w : weights) total += w;
  auto below = [&](double y) {
    double s = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i)
      if (values[i] <= y) s += weights[i];
    return s;
  };
  double lo = *std::min_element(values.begin(), values.end()) - 1.0;
  double hi = *std::max_element(values.begin(), values.end()) + 1.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (below(mid) <= lambda * total ? lo : hi) = mid;
  }
  return hi;
}

/// sup_d d * mass{f >= d}^(1/p) by trying every atom value as the threshold.
inline double weak_norm(const std::vector<double>& weights, const std::vector<double>& values, double p) {
  double best = 0.0;
  for (double d : values) {
    if (d <= 0.0) continue;
    double mass = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i)
      if (values[i] >= d) mass += weights[i];
    best = std::max(best, d * std::pow(mass, 1.0 / p));
  }
  return best;
}

/// Midpoint rule for the integral over y in (0, max f) of mass{f > y}^(1/p).
inline double layer_integral(const std::vector<double>& weights, const std::vector<double>& values, double p,
                             int steps = 200000) {
  const double top = *std::max_element(values.begin(), values.end());
  if (top <= 0.0) return 0.0;
  std::vector<std::pair<double, double>> sorted;
  for (std::size_t i = 0; i < values.size(); ++i) sorted.emplace_back(values[i], weights[i]);
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> tail(sorted.size() + 1, 0.0);
  for (std::size_t i = sorted.size(); i-- > 0;) tail[i] = tail[i + 1] + sorted[i].second;
  double total = 0.0;
  const double dy = top / steps;
  std::size_t j = 0;
  for (int k = 0; k < steps; ++k) {
    const double y = (k + 0.5) * dy;
    while (j < sorted.size() && sorted[j].first <= y) ++j;
    total += dy * std::pow(tail[j], 1.0 / p);
  }
  return total;
}

/// Geometric check of the iteration lemma's conclusion at one point.
inline bool iteration_conclusion(double a, double kappa, double lambda, double mu, double d) {
  return std::pow(a, 1.0 - mu) <= kappa * std::pow(d, -mu) * std::pow(1.0 / lambda, mu * mu / (1.0 - mu)) * (1 + 1e-12);
}

}  // namespace oracle
