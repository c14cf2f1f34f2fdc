#include "varitool/lemmas.hpp"

#include "varitool/errors.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace varitool {

namespace {

void check_iteration_params(double kappa, double lambda, double mu) {
  if (!(kappa >= 0.0 && std::isfinite(kappa))) throw DomainError("iteration lemma: need 0 <= kappa < inf");
  if (!(lambda > 0.0 && lambda < 1.0)) throw DomainError("iteration lemma: need 0 < lambda < 1");
  if (!(mu > 0.0 && mu < 1.0)) throw DomainError("iteration lemma: need 0 < mu < 1");
}

// Grid shift k with lambda = q^(-k).
int lambda_shift(const std::vector<double>& grid, double lambda) {
  if (grid.size() < 2) throw ArgumentError("iteration lemma: grid needs at least two points");
  const double q = grid[1] / grid[0];
  if (!(grid[0] > 0.0 && q > 1.0)) throw ArgumentError("iteration lemma: grid must be positive and increasing");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (std::abs(grid[i] / grid[i - 1] - q) > 1e-9 * q) throw ArgumentError("iteration lemma: grid is not geometric");
  const double k = -std::log(lambda) / std::log(q);
  const long rounded = std::lround(k);
  if (rounded < 1 || std::abs(std::pow(q, -double(rounded)) - lambda) > 1e-9 * lambda)
    throw ArgumentError("iteration lemma: lambda must be a negative integer power of the grid ratio");
  return static_cast<int>(rounded);
}

}  // namespace

double iteration_bound(double kappa, double lambda, double mu, double d) {
  check_iteration_params(kappa, lambda, mu);
  return kappa * std::pow(d, -mu) * std::pow(1.0 / lambda, mu * mu / (1.0 - mu));
}

std::vector<double> geometric_grid(double d0, double q, int count) {
  std::vector<double> grid(count);
  for (int i = 0; i < count; ++i) grid[i] = d0 * std::pow(q, i);
  return grid;
}

IterationCheck check_iteration(const std::vector<double>& grid, const std::vector<double>& a, double kappa, double lambda,
                               double mu) {
  check_iteration_params(kappa, lambda, mu);
  const int k = lambda_shift(grid, lambda);
  if (a.size() != grid.size()) throw ArgumentError("iteration lemma: value count differs from grid size");
  for (double x : a)
    if (!(x >= 0.0 && std::isfinite(x))) throw DomainError("iteration lemma: values must be finite and nonnegative");
  const int n = static_cast<int>(grid.size());
  const double q = grid[1] / grid[0];
  auto value = [&](int i) { return i < 0 ? a[0] : a[i]; };
  auto right_end = [&](int i) { return i + 1 < n ? grid[i + 1] : grid[n - 1] * q; };

  IterationCheck out;
  // Below d_0 the step function is a_0 and lambda d < d_0 as well.
  bool ok = a[0] <= kappa * std::pow(grid[0], -mu) * std::pow(a[0], mu);
  for (int i = 0; ok && i < n; ++i) ok = a[i] <= kappa * std::pow(right_end(i), -mu) * std::pow(value(i - k), mu);
  out.hypothesisHolds = ok;
  if (!ok) return out;
  for (int i = 0; i < n; ++i) {
    const double bound = iteration_bound(kappa, lambda, mu, right_end(i));
    const double lhs = std::pow(a[i], 1.0 - mu);
    const double ratio = bound > 0.0 ? lhs / bound : (lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    out.worstRatio = std::max(out.worstRatio, ratio);
    if (lhs > bound * (1.0 + 1e-12)) ++out.violations;
  }
  return out;
}

std::vector<double> admissible_iteration_instance(const std::vector<double>& grid, double kappa, double lambda, double mu,
                                                  std::mt19937_64& rng) {
  const int k = lambda_shift(grid, lambda);
  const int n = static_cast<int>(grid.size());
  const double q = grid[1] / grid[0];
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const bool monotone = unit(rng) < 0.5;
  std::vector<double> a(n, 0.0);
  a[0] = 0.999 * unit(rng) * std::pow(kappa * std::pow(grid[1], -mu), 1.0 / (1.0 - mu));
  for (int i = 1; i < n; ++i) {
    const double right = i + 1 < n ? grid[i + 1] : grid[n - 1] * q;
    const double prev = a[std::max(i - k, 0)];
    const double u = unit(rng) < 0.1 ? 1.0 : unit(rng);
    a[i] = u * (kappa * std::pow(right, -mu) * std::pow(prev, mu));
    if (monotone) a[i] = std::min(a[i], a[i - 1]);
  }
  return a;
}

CalculusResult calculus_find_t(const std::function<double(double)>& f, const std::function<double(double)>& g, double s,
                               double m, const CalculusOptions& options) {
  if (!(s > 0.0 && m > 0.0)) throw DomainError("calculus lemma: need s > 0 and m > 0");
  auto phi = [&](double t) { return std::pow(t, -m) * f(t); };
  if (!(phi(s) >= 0.75)) throw HypothesisError("calculus lemma: s^(-m) f(s) < 3/4");

  // r = sup{t : t^(-m) f(t) >= 1/3}, located on a geometric scan then bisected.
  const int scan = 4096;
  const double top = s * options.searchFactor;
  int last = 0;
  for (int j = 1; j <= scan; ++j) {
    if (phi(s * std::pow(options.searchFactor, double(j) / scan)) >= 1.0 / 3.0) last = j;
  }
  if (last == scan) throw HypothesisError("calculus lemma: r is not finite on the search range");
  double lo = s * std::pow(options.searchFactor, double(last) / scan);
  double hi = std::min(top, s * std::pow(options.searchFactor, double(last + 1) / scan));
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (phi(mid) >= 1.0 / 3.0 ? lo : hi) = mid;
  }
  const double r = lo;

  // Integral hypothesis on a fine grid, trapezoid rule from r backwards.
  {
    const int pts = options.gridPoints * 8;
    std::vector<double> ts(pts + 1), integrand(pts + 1);
    for (int i = 0; i <= pts; ++i) {
      ts[i] = s + (r - s) * i / pts;
      const double gv = g(ts[i]);
      if (!(gv >= 0.0)) throw HypothesisError("calculus lemma: g must be nonnegative");
      integrand[i] = std::pow(ts[i], -m) * gv;
    }
    const double phi_r = phi(r);
    double tail = 0.0;
    for (int i = pts; i >= 0; --i) {
      if (i < pts) tail += 0.5 * (ts[i + 1] - ts[i]) * (integrand[i] + integrand[i + 1]);
      const double lhs = phi(ts[i]);
      if (lhs > phi_r + tail + 1e-9 * std::max(1.0, lhs))
        throw HypothesisError("calculus lemma: integral hypothesis fails on the grid");
    }
  }

  const double factor = std::pow(5.0, m) * r;
  int points = options.gridPoints;
  for (int level = 0; level <= options.refinements; ++level, points *= 4) {
    for (int i = 0; i <= points; ++i) {
      const double t = s + (r - s) * i / points;
      if (f(5.0 * t) <= factor * g(t)) return {t, r, level};
    }
  }
  throw ResolutionError("calculus lemma: no witness on the refined grid; increase gridPoints");
}

CalculusInstance admissible_calculus_instance(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  CalculusInstance inst;
  inst.m = 1.0 + 2.0 * unit(rng);
  inst.s = std::exp(std::log(0.1) + std::log(100.0) * unit(rng));
  const double m = inst.m;
  const double s = inst.s;
  const double a1 = 0.75 + 1.25 * unit(rng);
  const double a2 = unit(rng) < 0.5 ? 0.0 : 1.5 * unit(rng);
  const double b1 = m * (0.3 + 0.6 * unit(rng));
  const double b2 = m * (0.3 + 0.6 * unit(rng));
  const double slack = 1.05 + 0.95 * unit(rng);
  // t^(-m) f(t) = a1 (t/s)^(-b1) + a2 (t/s)^(-b2) with b < m keeps f nondecreasing.
  inst.f = [=](double t) { return std::pow(t, m) * (a1 * std::pow(t / s, -b1) + a2 * std::pow(t / s, -b2)); };
  inst.g = [=](double u) {
    const double dphi = a1 * b1 / s * std::pow(u / s, -b1 - 1.0) + a2 * b2 / s * std::pow(u / s, -b2 - 1.0);
    return std::pow(u, m) * dphi * slack;
  };
  return inst;
}

double weak_lp_bound(double mass, double kappa, double p, double q) {
  if (!(q >= 1.0 && q < p && std::isfinite(p))) throw DomainError("weak-Lp embedding: need 1 <= q < p < inf");
  return std::pow(1.0 - q / p, -1.0 / q) * std::pow(mass, 1.0 / q - 1.0 / p) * kappa;
}

WeakLpResult weak_lp_check(const std::vector<double>& weights, const std::vector<double>& values, double p, double q) {
  if (weights.size() != values.size()) throw ArgumentError("weak-Lp embedding: size mismatch");
  std::vector<std::pair<double, double>> vw;
  WeakLpResult out;
  double sum = 0.0;
  for (std::size_t j = 0; j < values.size(); ++j) {
    if (!(values[j] >= 0.0)) throw DomainError("weak-Lp embedding: values must be nonnegative");
    if (values[j] > 0.0) {
      vw.emplace_back(values[j], weights[j]);
      out.mass += weights[j];
      sum += weights[j] * std::pow(values[j], q);
    }
  }
  std::sort(vw.begin(), vw.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
  double above = 0.0;
  for (std::size_t j = 0; j < vw.size();) {
    const double v = vw[j].first;
    while (j < vw.size() && vw[j].first == v) above += vw[j++].second;
    out.kappa = std::max(out.kappa, v * std::pow(above, 1.0 / p));
  }
  out.lhs = std::pow(sum, 1.0 / q);
  out.bound = weak_lp_bound(out.mass, out.kappa, p, q);
  return out;
}

WeakLpResult weak_lp_check_decreasing(const std::function<double(double)>& f, double length, double p, double q) {
  if (!(length > 0.0)) throw DomainError("weak-Lp embedding: length must be positive");
  WeakLpResult out;
  boost::math::quadrature::tanh_sinh<double> integrator;
  const double integral = integrator.integrate([&](double x) { return std::pow(f(x), q); }, 0.0, length);
  out.lhs = std::pow(integral, 1.0 / q);
  out.mass = length;
  // For continuous nonincreasing f, {f >= f(t)} contains (0, t].
  auto k = [&](double t) { return f(t) * std::pow(t, 1.0 / p); };
  const int samples = 2000;
  double best_t = length;
  for (int i = 0; i <= samples; ++i) {
    const double t = length * std::pow(1e-12, double(i) / samples);
    if (k(t) > k(best_t)) best_t = t;
  }
  const double step = std::pow(1e-12, 1.0 / samples);
  double lo = best_t * step;
  double hi = std::min(length, best_t / step);
  const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 100; ++it) {
    const double c = hi - golden * (hi - lo);
    const double d = lo + golden * (hi - lo);
    if (k(c) > k(d)) {
      hi = d;
    } else {
      lo = c;
    }
  }
  out.kappa = std::max(k(best_t), k(0.5 * (lo + hi)));
  out.bound = weak_lp_bound(out.mass, out.kappa, p, q);
  return out;
}

SuperlevelIntegral superlevel_integral(const std::vector<double>& weights, const std::vector<double>& values, double p) {
  if (weights.size() != values.size()) throw ArgumentError("superlevel integral: size mismatch");
  if (!(p >= 1.0)) throw DomainError("superlevel integral: need p >= 1");
  std::vector<std::pair<double, double>> vw;
  for (std::size_t j = 0; j < values.size(); ++j) {
    if (!(values[j] >= 0.0)) throw DomainError("superlevel integral: values must be nonnegative");
    if (values[j] > 0.0 && weights[j] > 0.0) vw.emplace_back(values[j], weights[j]);
  }
  std::sort(vw.begin(), vw.end());
  SuperlevelIntegral out;
  const bool sup_norm = std::isinf(p);
  if (vw.empty()) return out;
  double sum = 0.0;
  for (const auto& [v, w] : vw) sum += w * std::pow(v, p);
  out.lhs = sup_norm ? vw.back().first : std::pow(sum, 1.0 / p);
  // phi{f > y} is constant on [y_{i-1}, y_i) and equals the mass at values >= y_i.
  std::vector<double> tail(vw.size() + 1, 0.0);
  for (std::size_t j = vw.size(); j-- > 0;) tail[j] = tail[j + 1] + vw[j].second;
  double prev = 0.0;
  for (std::size_t j = 0; j < vw.size();) {
    const double y = vw[j].first;
    const double mass = tail[j];
    out.rhs += (y - prev) * (sup_norm ? 1.0 : std::pow(mass, 1.0 / p));
    prev = y;
    while (j < vw.size() && vw[j].first == y) ++j;
  }
  return out;
}

}  // namespace varitool
