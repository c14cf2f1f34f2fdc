#include "varitool/fields.hpp"

#include "varitool/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace varitool {

namespace {

double e_neg_inv(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }
double e_neg_inv_derivative(double x) { return x > 0.0 ? std::exp(-1.0 / x) / (x * x) : 0.0; }

// sup over t >= 0 of t * cutoff(t).
double radial_sup(double inner, double outer) {
  auto g = [&](double t) { return t * smooth_cutoff(t, inner, outer); };
  const int samples = 4000;
  double best_t = inner;
  double best = g(inner);
  for (int i = 1; i <= samples; ++i) {
    const double t = inner + (outer - inner) * i / samples;
    if (g(t) > best) {
      best = g(t);
      best_t = t;
    }
  }
  // Golden-section refinement around the best sample.
  const double step = (outer - inner) / samples;
  double a = std::max(inner, best_t - step);
  double b = std::min(outer, best_t + step);
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 100; ++it) {
    const double c = b - phi * (b - a);
    const double d = a + phi * (b - a);
    if (g(c) > g(d)) {
      b = d;
    } else {
      a = c;
    }
  }
  return std::max(best, g(0.5 * (a + b)));
}

std::string vec_label(const Vec& v) {
  std::ostringstream os;
  os << "(";
  for (int i = 0; i < v.size(); ++i) os << (i ? "," : "") << v(i);
  os << ")";
  return os.str();
}

}  // namespace

double bump_profile(double s) {
  const double q = 1.0 - s * s;
  return q > 0.0 ? std::exp(1.0 - 1.0 / q) : 0.0;
}

double bump_profile_derivative(double s) {
  const double q = 1.0 - s * s;
  if (q <= 0.0) return 0.0;
  return std::exp(1.0 - 1.0 / q) * (-2.0 * s / (q * q));
}

double smooth_cutoff(double t, double inner, double outer) {
  if (t <= inner) return 1.0;
  if (t >= outer) return 0.0;
  const double u = (t - inner) / (outer - inner);
  const double a = e_neg_inv(1.0 - u);
  const double b = e_neg_inv(u);
  return a / (a + b);
}

double smooth_cutoff_derivative(double t, double inner, double outer) {
  if (t <= inner || t >= outer) return 0.0;
  const double u = (t - inner) / (outer - inner);
  const double a = e_neg_inv(1.0 - u);
  const double b = e_neg_inv(u);
  const double da = -e_neg_inv_derivative(1.0 - u);
  const double db = e_neg_inv_derivative(u);
  const double s = a + b;
  return (da * b - a * db) / (s * s) / (outer - inner);
}

TestVectorField bump_field(const Vec& center, double radius, const Vec& direction) {
  if (!(radius > 0.0)) throw DomainError("bump_field: radius must be positive");
  TestVectorField field;
  field.center = center;
  field.supportRadius = radius;
  field.supNorm = direction.norm();
  field.label = "bump" + vec_label(center) + "r" + std::to_string(radius);
  field.theta = [=](const Vec& x) -> Vec { return bump_profile((x - center).norm() / radius) * direction; };
  field.dtheta = [=](const Vec& x) -> Mat {
    const Vec off = x - center;
    const double rho = off.norm();
    if (rho == 0.0 || rho >= radius) return Mat::Zero(x.size(), x.size());
    const Vec grad = bump_profile_derivative(rho / radius) / (radius * rho) * off;
    return direction * grad.transpose();
  };
  return field;
}

TestVectorField plateau_field(const Vec& center, double inner, double outer, const Vec& direction) {
  if (!(0.0 <= inner && inner < outer)) throw DomainError("plateau_field: need 0 <= inner < outer");
  TestVectorField field;
  field.center = center;
  field.supportRadius = outer;
  field.supNorm = direction.norm();
  field.label = "plateau" + vec_label(center);
  field.theta = [=](const Vec& x) -> Vec { return smooth_cutoff((x - center).norm(), inner, outer) * direction; };
  field.dtheta = [=](const Vec& x) -> Mat {
    const Vec off = x - center;
    const double rho = off.norm();
    if (rho <= inner || rho >= outer) return Mat::Zero(x.size(), x.size());
    const Vec grad = smooth_cutoff_derivative(rho, inner, outer) / rho * off;
    return direction * grad.transpose();
  };
  return field;
}

TestVectorField radial_field(const Vec& center, double inner, double outer, double sign, bool normalize) {
  if (!(0.0 < inner && inner < outer)) throw DomainError("radial_field: need 0 < inner < outer");
  const double sup = radial_sup(inner, outer);
  const double c = normalize ? sign / sup : sign;
  TestVectorField field;
  field.center = center;
  field.supportRadius = outer;
  field.supNorm = std::abs(c) * sup;
  field.label = std::string(sign > 0 ? "outward" : "inward") + vec_label(center);
  field.theta = [=](const Vec& x) -> Vec {
    const Vec off = x - center;
    return c * smooth_cutoff(off.norm(), inner, outer) * off;
  };
  field.dtheta = [=](const Vec& x) -> Mat {
    const Vec off = x - center;
    const double rho = off.norm();
    const int n = static_cast<int>(x.size());
    Mat jac = smooth_cutoff(rho, inner, outer) * Mat::Identity(n, n);
    if (rho > inner && rho < outer) jac += (smooth_cutoff_derivative(rho, inner, outer) / rho) * off * off.transpose();
    return c * jac;
  };
  return field;
}

TestVectorField scaled(const TestVectorField& field, double c) {
  TestVectorField out = field;
  out.supNorm = std::abs(c) * field.supNorm;
  out.theta = [theta = field.theta, c](const Vec& x) -> Vec { return c * theta(x); };
  out.dtheta = [dtheta = field.dtheta, c](const Vec& x) -> Mat { return c * dtheta(x); };
  return out;
}

TestVectorField dilated(const TestVectorField& field, double lambda) {
  if (!(lambda > 0.0)) throw DomainError("dilated: factor must be positive");
  TestVectorField out = field;
  out.center = lambda * field.center;
  out.supportRadius = lambda * field.supportRadius;
  out.theta = [theta = field.theta, lambda](const Vec& x) -> Vec { return theta(x / lambda); };
  out.dtheta = [dtheta = field.dtheta, lambda](const Vec& x) -> Mat { return dtheta(x / lambda) / lambda; };
  return out;
}

std::vector<TestVectorField> bump_dictionary(int n, const std::vector<Vec>& centers, const std::vector<double>& radii) {
  std::vector<TestVectorField> out;
  for (const auto& c : centers)
    for (double r : radii)
      for (int i = 0; i < n; ++i) {
        out.push_back(bump_field(c, r, Vec::Unit(n, i)));
        out.push_back(bump_field(c, r, -Vec::Unit(n, i)));
      }
  return out;
}

std::vector<TestVectorField> default_dictionary(const Vec& lo, const Vec& hi) {
  const int n = static_cast<int>(lo.size());
  const Vec mid = 0.5 * (lo + hi);
  const Vec half = 0.5 * (hi - lo);
  const double extent = std::max(half.maxCoeff(), 1e-3);
  std::vector<Vec> centers{mid};
  for (int axis = 0; axis < std::min(n, 2); ++axis)
    for (double sgn : {-1.0, 1.0}) {
      Vec c = mid;
      c(axis) += sgn * half(axis);
      centers.push_back(c);
    }
  while (centers.size() < 5) centers.push_back(mid);
  auto dict = bump_dictionary(n, centers, {0.25 * extent, 0.5 * extent, extent});
  const double reach = half.norm();
  dict.push_back(radial_field(mid, reach + 0.05 * extent, reach + 0.5 * extent, 1.0));
  dict.push_back(radial_field(mid, reach + 0.05 * extent, reach + 0.5 * extent, -1.0));
  return dict;
}

ScalarTestFunction radial_cap(const Vec& center, double radius) {
  if (!(radius > 0.0)) throw DomainError("radial_cap: radius must be positive");
  ScalarTestFunction fn;
  fn.center = center;
  fn.supportRadius = radius;
  fn.label = "cap";
  fn.f = [=](const Vec& x) { return bump_profile((x - center).norm() / radius); };
  fn.df = [=](const Vec& x) -> Vec {
    const Vec off = x - center;
    const double rho = off.norm();
    if (rho == 0.0 || rho >= radius) return Vec::Zero(x.size());
    return bump_profile_derivative(rho / radius) / (radius * rho) * off;
  };
  return fn;
}

ScalarTestFunction plateau_function(const Vec& center, double inner, double outer) {
  if (!(0.0 <= inner && inner < outer)) throw DomainError("plateau_function: need 0 <= inner < outer");
  ScalarTestFunction fn;
  fn.center = center;
  fn.supportRadius = outer;
  fn.label = "plateau";
  fn.f = [=](const Vec& x) { return smooth_cutoff((x - center).norm(), inner, outer); };
  fn.df = [=](const Vec& x) -> Vec {
    const Vec off = x - center;
    const double rho = off.norm();
    if (rho <= inner || rho >= outer) return Vec::Zero(x.size());
    return smooth_cutoff_derivative(rho, inner, outer) / rho * off;
  };
  return fn;
}

ScalarTestFunction zero_function(int n) {
  ScalarTestFunction fn;
  fn.center = Vec::Zero(n);
  fn.supportRadius = 0.0;
  fn.label = "zero";
  fn.f = [](const Vec&) { return 0.0; };
  fn.df = [](const Vec& x) -> Vec { return Vec::Zero(x.size()); };
  return fn;
}

ScalarTestFunction linear_function(const Vec& u, const Vec& c) {
  ScalarTestFunction fn;
  fn.center = c;
  fn.supportRadius = std::numeric_limits<double>::infinity();
  fn.label = "linear";
  fn.f = [=](const Vec& x) { return u.dot(x - c); };
  fn.df = [=](const Vec&) -> Vec { return u; };
  return fn;
}

ScalarTestFunction ridge_function(const Vec& u, std::function<double(double)> h, std::function<double(double)> dh,
                                  std::string label) {
  ScalarTestFunction fn;
  fn.center = Vec::Zero(u.size());
  fn.supportRadius = std::numeric_limits<double>::infinity();
  fn.label = std::move(label);
  fn.f = [=](const Vec& x) { return h(u.dot(x)); };
  fn.df = [=](const Vec& x) -> Vec { return dh(u.dot(x)) * u; };
  return fn;
}

ScalarTestFunction combine(double a, const ScalarTestFunction& f, double b, const ScalarTestFunction& g) {
  ScalarTestFunction fn;
  const double rf = f.supportRadius + (f.center - g.center).norm();
  fn.center = g.center;
  fn.supportRadius = std::max(rf, g.supportRadius);
  fn.label = f.label + "+" + g.label;
  fn.f = [=, ff = f.f, gf = g.f](const Vec& x) { return a * ff(x) + b * gf(x); };
  fn.df = [=, fd = f.df, gd = g.df](const Vec& x) -> Vec { return a * fd(x) + b * gd(x); };
  return fn;
}

ScalarTestFunction rescaled(const ScalarTestFunction& f, double eps, double scale) {
  if (!(eps > 0.0)) throw DomainError("rescaled: eps must be positive");
  ScalarTestFunction fn;
  fn.center = eps * f.center;
  fn.supportRadius = eps * f.supportRadius;
  fn.label = f.label;
  fn.f = [=, ff = f.f](const Vec& x) { return scale * ff(x / eps); };
  fn.df = [=, fd = f.df](const Vec& x) -> Vec { return (scale / eps) * fd(x / eps); };
  return fn;
}

Mat finite_difference_jacobian(const std::function<Vec(const Vec&)>& fn, const Vec& x, double step) {
  const int n = static_cast<int>(x.size());
  const Vec f0 = fn(x);
  Mat jac(f0.size(), n);
  for (int j = 0; j < n; ++j) {
    Vec xp = x, xm = x;
    xp(j) += step;
    xm(j) -= step;
    jac.col(j) = (fn(xp) - fn(xm)) / (2.0 * step);
  }
  return jac;
}

Vec finite_difference_gradient(const std::function<double(const Vec&)>& fn, const Vec& x, double step) {
  const int n = static_cast<int>(x.size());
  Vec g(n);
  for (int j = 0; j < n; ++j) {
    Vec xp = x, xm = x;
    xp(j) += step;
    xm(j) -= step;
    g(j) = (fn(xp) - fn(xm)) / (2.0 * step);
  }
  return g;
}

}  // namespace varitool
