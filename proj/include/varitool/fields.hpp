#pragma once

#include "varitool/geometry.hpp"

#include <functional>
#include <string>
#include <vector>

namespace varitool {

/// Compactly supported smooth vector field with exact Jacobian.
struct TestVectorField {
  std::function<Vec(const Vec&)> theta;
  std::function<Mat(const Vec&)> dtheta;
  Vec center;
  /// theta vanishes outside B(center, supportRadius).
  double supportRadius = 0.0;
  /// sup |theta|.
  double supNorm = 0.0;
  std::string label;
};

/// Scalar function with exact gradient.
struct ScalarTestFunction {
  std::function<double(const Vec&)> f;
  std::function<Vec(const Vec&)> df;
  Vec center;
  /// f vanishes outside B(center, supportRadius); +inf for functions
  /// without compact support.
  double supportRadius = 0.0;
  std::string label;
};

/// exp(1 - 1/(1 - s^2)) for |s| < 1, else 0; equals 1 at s = 0.
double bump_profile(double s);
double bump_profile_derivative(double s);

/// Smooth radial cutoff: 1 for t <= inner, 0 for t >= outer.
double smooth_cutoff(double t, double inner, double outer);
double smooth_cutoff_derivative(double t, double inner, double outer);

/// theta(x) = bump(|x - c| / radius) * direction.
TestVectorField bump_field(const Vec& center, double radius, const Vec& direction);
/// theta(x) = cutoff(|x - c|) * direction.
TestVectorField plateau_field(const Vec& center, double inner, double outer, const Vec& direction);
/// theta(x) = sign * (x - c) * cutoff(|x - c|), divided by its sup norm when
/// `normalize` is set.
TestVectorField radial_field(const Vec& center, double inner, double outer, double sign = 1.0, bool normalize = true);
/// c * theta.
TestVectorField scaled(const TestVectorField& field, double c);
/// x -> theta(x / lambda): the field pushed forward under dilation by lambda.
TestVectorField dilated(const TestVectorField& field, double lambda);

/// Coordinate directions times bumps at every listed center and radius.
std::vector<TestVectorField> bump_dictionary(int n, const std::vector<Vec>& centers, const std::vector<double>& radii);

/// Default dictionary for point sets contained in the box [lo, hi]: five
/// centers (box center and the midpoints toward the faces of the first two
/// axes), three bump radii, plus outward and inward radial fields about the
/// box center.
std::vector<TestVectorField> default_dictionary(const Vec& lo, const Vec& hi);

/// f(x) = bump(|x - c| / radius).
ScalarTestFunction radial_cap(const Vec& center, double radius);
/// f(x) = cutoff(|x - c|).
ScalarTestFunction plateau_function(const Vec& center, double inner, double outer);
ScalarTestFunction zero_function(int n);
/// f(x) = u . (x - c).
ScalarTestFunction linear_function(const Vec& u, const Vec& c);
/// f(x) = h(u . x) for a smooth profile h with derivative dh.
ScalarTestFunction ridge_function(const Vec& u, std::function<double(double)> h, std::function<double(double)> dh,
                                  std::string label);
/// a * f + b * g.
ScalarTestFunction combine(double a, const ScalarTestFunction& f, double b, const ScalarTestFunction& g);
/// x -> scale * f(x / eps).
ScalarTestFunction rescaled(const ScalarTestFunction& f, double eps, double scale);

/// Central-difference Jacobian, for consistency checks.
Mat finite_difference_jacobian(const std::function<Vec(const Vec&)>& fn, const Vec& x, double step);
Vec finite_difference_gradient(const std::function<double(const Vec&)>& fn, const Vec& x, double step);

}  // namespace varitool
