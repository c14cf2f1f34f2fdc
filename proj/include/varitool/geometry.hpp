#pragma once

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace varitool {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Volume of the closed unit ball in R^m, pi^(m/2) / Gamma(m/2 + 1).
double unit_ball_volume(int m);

/// Explicit upper bound for the best isoperimetric constant: 1/2 for m = 1,
/// 5^m 3^(1/(m-1)) alpha(m)^(-1/m) otherwise.
double gamma_upper(int m);

/// Unit-disc lower bound alpha(m)^(-1/m) / m for the best isoperimetric constant.
double gamma_disc_lower(int m);

/// Dimensional constants. The Besicovitch constant has no default.
struct Constants {
  std::optional<double> besicovitch;

  static double alpha(int m) { return unit_ball_volume(m); }
  static double gammaUpper(int m) { return gamma_upper(m); }
};

/// An element of G(n, m), carried as its orthogonal projection matrix.
class Subspace {
 public:
  Subspace() = default;

  /// Projection onto the span of the columns of `basis` (n x m).
  static Subspace from_basis(const Mat& basis);
  static Subspace from_vectors(const std::vector<Vec>& vectors);
  /// Span of the coordinate axes e_{first}, ..., e_{first+m-1} in R^n.
  static Subspace coordinate(int n, int m, int first = 0);
  /// Wraps a projection matrix after checking the invariants.
  static Subspace from_projection(const Mat& proj, double tol = 1e-10);

  int n() const { return n_; }
  int m() const { return m_; }
  const Mat& proj() const { return proj_; }

  Vec apply(const Vec& v) const { return proj_ * v; }
  /// Orthonormal basis of the subspace (n x m).
  Mat basis() const;
  /// Orthonormal basis of the orthogonal complement (n x (n-m)).
  Mat complement_basis() const;

  /// Returns an empty string when the invariants hold, else a description.
  std::string check_invariants(double tol = 1e-10) const;

 private:
  Subspace(int n, int m, Mat proj) : n_(n), m_(m), proj_(std::move(proj)) {}

  int n_ = 0;
  int m_ = 0;
  Mat proj_;
};

/// Integral of sin(t)^p over [a, b].
double sin_power_integral(int p, double a, double b);

/// Volume of {y in B(0, R) subset R^m : y_1 >= t}.
double ball_cap_volume(int m, double radius, double t);

/// Volume of the intersection of two m-balls of radii r1, r2 whose centers
/// are `dist` apart.
double ball_intersection_volume(int m, double r1, double r2, double dist);

/// H^k measure of the part of the round k-sphere of radius R (centered at the
/// origin of R^{k+1}) within distance rho of a point at distance delta from
/// the center.
double sphere_cap_area(int k, double radius, double delta, double rho);

/// Near-uniform partition of the unit k-sphere in R^{k+1}: cell
/// representatives and exact cell measures (summing to H^k(S^k)).
struct SphereCell {
  Vec direction;
  double measure;
};
std::vector<SphereCell> sphere_cells(int k, double spacing);

}  // namespace varitool
