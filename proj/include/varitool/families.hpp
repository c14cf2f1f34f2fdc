#pragma once

#include "varitool/geometry.hpp"
#include "varitool/varifold.hpp"

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace varitool {

/// Round m-sphere of the given radius inside the affine (m+1)-plane
/// center + span(frame); frame is n x (m+1) with orthonormal columns.
struct SphereShell {
  Vec center;
  double radius = 1.0;
  int m = 1;
  Mat frame;
  double multiplicity = 1.0;
};

/// m-disc center + {y in plane : |y| <= radius}.
struct FlatDisc {
  Vec center;
  Subspace plane;
  double radius = 1.0;
  double multiplicity = 1.0;
};

/// Finitely many affine translates offset_i + T, each with the same weight.
/// With a clip ball the pieces are the discs (offset_i + T) cap B(clipCenter,
/// clipRadius); without one the planes are complete and sampling covers the
/// discs of radius `window` about clipCenter.
struct PlaneBundle {
  Subspace plane;
  std::vector<Vec> offsets;
  double weight = 1.0;
  Vec clipCenter;
  std::optional<double> clipRadius;
  double window = 1.0;
};

/// (density * Lebesgue restricted to the box [lo, hi]) x delta_T. When
/// `unbounded` is set the analytic data describe Lebesgue on all of R^n and
/// the box is only the sampling window.
struct ProductSlab {
  Subspace plane;
  Vec lo;
  Vec hi;
  double density = 1.0;
  bool unbounded = false;
};

/// One affine m-disc of a family (used for disc-like pieces).
struct DiscPiece {
  Vec center;
  double radius;
};

class AnalyticFamily {
 public:
  using Shape = std::variant<SphereShell, FlatDisc, PlaneBundle, ProductSlab>;

  explicit AnalyticFamily(Shape shape);

  static AnalyticFamily sphere(int m, int n, double radius, double multiplicity = 1.0, std::optional<Vec> center = {});
  static AnalyticFamily disc(int m, int n, double radius, double multiplicity = 1.0, std::optional<Vec> center = {},
                             std::optional<Subspace> plane = {});
  /// k^(n-m) translates of span(e_1..e_m), midpoint-spaced over the normal
  /// cube of half-width R, weighted so that the mass inside U(0, R) equals
  /// alpha(n) R^n. Clipped to B(0, R) when `clipped`.
  static AnalyticFamily plane_bundle_filling(int m, int n, int k, double R = 1.0, bool clipped = true);
  static AnalyticFamily slab(int m, int n, const Vec& lo, const Vec& hi, double density = 1.0, bool unbounded = false);

  const Shape& shape() const { return shape_; }
  int m() const { return m_; }
  int n() const { return n_; }
  std::string name() const;

  double total_mass() const;
  /// ||delta V||(R^n); zero for complete planes and unbounded slabs.
  double delta_total_mass() const;
  /// Theta^m(||V||, x); may be +inf.
  double density_at(const Vec& x) const;
  /// ||V|| B(a, r), exact.
  double ball_mass(const Vec& a, double r) const;
  /// H^m of {x : Theta^m(||V||, x) >= d}; throws for families without a
  /// finite-measure rectifiable carrier.
  double density_superlevel_measure(double d) const;
  /// H^m of {Theta^m > 0}.
  double positive_density_measure() const;
  /// sup over spt ||V|| of |x - a|.
  double max_distance_from(const Vec& a) const;
  bool rectifiable() const;
  bool finite_mass() const;
  /// Smallest geometric length scale (radius, spacing, box side).
  double feature_length() const;

  /// Disc pieces of disc-like families (disc, plane bundle).
  std::vector<DiscPiece> pieces() const;

 private:
  Shape shape_;
  int m_ = 0;
  int n_ = 0;
};

/// delta V as an R^n valued measure: delta V(theta) = sum_j theta(x_j) . u_j.
class FirstVariationMeasure {
 public:
  explicit FirstVariationMeasure(int n) : n_(n) {}
  void add(const Vec& x, const Vec& u);

  int n() const { return n_; }
  std::size_t size() const { return vectors_.size() / std::max(n_, 1); }
  Eigen::Map<const Vec> position(std::size_t j) const { return {positions_.data() + j * n_, n_}; }
  Eigen::Map<const Vec> vector(std::size_t j) const { return {vectors_.data() + j * n_, n_}; }

  double apply(const std::function<Vec(const Vec&)>& theta) const;
  double apply_restricted(const std::function<Vec(const Vec&)>& theta, const PointPredicate& in_set) const;
  /// Integral of f with respect to ||delta V||.
  double integrate(const std::function<double(const Vec&)>& f) const;
  double total() const;
  /// Push-forward under x -> factor x for an m-varifold (vectors scale by factor^(m-1)).
  FirstVariationMeasure dilated(double factor, int m) const;

 private:
  int n_;
  std::vector<double> positions_;
  std::vector<double> vectors_;
};

/// Deterministic midpoint quadrature of the family's weight measure.
DiscreteVarifold sample(const AnalyticFamily& family, double h);

/// Quadrature of the family's first variation (curvature and boundary parts).
FirstVariationMeasure first_variation_measure(const AnalyticFamily& family, double h);

/// Midpoint cells of the m-ball of radius R: (point in R^m, measure).
std::vector<std::pair<Vec, double>> ball_cells(int m, double radius, double h);

/// Volume of [lo, hi] cap B(a, r) in R^n.
double box_ball_volume(const Vec& lo, const Vec& hi, const Vec& a, double r);

}  // namespace varitool
