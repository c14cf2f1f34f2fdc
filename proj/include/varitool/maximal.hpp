#pragma once

#include "varitool/families.hpp"
#include "varitool/fields.hpp"
#include "varitool/varifold.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace varitool {

enum class CenterStrategy { Atoms, AtomsQuery, Grid };

/// Discretization of the supremum defining the maximal-type function.
struct MaximalParams {
  double sMin = 0.0;
  double sMax = 0.0;
  CenterStrategy centers = CenterStrategy::AtomsQuery;
  /// Used only when exactRadii is off: log-spaced radii per center.
  int radiiPerCenter = 8;
  /// Candidate radii are all atom distances from the center (exact sup over s).
  bool exactRadii = true;
  /// Grid points per axis over the atoms' bounding box (Grid strategy).
  int gridPerAxis = 21;
  /// Relative slack on superlevel comparisons M >= d.
  double levelTolerance = 1e-9;

  /// Throws DomainError unless 0 < sMin < sMax and radiiPerCenter >= 8.
  void validate() const;
};

struct MedianParams {
  double lambda = 0.5;
  std::function<double(const Vec&)> radius;

  void validate() const;
};

/// Candidate ball centers for the given strategy (query point excluded).
std::vector<Vec> candidate_centers(const DiscreteVarifold& v, const MaximalParams& p);

/// Lower bound for M(x): the largest ||V|| B(a,s) / (alpha(m) s^m) over
/// candidate balls containing x with sMin <= s <= sMax.
double maximal_function(const DiscreteVarifold& v, const Vec& x, const MaximalParams& p);

/// maximal_function at every atom position.
std::vector<double> maximal_at_atoms(const DiscreteVarifold& v, const MaximalParams& p);

/// Weight of the atoms whose maximal function is at least d.
double superlevel_mass(const DiscreteVarifold& v, double d, const MaximalParams& p);
/// Same, reusing maximal values computed by maximal_at_atoms.
double superlevel_mass(const DiscreteVarifold& v, const std::vector<double>& maximal, double d, double level_tolerance);

/// Density ratio sequence at radii sMin * 2^j; `value` is the ratio at the
/// smallest radius and is only meaningful at that resolution.
struct DensityEstimate {
  double value = 0.0;
  double radius = 0.0;
  std::vector<double> radii;
  std::vector<double> ratios;
  bool approximate = true;
};
DensityEstimate density(const DiscreteVarifold& v, const Vec& x, double s_min, int levels = 6);
/// Exact density of an analytic family.
double density(const AnalyticFamily& family, const Vec& x);

/// Weighted lambda-median of f over B(a, r(a)): the supremum of y with
/// ||V||({f <= y} cap B) <= lambda ||V|| B. Empty balls yield nullopt.
std::optional<double> median_g(const DiscreteVarifold& v, const ScalarTestFunction& f, const Vec& a, const MedianParams& p);
/// Same from per-atom values.
std::optional<double> median_of_ball(const DiscreteVarifold& v, const std::vector<double>& values, const Vec& a, double r,
                                     double lambda);

enum class RegionMode { BallRatio, Density };

/// Atoms a with infinity > ||V|| B(a, r(a)) >= d alpha(m) r(a)^m.
std::vector<std::size_t> lower_density_region(const DiscreteVarifold& v, double d,
                                              const std::function<double(const Vec&)>& radius,
                                              double level_tolerance = 1e-9);
/// Atoms with density at least d: exact when `family` is given, otherwise the
/// resolution-dependent estimate, which must be explicitly accepted.
std::vector<std::size_t> lower_density_region(const DiscreteVarifold& v, double d, const AnalyticFamily* family,
                                              bool accept_approximate = false, double s_min = 0.0);

}  // namespace varitool
