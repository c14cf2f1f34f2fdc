#pragma once

#include "varitool/fields.hpp"
#include "varitool/maximal.hpp"
#include "varitool/varifold.hpp"

#include <optional>
#include <vector>

namespace varitool::kernels {

// Each kernel has a straightforward serial reference (linear scans) and an
// OpenMP version that prunes with the spatial index. Both compute the same
// quantity; results agree up to summation order.

namespace serial {
double first_variation(const DiscreteVarifold& v, const TestVectorField& theta);
std::vector<double> maximal_at_atoms(const DiscreteVarifold& v, const std::vector<Vec>& centers, const MaximalParams& p);
std::vector<double> ball_masses(const DiscreteVarifold& v, const std::vector<Vec>& centers, const std::vector<double>& radii);
std::vector<std::optional<double>> medians(const DiscreteVarifold& v, const std::vector<double>& values,
                                           const std::vector<Vec>& centers, const std::vector<double>& radii,
                                           double lambda);
}  // namespace serial

namespace omp {
double first_variation(const DiscreteVarifold& v, const TestVectorField& theta);
std::vector<double> maximal_at_atoms(const DiscreteVarifold& v, const std::vector<Vec>& centers, const MaximalParams& p);
std::vector<double> ball_masses(const DiscreteVarifold& v, const std::vector<Vec>& centers, const std::vector<double>& radii);
std::vector<std::optional<double>> medians(const DiscreteVarifold& v, const std::vector<double>& values,
                                           const std::vector<Vec>& centers, const std::vector<double>& radii,
                                           double lambda);
}  // namespace omp

/// Ratios ||V|| B(a,s) / (alpha(m) s^m) at the candidate radii of one center,
/// with suffix maxima so that the best ball containing a point at distance t
/// is a single lookup.
struct CenterProfile {
  std::vector<double> radii;
  std::vector<double> suffixBest;

  /// Best ratio over candidate balls of radius >= max(t, sMin); 0 if none.
  double best_containing(double t) const;
};
CenterProfile build_profile(const DiscreteVarifold& v, const Vec& center, const std::vector<std::size_t>& near,
                            const MaximalParams& p);

/// Per-center sweep shared by both implementations: given the atoms within
/// sMax of a center, raises best[i] to the best ratio of a candidate ball
/// about that center containing atom i.
void sweep_center(const DiscreteVarifold& v, const Vec& center, std::vector<std::size_t> near, const MaximalParams& p,
                  std::vector<double>& best);

/// Weighted median rule on (value, weight) pairs; nullopt when empty.
std::optional<double> weighted_median(std::vector<std::pair<double, double>> samples, double lambda);

}  // namespace varitool::kernels
