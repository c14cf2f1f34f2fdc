#include "varitool/maximal.hpp"

#include "varitool/errors.hpp"
#include "varitool/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <span>

namespace varitool {

namespace {

std::span<const double> as_span(const Vec& x) { return {x.data(), static_cast<std::size_t>(x.size())}; }

std::vector<Vec> distinct_positions(const DiscreteVarifold& v) {
  std::vector<std::size_t> order(v.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  auto less = [&](std::size_t a, std::size_t b) {
    const auto pa = v.position_span(a);
    const auto pb = v.position_span(b);
    return std::lexicographical_compare(pa.begin(), pa.end(), pb.begin(), pb.end());
  };
  std::sort(order.begin(), order.end(), less);
  std::vector<Vec> out;
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (k > 0 && !less(order[k - 1], order[k])) continue;
    out.push_back(v.position(order[k]));
  }
  return out;
}

}  // namespace

void MaximalParams::validate() const {
  if (!(sMin > 0.0 && sMin < sMax)) throw DomainError("maximal parameters: need 0 < sMin < sMax");
  if (radiiPerCenter < 8) throw DomainError("maximal parameters: radiiPerCenter must be at least 8");
  if (gridPerAxis < 2) throw DomainError("maximal parameters: gridPerAxis must be at least 2");
  if (!(levelTolerance >= 0.0 && levelTolerance < 1e-3)) throw DomainError("maximal parameters: levelTolerance out of range");
}

void MedianParams::validate() const {
  if (!(lambda > 0.0 && lambda < 1.0)) throw DomainError("median parameters: need 0 < lambda < 1");
  if (!radius) throw DomainError("median parameters: radius field missing");
}

std::vector<Vec> candidate_centers(const DiscreteVarifold& v, const MaximalParams& p) {
  if (v.empty()) return {};
  if (p.centers != CenterStrategy::Grid) return distinct_positions(v);
  const int n = v.n();
  Vec lo = v.position(0), hi = v.position(0);
  for (std::size_t i = 1; i < v.size(); ++i) {
    lo = lo.cwiseMin(v.position(i));
    hi = hi.cwiseMax(v.position(i));
  }
  const int k = p.gridPerAxis;
  std::vector<Vec> out;
  std::vector<int> idx(n, 0);
  while (true) {
    Vec c(n);
    for (int d = 0; d < n; ++d) c(d) = lo(d) + (hi(d) - lo(d)) * idx[d] / (k - 1);
    out.push_back(std::move(c));
    int d = 0;
    while (d < n && ++idx[d] == k) idx[d++] = 0;
    if (d == n) break;
  }
  return out;
}

double maximal_function(const DiscreteVarifold& v, const Vec& x, const MaximalParams& p) {
  p.validate();
  std::vector<Vec> centers = candidate_centers(v, p);
  if (p.centers == CenterStrategy::AtomsQuery) centers.push_back(x);
  double best = 0.0;
  for (const auto& c : centers) {
    const double t = (x - c).norm();
    if (t > p.sMax) continue;
    const auto prof = kernels::build_profile(v, c, v.index().ball_query(as_span(c), p.sMax), p);
    best = std::max(best, prof.best_containing(t));
  }
  return best;
}

std::vector<double> maximal_at_atoms(const DiscreteVarifold& v, const MaximalParams& p) {
  p.validate();
  return kernels::omp::maximal_at_atoms(v, candidate_centers(v, p), p);
}

double superlevel_mass(const DiscreteVarifold& v, const std::vector<double>& maximal, double d, double level_tolerance) {
  if (!(d > 0.0)) throw DomainError("superlevel_mass: d must be positive");
  const double level = d * (1.0 - level_tolerance);
  double mass = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (maximal[i] >= level) mass += v.weight(i);
  return mass;
}

double superlevel_mass(const DiscreteVarifold& v, double d, const MaximalParams& p) {
  if (!(d > 0.0)) throw DomainError("superlevel_mass: d must be positive");
  return superlevel_mass(v, maximal_at_atoms(v, p), d, p.levelTolerance);
}

DensityEstimate density(const DiscreteVarifold& v, const Vec& x, double s_min, int levels) {
  if (!(s_min > 0.0)) throw DomainError("density: sMin must be positive");
  DensityEstimate est;
  const double norm = unit_ball_volume(v.m());
  for (int j = 0; j < std::max(levels, 1); ++j) {
    const double r = s_min * std::ldexp(1.0, j);
    est.radii.push_back(r);
    est.ratios.push_back(weight_ball_mass(v, x, r) / (norm * std::pow(r, v.m())));
  }
  est.radius = s_min;
  est.value = est.ratios.front();
  return est;
}

double density(const AnalyticFamily& family, const Vec& x) { return family.density_at(x); }

std::optional<double> median_of_ball(const DiscreteVarifold& v, const std::vector<double>& values, const Vec& a, double r,
                                     double lambda) {
  std::vector<std::pair<double, double>> samples;
  for (std::size_t i : v.index().ball_query(as_span(a), r)) samples.emplace_back(values[i], v.weight(i));
  return kernels::weighted_median(std::move(samples), lambda);
}

std::optional<double> median_g(const DiscreteVarifold& v, const ScalarTestFunction& f, const Vec& a, const MedianParams& p) {
  p.validate();
  const double r = p.radius(a);
  if (!(r > 0.0)) throw DomainError("median_g: radius field must be positive");
  std::vector<std::pair<double, double>> samples;
  for (std::size_t i : v.index().ball_query(as_span(a), r)) samples.emplace_back(f.f(v.position(i)), v.weight(i));
  return kernels::weighted_median(std::move(samples), p.lambda);
}

std::vector<std::size_t> lower_density_region(const DiscreteVarifold& v, double d,
                                              const std::function<double(const Vec&)>& radius, double level_tolerance) {
  if (!(d > 0.0)) throw DomainError("lower_density_region: d must be positive");
  std::vector<Vec> centers;
  std::vector<double> radii;
  for (std::size_t i = 0; i < v.size(); ++i) {
    centers.push_back(v.position(i));
    radii.push_back(radius(centers.back()));
    if (!(radii.back() > 0.0)) throw DomainError("lower_density_region: radius field must be positive");
  }
  const auto masses = kernels::omp::ball_masses(v, centers, radii);
  const double norm = unit_ball_volume(v.m());
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double need = d * norm * std::pow(radii[i], v.m());
    if (std::isfinite(masses[i]) && masses[i] > 0.0 && masses[i] >= need * (1.0 - level_tolerance)) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> lower_density_region(const DiscreteVarifold& v, double d, const AnalyticFamily* family,
                                              bool accept_approximate, double s_min) {
  if (!(d > 0.0)) throw DomainError("lower_density_region: d must be positive");
  if (!family && !accept_approximate)
    throw PreconditionError("lower_density_region: density mode needs an analytic family or accepted resolution estimates");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double theta = family ? family->density_at(v.position(i)) : density(v, v.position(i), s_min).value;
    if (theta >= d) out.push_back(i);
  }
  return out;
}

}  // namespace varitool
