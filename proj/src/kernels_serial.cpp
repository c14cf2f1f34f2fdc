#include "varitool/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace varitool::kernels {

double CenterProfile::best_containing(double t) const {
  const auto it = std::lower_bound(radii.begin(), radii.end(), t);
  if (it == radii.end()) return 0.0;
  return suffixBest[static_cast<std::size_t>(it - radii.begin())];
}

CenterProfile build_profile(const DiscreteVarifold& v, const Vec& center, const std::vector<std::size_t>& near,
                            const MaximalParams& p) {
  std::vector<std::pair<double, double>> dw;
  dw.reserve(near.size());
  for (std::size_t i : near) dw.emplace_back((v.position(i) - center).norm(), v.weight(i));
  std::sort(dw.begin(), dw.end());
  const double norm = unit_ball_volume(v.m());
  auto ratio = [&](double mass, double s) { return mass / (norm * std::pow(s, v.m())); };

  CenterProfile prof;
  if (p.exactRadii) {
    std::size_t k = 0;
    double mass = 0.0;
    while (k < dw.size() && dw[k].first <= p.sMin) mass += dw[k++].second;
    prof.radii.push_back(p.sMin);
    prof.suffixBest.push_back(ratio(mass, p.sMin));
    while (k < dw.size() && dw[k].first <= p.sMax) {
      const double s = dw[k].first;
      while (k < dw.size() && dw[k].first == s) mass += dw[k++].second;
      prof.radii.push_back(s);
      prof.suffixBest.push_back(ratio(mass, s));
    }
  } else {
    const int count = p.radiiPerCenter;
    std::size_t k = 0;
    double mass = 0.0;
    for (int j = 0; j < count; ++j) {
      const double s = j == count - 1 ? p.sMax : p.sMin * std::pow(p.sMax / p.sMin, double(j) / (count - 1));
      while (k < dw.size() && dw[k].first <= s) mass += dw[k++].second;
      prof.radii.push_back(s);
      prof.suffixBest.push_back(ratio(mass, s));
    }
  }
  for (std::size_t j = prof.suffixBest.size(); j-- > 1;)
    prof.suffixBest[j - 1] = std::max(prof.suffixBest[j - 1], prof.suffixBest[j]);
  return prof;
}

void sweep_center(const DiscreteVarifold& v, const Vec& center, std::vector<std::size_t> near, const MaximalParams& p,
                  std::vector<double>& best) {
  const CenterProfile prof = build_profile(v, center, near, p);
  for (std::size_t i : near) {
    const double t = (v.position(i) - center).norm();
    best[i] = std::max(best[i], prof.best_containing(t));
  }
}

std::optional<double> weighted_median(std::vector<std::pair<double, double>> samples, double lambda) {
  if (samples.empty()) return std::nullopt;
  std::sort(samples.begin(), samples.end());
  double total = 0.0;
  for (const auto& s : samples) total += s.second;
  if (!(total > 0.0)) return std::nullopt;
  double below = 0.0;
  std::size_t k = 0;
  while (k < samples.size()) {
    const double y = samples[k].first;
    while (k < samples.size() && samples[k].first == y) below += samples[k++].second;
    // ||V||({f <= y}) exceeds lambda ||V|| B first at y: every smaller y
    // qualifies and y does not, so the supremum is y.
    if (below > lambda * total) return y;
  }
  return samples.back().first;
}

namespace serial {

double first_variation(const DiscreteVarifold& v, const TestVectorField& theta) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Mat jac = theta.dtheta(v.position(i));
    s += v.weight(i) * v.plane(i).proj().cwiseProduct(jac).sum();
  }
  return s;
}

std::vector<double> maximal_at_atoms(const DiscreteVarifold& v, const std::vector<Vec>& centers, const MaximalParams& p) {
  std::vector<double> best(v.size(), 0.0);
  for (const auto& c : centers) {
    std::vector<std::size_t> near;
    for (std::size_t i = 0; i < v.size(); ++i)
      if ((v.position(i) - c).squaredNorm() <= p.sMax * p.sMax) near.push_back(i);
    sweep_center(v, c, std::move(near), p, best);
  }
  return best;
}

std::vector<double> ball_masses(const DiscreteVarifold& v, const std::vector<Vec>& centers, const std::vector<double>& radii) {
  std::vector<double> out(centers.size(), 0.0);
  for (std::size_t k = 0; k < centers.size(); ++k)
    for (std::size_t i = 0; i < v.size(); ++i)
      if ((v.position(i) - centers[k]).squaredNorm() <= radii[k] * radii[k]) out[k] += v.weight(i);
  return out;
}

std::vector<std::optional<double>> medians(const DiscreteVarifold& v, const std::vector<double>& values,
                                           const std::vector<Vec>& centers, const std::vector<double>& radii,
                                           double lambda) {
  std::vector<std::optional<double>> out(centers.size());
  for (std::size_t k = 0; k < centers.size(); ++k) {
    std::vector<std::pair<double, double>> samples;
    for (std::size_t i = 0; i < v.size(); ++i)
      if ((v.position(i) - centers[k]).squaredNorm() <= radii[k] * radii[k]) samples.emplace_back(values[i], v.weight(i));
    out[k] = weighted_median(std::move(samples), lambda);
  }
  return out;
}

}  // namespace serial
}  // namespace varitool::kernels
