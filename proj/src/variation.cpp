#include "varitool/variation.hpp"

#include "varitool/errors.hpp"
#include "varitool/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace varitool {

namespace {

// Atom indices grouped by identical position.
std::vector<std::vector<std::size_t>> fibers(const DiscreteVarifold& v) {
  std::vector<std::size_t> order(v.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  auto less = [&](std::size_t a, std::size_t b) {
    const auto pa = v.position_span(a);
    const auto pb = v.position_span(b);
    return std::lexicographical_compare(pa.begin(), pa.end(), pb.begin(), pb.end());
  };
  std::stable_sort(order.begin(), order.end(), less);
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (k == 0 || less(order[k - 1], order[k])) out.emplace_back();
    out.back().push_back(order[k]);
  }
  return out;
}

}  // namespace

double first_variation(const DiscreteVarifold& v, const TestVectorField& theta) {
  return kernels::omp::first_variation(v, theta);
}

double total_variation_lower_bound(const DiscreteVarifold& v, const std::vector<TestVectorField>& dictionary) {
  if (dictionary.empty()) throw ArgumentError("total_variation_lower_bound: empty dictionary");
  double best = 0.0;
  for (const auto& theta : dictionary) {
    if (!(theta.supNorm > 0.0)) continue;
    best = std::max(best, std::abs(first_variation(v, theta)) / theta.supNorm);
  }
  return best;
}

Mat weak_derivative_c1(const DiscreteVarifold& v, const Mat& df_at_x, const Vec& x) {
  return df_at_x * mean_projection(v, x);
}

std::vector<double> weak_gradient_norms(const DiscreteVarifold& v, const ScalarTestFunction& f) {
  std::vector<double> out(v.size(), 0.0);
  for (const auto& fiber : fibers(v)) {
    const Vec x = v.position(fiber.front());
    Mat q = Mat::Zero(v.n(), v.n());
    double mass = 0.0;
    for (std::size_t i : fiber) {
      q += v.weight(i) * v.plane(i).proj();
      mass += v.weight(i);
    }
    const double value = (q.transpose() * f.df(x)).norm() / mass;
    for (std::size_t i : fiber) out[i] = value;
  }
  return out;
}

double weak_gradient_integral(const DiscreteVarifold& v, const ScalarTestFunction& f) {
  const auto norms = weak_gradient_norms(v, f);
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += v.weight(i) * norms[i];
  return s;
}

double distributional_boundary_eval(const DiscreteVarifold& v, const FirstVariationMeasure& delta, const PointPredicate& in_set,
                                    const TestVectorField& theta) {
  return delta.apply_restricted(theta.theta, in_set) - first_variation(restrict(v, in_set), theta);
}

double distributional_boundary_eval(const AnalyticFamily& family, const DiscreteVarifold& v, const PointPredicate& in_set,
                                    const TestVectorField& theta) {
  if (!v.meta()) throw UnsupportedFamilyError("distributional_boundary_eval: varifold carries no sampling resolution");
  return distributional_boundary_eval(v, first_variation_measure(family, v.meta()->h), in_set, theta);
}

}  // namespace varitool
