#include "varitool/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <span>

namespace varitool::kernels::omp {

namespace {
constexpr std::size_t kBlock = 1024;

std::span<const double> as_span(const Vec& x) { return {x.data(), static_cast<std::size_t>(x.size())}; }
}  // namespace

double first_variation(const DiscreteVarifold& v, const TestVectorField& theta) {
  const std::vector<std::size_t> near = v.index().ball_query(as_span(theta.center), theta.supportRadius);
  const std::size_t blocks = (near.size() + kBlock - 1) / kBlock;
  std::vector<double> partial(blocks, 0.0);
  // Fixed blocks summed in order keep the result independent of the thread count.
#pragma omp parallel for schedule(static)
  for (std::size_t b = 0; b < blocks; ++b) {
    double s = 0.0;
    const std::size_t end = std::min(near.size(), (b + 1) * kBlock);
    for (std::size_t k = b * kBlock; k < end; ++k) {
      const std::size_t i = near[k];
      const Mat jac = theta.dtheta(v.position(i));
      s += v.weight(i) * v.plane(i).proj().cwiseProduct(jac).sum();
    }
    partial[b] = s;
  }
  double total = 0.0;
  for (double s : partial) total += s;
  return total;
}

std::vector<double> maximal_at_atoms(const DiscreteVarifold& v, const std::vector<Vec>& centers, const MaximalParams& p) {
  std::vector<double> best(v.size(), 0.0);
#pragma omp parallel
  {
    std::vector<double> local(v.size(), 0.0);
#pragma omp for schedule(dynamic, 4)
    for (std::size_t k = 0; k < centers.size(); ++k) {
      sweep_center(v, centers[k], v.index().ball_query(as_span(centers[k]), p.sMax), p, local);
    }
#pragma omp critical
    for (std::size_t i = 0; i < best.size(); ++i) best[i] = std::max(best[i], local[i]);
  }
  return best;
}

std::vector<double> ball_masses(const DiscreteVarifold& v, const std::vector<Vec>& centers, const std::vector<double>& radii) {
  std::vector<double> out(centers.size(), 0.0);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::size_t k = 0; k < centers.size(); ++k) {
    // Summing in index order matches the serial reference exactly.
    double s = 0.0;
    for (std::size_t i : v.index().ball_query(as_span(centers[k]), radii[k])) s += v.weight(i);
    out[k] = s;
  }
  return out;
}

std::vector<std::optional<double>> medians(const DiscreteVarifold& v, const std::vector<double>& values,
                                           const std::vector<Vec>& centers, const std::vector<double>& radii,
                                           double lambda) {
  std::vector<std::optional<double>> out(centers.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::size_t k = 0; k < centers.size(); ++k) {
    std::vector<std::pair<double, double>> samples;
    for (std::size_t i : v.index().ball_query(as_span(centers[k]), radii[k])) samples.emplace_back(values[i], v.weight(i));
    out[k] = weighted_median(std::move(samples), lambda);
  }
  return out;
}

}  // namespace varitool::kernels::omp
