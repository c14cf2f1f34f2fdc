#include "varitool/suites.hpp"

#include "varitool/errors.hpp"
#include "varitool/lemmas.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <tuple>
#include <vector>

namespace varitool {

namespace {

VerificationReport suite_report(const std::string& theorem, int instances, std::uint64_t seed) {
  if (instances < 1) throw DomainError(theorem + ": need at least one instance");
  VerificationReport r;
  r.name = theorem;
  r.theorem = theorem;
  r.params["instances"] = double(instances);
  r.params["seed"] = double(seed);
  r.rhs = 1.0;
  return r;
}

// Atomic measure with a few repeated values and some zeros.
void random_atoms(std::mt19937_64& rng, std::vector<double>& weights, std::vector<double>& values) {
  std::uniform_int_distribution<int> count(1, 60);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int n = count(rng);
  weights.resize(n);
  values.resize(n);
  for (int j = 0; j < n; ++j) {
    weights[j] = 0.05 + 2.0 * unit(rng);
    const double u = unit(rng);
    if (u < 0.1) {
      values[j] = 0.0;
    } else if (u < 0.25 && j > 0) {
      values[j] = values[j - 1];
    } else {
      values[j] = std::exp(4.0 * unit(rng) - 2.0);
    }
  }
}

}  // namespace

VerificationReport iteration_suite(int instances, std::uint64_t seed) {
  auto r = suite_report("iteration-lemma", instances, seed);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> shift(1, 3);
  std::uniform_int_distribution<int> length(8, 48);
  int violations = 0;
  int rejected = 0;
  double worst = 0.0;
  for (int i = 0; i < instances; ++i) {
    const double kappa = std::exp(2.0 * unit(rng) - 1.0);
    const double mu = 0.05 + 0.9 * unit(rng);
    const double q = 1.2 + 1.8 * unit(rng);
    const int k = shift(rng);
    const double lambda = std::pow(q, -k);
    const auto grid = geometric_grid(std::exp(4.0 * unit(rng) - 2.0), q, length(rng));
    const auto a = admissible_iteration_instance(grid, kappa, lambda, mu, rng);
    const auto check = check_iteration(grid, a, kappa, lambda, mu);
    if (!check.hypothesisHolds) {
      ++rejected;
      continue;
    }
    violations += check.violations;
    worst = std::max(worst, check.worstRatio);
  }
  r.lhs = rejected > 0 ? std::numeric_limits<double>::infinity() : worst;
  r.params["violations"] = double(violations);
  r.params["inadmissible"] = double(rejected);
  r.finalize();
  return r;
}

VerificationReport calculus_suite(int instances, std::uint64_t seed, int refinements) {
  auto r = suite_report("calculus-lemma", instances, seed);
  std::mt19937_64 rng(seed);
  CalculusOptions options;
  options.refinements = refinements;
  int failures = 0;
  int most = 0;
  for (int i = 0; i < instances; ++i) {
    const auto inst = admissible_calculus_instance(rng);
    try {
      const auto res = calculus_find_t(inst.f, inst.g, inst.s, inst.m, options);
      const bool witness = res.t >= inst.s && res.t <= res.r &&
                           inst.f(5.0 * res.t) <= std::pow(5.0, inst.m) * res.r * inst.g(res.t);
      if (!witness) ++failures;
      most = std::max(most, res.refinementsUsed);
    } catch (const ResolutionError&) {
      ++failures;
    }
  }
  r.lhs = failures > 0 ? std::numeric_limits<double>::infinity() : double(most);
  r.rhs = double(refinements);
  r.params["failures"] = double(failures);
  r.params["gridPoints"] = double(options.gridPoints);
  r.finalize();
  return r;
}

VerificationReport weak_lp_suite(int instances, std::uint64_t seed, std::optional<std::pair<double, double>> pq) {
  if (pq) weak_lp_bound(1.0, 1.0, pq->first, pq->second);
  auto r = suite_report("weak-lp", instances, seed);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> weights, values;
  int violations = 0;
  double worst = 0.0;
  for (int i = 0; i < instances; ++i) {
    double p, q;
    if (pq) {
      std::tie(p, q) = *pq;
    } else {
      p = 1.1 + 6.0 * unit(rng);
      q = 1.0 + (p - 1.0) * 0.98 * unit(rng);
    }
    random_atoms(rng, weights, values);
    const auto res = weak_lp_check(weights, values, p, q);
    if (!res.holds()) ++violations;
    if (res.bound > 0.0) worst = std::max(worst, res.lhs / res.bound);
  }
  r.lhs = worst;
  r.params["violations"] = double(violations);
  if (pq) {
    r.params["p"] = pq->first;
    r.params["q"] = pq->second;
  } else {
    r.params["exponents"] = std::string("random");
  }
  r.finalize();
  return r;
}

VerificationReport superlevel_suite(int instances, std::uint64_t seed) {
  auto r = suite_report("superlevel-integral", instances, seed);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> weights, values;
  double worst = 0.0;
  double equality_gap = 0.0;
  int violations = 0;
  for (int i = 0; i < instances; ++i) {
    const double u = unit(rng);
    const double p = u < 0.2 ? 1.0 : u < 0.3 ? std::numeric_limits<double>::infinity() : 1.0 + 5.0 * unit(rng);
    random_atoms(rng, weights, values);
    const auto res = superlevel_integral(weights, values, p);
    if (res.lhs > res.rhs * (1.0 + 1e-12)) ++violations;
    if (res.rhs > 0.0) worst = std::max(worst, res.lhs / res.rhs);
    if (p == 1.0 && res.rhs > 0.0) equality_gap = std::max(equality_gap, std::abs(res.lhs - res.rhs) / res.rhs);
  }
  r.lhs = worst;
  r.params["violations"] = double(violations);
  r.params["p1EqualityGap"] = equality_gap;
  r.finalize();
  return r;
}

VerificationReport weak_lp_equality(double p, double q) {
  weak_lp_bound(1.0, 1.0, p, q);
  const auto res = weak_lp_check_decreasing([p](double x) { return std::pow(x, -1.0 / p); }, 1.0, p, q);
  VerificationReport r;
  r.name = "weak-lp-equality";
  r.theorem = "weak-lp";
  r.lhs = res.lhs;
  r.rhs = res.bound;
  r.params["p"] = p;
  r.params["q"] = q;
  r.params["kappa"] = res.kappa;
  r.params["exact"] = std::pow(1.0 - q / p, -1.0 / q);
  r.finalize();
  return r;
}

VerificationReport superlevel_hat(int atoms, double tolerance) {
  if (atoms < 1) throw DomainError("superlevel hat: need at least one atom");
  std::vector<double> weights(atoms, 2.0 / atoms), values(atoms);
  for (int j = 0; j < atoms; ++j) values[j] = 1.0 - std::abs(-1.0 + (j + 0.5) * 2.0 / atoms);
  const auto res = superlevel_integral(weights, values, 2.0);
  const double lhs_exact = std::sqrt(2.0 / 3.0);
  const double rhs_exact = 2.0 * std::sqrt(2.0) / 3.0;
  VerificationReport r;
  r.name = "superlevel-hat";
  r.theorem = "superlevel-integral";
  r.lhs = std::max(std::abs(res.lhs / lhs_exact - 1.0), std::abs(res.rhs / rhs_exact - 1.0));
  r.rhs = tolerance;
  r.params["atoms"] = double(atoms);
  r.params["normValue"] = res.lhs;
  r.params["integralValue"] = res.rhs;
  r.finalize();
  return r;
}

}  // namespace varitool
