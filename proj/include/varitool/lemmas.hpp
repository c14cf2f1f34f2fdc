#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace varitool {

// ---- iteration lemma ----

/// kappa d^(-mu) (1/lambda)^(mu^2/(1-mu)): the bound for a(d)^(1-mu).
double iteration_bound(double kappa, double lambda, double mu, double d);

struct IterationCheck {
  bool hypothesisHolds = false;
  /// Number of grid points where the conclusion fails (only counted when the
  /// hypothesis holds).
  int violations = 0;
  /// Largest a^(1-mu) / bound over the grid.
  double worstRatio = 0.0;
};

/// `grid` is geometric (d_{i+1} = q d_i) and lambda = q^(-k) for an integer
/// k >= 1; `a` holds a_i, read as the step function equal to a_i on
/// [d_i, d_{i+1}), to a_0 below d_0 and to 0 from q d_{N-1} on. Checks the
/// hypothesis for all d > 0 and, when it holds, the conclusion.
IterationCheck check_iteration(const std::vector<double>& grid, const std::vector<double>& a, double kappa, double lambda,
                               double mu);

/// Geometric grid of `count` points starting at d0 with ratio q.
std::vector<double> geometric_grid(double d0, double q, int count);

/// Random nonnegative a satisfying the hypothesis of check_iteration.
std::vector<double> admissible_iteration_instance(const std::vector<double>& grid, double kappa, double lambda, double mu,
                                                  std::mt19937_64& rng);

// ---- calculus lemma ----

struct CalculusOptions {
  int gridPoints = 256;
  int refinements = 2;
  /// r is searched on [s, s * searchFactor].
  double searchFactor = 1e6;
};

struct CalculusResult {
  double t = 0.0;
  double r = 0.0;
  int refinementsUsed = 0;
};

/// Finds t in [s, r] with f(5t) <= 5^m r g(t) after checking the lemma's
/// hypotheses on the grid. HypothesisError when they fail, ResolutionError
/// when no grid witness exists after the allowed refinements.
CalculusResult calculus_find_t(const std::function<double(double)>& f, const std::function<double(double)>& g, double s,
                               double m, const CalculusOptions& options = {});

struct CalculusInstance {
  std::function<double(double)> f;
  std::function<double(double)> g;
  double s = 1.0;
  double m = 1.0;
};
/// Random (f, g, s, m) satisfying the hypotheses.
CalculusInstance admissible_calculus_instance(std::mt19937_64& rng);

// ---- weak Lebesgue embedding ----

/// (1 - q/p)^(-1/q) mass^(1/q - 1/p) kappa; DomainError unless 1 <= q < p < inf.
double weak_lp_bound(double mass, double kappa, double p, double q);

struct WeakLpResult {
  double lhs = 0.0;
  double kappa = 0.0;
  double mass = 0.0;
  double bound = 0.0;
  bool holds() const { return lhs <= bound * (1.0 + 1e-12); }
};

/// Atomic measure: weights w_j, values f_j >= 0. kappa = sup_d d phi{f >= d}^(1/p)
/// is computed exactly.
WeakLpResult weak_lp_check(const std::vector<double>& weights, const std::vector<double>& values, double p, double q);

/// Lebesgue measure on (0, length] and a positive nonincreasing f with an
/// integrable singularity at 0.
WeakLpResult weak_lp_check_decreasing(const std::function<double(double)>& f, double length, double p, double q);

// ---- integrating superlevel sets ----

struct SuperlevelIntegral {
  double lhs = 0.0;
  double rhs = 0.0;
};

/// lhs = phi_(p)(f), rhs = integral over y > 0 of phi{f > y}^(1/p), both exact
/// for atomic phi; p = inf uses 0^0 = 0.
SuperlevelIntegral superlevel_integral(const std::vector<double>& weights, const std::vector<double>& values, double p);

}  // namespace varitool
