#pragma once

#include "varitool/families.hpp"
#include "varitool/fields.hpp"
#include "varitool/varifold.hpp"

#include <vector>

namespace varitool {

/// delta V(theta) = sum over atoms of w * (P . D theta(x)).
double first_variation(const DiscreteVarifold& v, const TestVectorField& theta);

/// max over the dictionary of |delta V(theta)| / supNorm(theta); a lower
/// bound for ||delta V||(R^n).
double total_variation_lower_bound(const DiscreteVarifold& v, const std::vector<TestVectorField>& dictionary);

/// V Df(x) = Df(x) q(x) for the fiber-averaged projection q at an atom position.
Mat weak_derivative_c1(const DiscreteVarifold& v, const Mat& df_at_x, const Vec& x);

/// Integral of |V Df| d||V|| for a scalar C^1 function, grouping atoms that
/// share a position into one fiber.
double weak_gradient_integral(const DiscreteVarifold& v, const ScalarTestFunction& f);

/// Per-atom |V Df(x)| (same value for all atoms of a fiber).
std::vector<double> weak_gradient_norms(const DiscreteVarifold& v, const ScalarTestFunction& f);

/// V boundary E evaluated on theta: (delta V restricted to E)(theta) taken
/// from the supplied first-variation measure, minus the quadrature of
/// delta(V restricted to E x G(n,m))(theta).
double distributional_boundary_eval(const DiscreteVarifold& v, const FirstVariationMeasure& delta, const PointPredicate& in_set,
                                    const TestVectorField& theta);
/// Same with the analytic first variation of the family the sample came from.
double distributional_boundary_eval(const AnalyticFamily& family, const DiscreteVarifold& v, const PointPredicate& in_set,
                                    const TestVectorField& theta);

}  // namespace varitool
