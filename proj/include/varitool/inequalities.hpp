#pragma once

#include "varitool/families.hpp"
#include "varitool/fields.hpp"
#include "varitool/maximal.hpp"
#include "varitool/report.hpp"
#include "varitool/varifold.hpp"

#include <optional>
#include <string>
#include <vector>

namespace varitool {

/// A sampled varifold together with a quadrature of its first variation and,
/// when available, the analytic family it came from.
struct Specimen {
  std::optional<AnalyticFamily> family;
  DiscreteVarifold sample;
  FirstVariationMeasure delta;
  double h = 0.0;

  int m() const { return sample.m(); }
  int n() const { return sample.n(); }
  std::string label() const;
};

Specimen make_specimen(const AnalyticFamily& family, double h);
/// Image under x -> lambda x (the analytic family is dropped).
Specimen dilated(const Specimen& s, double lambda);

/// Where ||delta V||(R^n) comes from.
enum class DeltaSource { Analytic, DictionaryLowerBound };

/// The explicit constant of the general isoperimetric inequality, used for
/// gamma(m) on every right-hand side.
double isoperimetric_constant(int m);

VerificationReport verify_isoperimetric(const Specimen& s, double d, const MaximalParams& p,
                                        DeltaSource source = DeltaSource::Analytic,
                                        const std::vector<TestVectorField>* dictionary = nullptr);

/// Requires spt ||V|| inside B(a, r).
VerificationReport verify_ball_iso(const Specimen& s, const Vec& a, double r, DeltaSource source = DeltaSource::Analytic,
                                   const std::vector<TestVectorField>* dictionary = nullptr);

/// Principal inequality and, when applicable, the mass bound by the size of
/// the positive-density carrier. Needs m >= 2 and exact densities.
std::vector<VerificationReport> verify_size_iso(const AnalyticFamily& family, double d);

/// Averaged Sobolev inequality with medians g over balls B(a, r(a)) and the
/// ball-ratio region A. Without betaN the Besicovitch factor is replaced by 1.
VerificationReport verify_sobolev_avg(const Specimen& s, const ScalarTestFunction& f, const MedianParams& mp, double d,
                                      std::optional<double> beta_n = std::nullopt);

/// Sobolev inequality on A = {density >= d} using exact family densities.
VerificationReport verify_sobolev_rect(const Specimen& s, const ScalarTestFunction& f, double d);

/// Poincare inequality for V supported in U(a, r).
VerificationReport verify_poincare(const Specimen& s, const ScalarTestFunction& f, const Vec& a, double r);

/// Largest impliedGammaLowerBound among reports for dimension m.
double gamma_lower_bound(const std::vector<VerificationReport>& reports, int m);

/// Checks |delta V(theta)| and |V boundary E(y)(theta)| <= tol * scale(theta)
/// for a slab sample, a function f with Df|T = 0, every y, and every theta,
/// where scale(theta) = sum w |D theta(x)|.
VerificationReport decomposition_check(const Specimen& s, const ScalarTestFunction& f, const std::vector<double>& y_grid,
                                       const std::vector<TestVectorField>& dictionary, double tol = 1e-3);

/// Weighted L^beta norm (beta = m/(m-1), sup for m = 1) of values over a subset of atoms.
double region_norm(const DiscreteVarifold& v, const std::vector<std::size_t>& region, const std::vector<double>& values);

}  // namespace varitool
