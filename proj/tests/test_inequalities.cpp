#include "oracles.hpp"

#include "varitool/errors.hpp"
#include "varitool/families.hpp"
#include "varitool/inequalities.hpp"

#include <doctest.h>

using namespace varitool;

namespace {

double param(const VerificationReport& r, const std::string& key) { return std::get<double>(r.params.at(key)); }

MedianParams medians_over(double radius) {
  MedianParams mp;
  mp.radius = [radius](const Vec&) { return radius; };
  return mp;
}

}  // namespace

TEST_CASE("ball isoperimetric inequality for the unit disc") {
  const auto s = make_specimen(AnalyticFamily::disc(2, 3, 1.0), 0.05);
  const auto r = verify_ball_iso(s, Vec::Zero(3), 1.0);
  CHECK(r.lhs == doctest::Approx(std::sqrt(oracle::pi)).epsilon(1e-12));
  CHECK(param(r, "deltaTotal") == doctest::Approx(2 * oracle::pi).epsilon(1e-12));
  CHECK(param(r, "impliedGammaLowerBound") == doctest::Approx(0.5 / std::sqrt(oracle::pi)).epsilon(1e-12));
  CHECK(r.pass);
  CHECK(r.ratio < 0.01);
  CHECK_THROWS_AS(verify_ball_iso(s, Vec::Zero(3), 0.5), PreconditionError);
  CHECK_THROWS_AS(verify_ball_iso(s, Vec::Zero(3), 0.0), DomainError);
}

TEST_CASE("ball isoperimetric bound from a dictionary is weaker") {
  const auto s = make_specimen(AnalyticFamily::disc(2, 3, 1.0), 0.05);
  const auto dict = default_dictionary(-Vec::Ones(3), Vec::Ones(3));
  const auto exact = verify_ball_iso(s, Vec::Zero(3), 1.0);
  const auto bounded = verify_ball_iso(s, Vec::Zero(3), 1.0, DeltaSource::DictionaryLowerBound, &dict);
  CHECK(param(bounded, "deltaTotal") <= param(exact, "deltaTotal") * (1 + 1e-3));
  CHECK(bounded.ratio >= exact.ratio * (1 - 1e-3));
}

TEST_CASE("isoperimetric inequality is attained by the circle") {
  const auto s = make_specimen(AnalyticFamily::sphere(1, 2, 1.0), 1e-3);
  MaximalParams p;
  p.sMin = 5e-3;
  p.sMax = 3.0;
  p.centers = CenterStrategy::Grid;
  const auto r = verify_isoperimetric(s, oracle::pi * (1 - 1e-6), p);
  CHECK(r.lhs == 1.0);
  CHECK(r.pass);
  CHECK(r.ratio == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(param(r, "impliedGammaLowerBound") <= 0.5);
  // Above the sup of the maximal function nothing is left.
  const auto above = verify_isoperimetric(s, 3.5, p);
  CHECK(above.lhs == 0.0);
  CHECK(above.pass);
  CHECK_THROWS_AS(verify_isoperimetric(s, 0.0, p), DomainError);
}

TEST_CASE("isoperimetric inequality on two-dimensional families") {
  MaximalParams p;
  for (const auto& family : {AnalyticFamily::disc(2, 3, 1.0), AnalyticFamily::sphere(2, 3, 1.0)}) {
    const auto s = make_specimen(family, 0.1);
    p.sMin = 0.5;
    p.sMax = 2.5;
    for (double d : {0.1, 0.5, 1.0}) {
      const auto r = verify_isoperimetric(s, d, p);
      CAPTURE(r.summary());
      CHECK(r.pass);
      CHECK(param(r, "superlevelMass") <= family.total_mass() * (1 + 1e-9));
    }
  }
}

TEST_CASE("size isoperimetric inequality") {
  const auto reports = verify_size_iso(AnalyticFamily::disc(2, 3, 1.0), 1.0);
  REQUIRE(!reports.empty());
  for (const auto& r : reports) {
    CAPTURE(r.summary());
    CHECK(r.pass);
  }
  CHECK(param(reports[0], "superlevelMeasure") == doctest::Approx(oracle::pi));
  CHECK_THROWS_AS(verify_size_iso(AnalyticFamily::sphere(1, 2, 1.0), 1.0), PreconditionError);
  CHECK_THROWS_AS(verify_size_iso(AnalyticFamily::slab(2, 3, -Vec::Ones(3), Vec::Ones(3)), 1.0),
                  UnsupportedFamilyError);
}

TEST_CASE("averaged Sobolev inequality") {
  const auto s = make_specimen(AnalyticFamily::disc(2, 3, 1.0), 0.05);
  const auto f = radial_cap(Vec::Zero(3), 0.8);
  const auto free = verify_sobolev_avg(s, f, medians_over(0.3), 0.5);
  CAPTURE(free.summary());
  CHECK(free.pass);
  CHECK(std::get<std::string>(free.params.at("betaN")) == "betaFree");
  const auto with_beta = verify_sobolev_avg(s, f, medians_over(0.3), 0.5, 5.0);
  CHECK(with_beta.rhs > free.rhs);
  CHECK(with_beta.lhs == free.lhs);
  CHECK_THROWS_AS(verify_sobolev_avg(s, f, medians_over(0.3), 0.5, 0.5), DomainError);
  CHECK_THROWS_AS(verify_sobolev_avg(s, combine(1.0, f, -2.0, f), medians_over(0.3), 0.5), DomainError);
}

TEST_CASE("rectifiable Sobolev inequality") {
  const auto s = make_specimen(AnalyticFamily::sphere(2, 3, 1.0), 0.05);
  Vec c = Vec::Zero(3);
  c(2) = 1.0;
  const auto r = verify_sobolev_rect(s, radial_cap(c, 0.7), 1.0);
  CAPTURE(r.summary());
  CHECK(r.pass);
  CHECK_THROWS_AS(verify_sobolev_rect(dilated(s, 2.0), radial_cap(c, 0.7), 1.0), PreconditionError);
}

TEST_CASE("Poincare inequality is dilation invariant") {
  const auto s = make_specimen(AnalyticFamily::disc(2, 3, 1.0), 0.05);
  const auto f = plateau_function(Vec::Zero(3), 0.3, 0.9);
  const auto base = verify_poincare(s, f, Vec::Zero(3), 1.5);
  CHECK(base.pass);
  for (double lambda : {0.25, 4.0}) {
    const auto r = verify_poincare(dilated(s, lambda), rescaled(f, lambda, 1.0), Vec::Zero(3), 1.5 * lambda);
    CHECK(r.ratio == doctest::Approx(base.ratio).epsilon(1e-9));
  }
  CHECK_THROWS_AS(verify_poincare(s, f, Vec::Zero(3), 1.0), PreconditionError);
}

TEST_CASE("gamma lower bound collects implied bounds") {
  const auto disc = verify_ball_iso(make_specimen(AnalyticFamily::disc(2, 3, 1.0), 0.05), Vec::Zero(3), 1.0);
  const auto half = verify_ball_iso(make_specimen(AnalyticFamily::disc(2, 3, 0.5), 0.05), Vec::Zero(3), 1.0);
  const double bound = gamma_lower_bound({disc, half}, 2);
  CHECK(bound == doctest::Approx(gamma_disc_lower(2)));
  CHECK(bound <= isoperimetric_constant(2));
  CHECK_THROWS_AS(gamma_lower_bound({disc}, 3), ArgumentError);
}

TEST_CASE("slab decomposition has no boundary") {
  const Vec lo = -Vec::Ones(2), hi = Vec::Ones(2);
  const auto s = make_specimen(AnalyticFamily::slab(1, 2, lo, hi), 0.02);
  Vec e2 = Vec::Zero(2);
  e2(1) = 1.0;
  const auto f = ridge_function(e2, [](double t) { return std::sin(t); }, [](double t) { return std::cos(t); }, "sin");
  std::vector<TestVectorField> dict;
  for (double r : {0.2, 0.4}) {
    for (int axis = 0; axis < 2; ++axis) dict.push_back(bump_field(Vec::Zero(2), r, Vec::Unit(2, axis)));
  }
  const auto r = decomposition_check(s, f, {-0.5, 0.0, 0.3}, dict);
  CAPTURE(r.summary());
  CHECK(r.pass);
  const auto tilted = linear_function(Vec::Ones(2), Vec::Zero(2));
  CHECK_THROWS_AS(decomposition_check(s, tilted, {0.0}, dict), PreconditionError);
  CHECK_THROWS_AS(decomposition_check(s, f, {0.0}, {}), ArgumentError);
}
