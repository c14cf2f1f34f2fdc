#include "oracles.hpp"

#include "varitool/errors.hpp"
#include "varitool/families.hpp"
#include "varitool/fields.hpp"
#include "varitool/kernels.hpp"
#include "varitool/variation.hpp"

#include <doctest.h>

#include <random>

using namespace varitool;

namespace {

Vec vec2(double x, double y) {
  Vec v(2);
  v << x, y;
  return v;
}

Vec random_vec(std::mt19937_64& rng, int n, double scale) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Vec v(n);
  for (int k = 0; k < n; ++k) v(k) = scale * unit(rng);
  return v;
}

TestVectorField linear_combination(double a, const TestVectorField& f, double b, const TestVectorField& g) {
  TestVectorField out;
  out.theta = [=](const Vec& x) -> Vec { return a * f.theta(x) + b * g.theta(x); };
  out.dtheta = [=](const Vec& x) -> Mat { return a * f.dtheta(x) + b * g.dtheta(x); };
  out.center = f.center;
  out.supportRadius = (f.center - g.center).norm() + std::max(f.supportRadius, g.supportRadius);
  out.supNorm = std::abs(a) * f.supNorm + std::abs(b) * g.supNorm;
  return out;
}

std::vector<TestVectorField> sample_fields(int n) {
  std::vector<TestVectorField> out;
  Vec c = Vec::Zero(n);
  c(0) = 0.2;
  out.push_back(bump_field(c, 0.7, Vec::Unit(n, 0)));
  out.push_back(bump_field(Vec::Zero(n), 1.1, Vec::Unit(n, n - 1)));
  out.push_back(plateau_field(c, 0.3, 0.9, Vec::Ones(n).normalized()));
  out.push_back(radial_field(Vec::Zero(n), 0.4, 1.2, 1.0));
  out.push_back(radial_field(c, 0.1, 0.5, -1.0, false));
  return out;
}

}  // namespace

TEST_CASE("vector fields vanish outside their support and match finite differences") {
  std::mt19937_64 rng(3);
  for (int n : {2, 3}) {
    for (const auto& field : sample_fields(n)) {
      CAPTURE(field.label);
      for (int i = 0; i < 100; ++i) {
        Vec dir = random_vec(rng, n, 1.0).normalized();
        const Vec edge = field.center + dir * field.supportRadius * (1.0 + 1e-9);
        CHECK(field.theta(edge).norm() <= 1e-12);
        const Vec x = field.center + dir * field.supportRadius * std::uniform_real_distribution<double>(0.0, 0.98)(rng);
        const Mat exact = field.dtheta(x);
        const Mat approx = finite_difference_jacobian(field.theta, x, 1e-6);
        CHECK((exact - approx).norm() <= 1e-6 * std::max(1.0, exact.norm()));
        CHECK(field.theta(x).norm() <= field.supNorm * (1.0 + 1e-9));
      }
    }
  }
}

TEST_CASE("scalar test functions match finite differences") {
  std::mt19937_64 rng(4);
  const Vec c = vec2(0.1, -0.2);
  const std::vector<ScalarTestFunction> fns{radial_cap(c, 0.8), plateau_function(c, 0.2, 0.7),
                                            linear_function(vec2(1.0, -2.0), c),
                                            combine(2.0, radial_cap(c, 0.5), -1.0, plateau_function(c, 0.1, 0.4)),
                                            rescaled(radial_cap(c, 0.8), 0.3, 2.0)};
  for (const auto& f : fns) {
    for (int i = 0; i < 100; ++i) {
      const Vec x = c + random_vec(rng, 2, 0.9);
      const Vec exact = f.df(x);
      CHECK((exact - finite_difference_gradient(f.f, x, 1e-6)).norm() <= 1e-6 * std::max(1.0, exact.norm()));
    }
  }
  const auto cap = radial_cap(c, 0.8);
  CHECK(cap.f(c + vec2(0.8, 0.0)) == 0.0);
  CHECK(cap.f(c) == 1.0);
}

TEST_CASE("first variation of a single atom") {
  const auto theta = bump_field(vec2(0.3, 0.1), 1.0, vec2(1.0, 0.0));
  const auto v = DiscreteVarifold::from_atoms(1, 2, {{vec2(0, 0), Subspace::coordinate(2, 1), 1.0}});
  const double c = finite_difference_jacobian(theta.theta, vec2(0, 0), 1e-6)(0, 0);
  CHECK(std::abs(c) > 0.1);
  CHECK(first_variation(v, theta) == doctest::Approx(c).epsilon(1e-7));
}

TEST_CASE("complete lines have vanishing first variation") {
  const auto bundle = AnalyticFamily::plane_bundle_filling(1, 2, 4, 1.0, false);
  const auto v = sample(bundle, 1e-3);
  const auto dict = default_dictionary(vec2(-0.4, -0.4), vec2(0.4, 0.4));
  for (const auto& theta : dict) {
    CAPTURE(theta.label);
    REQUIRE(theta.center.norm() + theta.supportRadius < 1.0);
    CHECK(std::abs(first_variation(v, theta)) <= 5e-3 * theta.supNorm * v.total_mass());
  }
}

TEST_CASE("tangential divergence of the identity field on the circle") {
  const auto v = sample(AnalyticFamily::sphere(1, 2, 1.0), 1e-3);
  const auto identity_near = radial_field(Vec::Zero(2), 2.0, 3.0, 1.0, false);
  CHECK(first_variation(v, identity_near) == doctest::Approx(2 * oracle::pi).epsilon(1e-2));
}

TEST_CASE("total variation lower bounds") {
  const auto dict = default_dictionary(vec2(-1, -1), vec2(1, 1));
  CHECK(total_variation_lower_bound(DiscreteVarifold(1, 2), dict) == 0.0);
  CHECK_THROWS_AS(total_variation_lower_bound(DiscreteVarifold(1, 2), {}), ArgumentError);

  const auto circle = sample(AnalyticFamily::sphere(1, 2, 1.0), 1e-3);
  double previous = 0.0;
  std::vector<TestVectorField> growing;
  for (double outer : {1.05, 1.3, 2.0}) {
    growing.push_back(radial_field(Vec::Zero(2), 1.01, outer, -1.0));
    const double bound = total_variation_lower_bound(circle, growing);
    CHECK(bound >= previous);
    CHECK(bound <= 2 * oracle::pi * (1 + 1e-3));
    previous = bound;
  }
  CHECK(previous >= 0.9 * 2 * oracle::pi);

  for (double r : {0.5, 1.0}) {
    const auto family = AnalyticFamily::disc(2, 3, r);
    const auto v = sample(family, 0.02);
    Vec lo = -Vec::Ones(3) * r, hi = Vec::Ones(3) * r;
    CHECK(total_variation_lower_bound(v, default_dictionary(lo, hi)) <= family.delta_total_mass() * (1 + 1e-3));
  }
}

TEST_CASE("weak derivative of C1 functions") {
  const auto line = Subspace::coordinate(2, 1, 0);
  const auto v = DiscreteVarifold::from_atoms(1, 2, {{vec2(0, 0), line, 1.0}});
  Mat df(1, 2);
  df << 3.0, -1.0;
  const Mat w = weak_derivative_c1(v, df, vec2(0, 0));
  CHECK((w - df * line.proj()).norm() < 1e-15);

  Mat normal_only(1, 2);
  normal_only << 0.0, 2.0;
  CHECK(weak_derivative_c1(v, normal_only, vec2(0, 0)).norm() == 0.0);

  const auto cross = DiscreteVarifold::from_atoms(
      1, 2, {{vec2(0, 0), Subspace::coordinate(2, 1, 0), 1.0}, {vec2(0, 0), Subspace::coordinate(2, 1, 1), 1.0}});
  Mat e1(1, 2);
  e1 << 1.0, 0.0;
  CHECK(weak_derivative_c1(cross, e1, vec2(0, 0)).norm() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK_THROWS_AS(weak_derivative_c1(cross, e1, vec2(1, 1)), EmptyFiberError);
}

TEST_CASE("weak derivative chain rule and tangential bound") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Atom> atoms;
    for (int j = 0; j < 3; ++j) {
      Mat b(3, 2);
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 2; ++c) b(r, c) = gauss(rng);
      atoms.push_back({Vec::Zero(3), Subspace::from_basis(b), 0.5 + j});
    }
    const auto v = DiscreteVarifold::from_atoms(2, 3, atoms);
    Mat df(2, 3), dg(4, 2);
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 3; ++c) df(r, c) = gauss(rng);
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 2; ++c) dg(r, c) = gauss(rng);
    const Mat composite = weak_derivative_c1(v, dg * df, Vec::Zero(3));
    CHECK((composite - dg * weak_derivative_c1(v, df, Vec::Zero(3))).norm() <= 1e-12 * (1 + composite.norm()));
  }
  // With a single plane, |V Df| equals |Df restricted to the plane|.
  const auto plane = Subspace::coordinate(3, 2);
  const auto one = DiscreteVarifold::from_atoms(2, 3, {{Vec::Zero(3), plane, 1.0}});
  Mat df(1, 3);
  df << 1.0, 2.0, 5.0;
  CHECK(weak_derivative_c1(one, df, Vec::Zero(3)).norm() == doctest::Approx(std::sqrt(5.0)));
}

TEST_CASE("first variation is linear") {
  std::mt19937_64 rng(9);
  const auto v = sample(AnalyticFamily::sphere(2, 3, 0.8), 0.05);
  const auto fields = sample_fields(3);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  for (int i = 0; i < 20; ++i) {
    const auto& f = fields[i % fields.size()];
    const auto& g = fields[(i + 2) % fields.size()];
    const double a = coef(rng), b = coef(rng);
    const double lhs = first_variation(v, linear_combination(a, f, b, g));
    const double rhs = a * first_variation(v, f) + b * first_variation(v, g);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * (1 + std::abs(lhs)));
  }
}

TEST_CASE("first variation scales by lambda^(m-1) under dilation") {
  for (const auto& v : {sample(AnalyticFamily::sphere(1, 2, 1.0), 0.01), sample(AnalyticFamily::disc(2, 3, 0.9), 0.05)}) {
    for (const auto& theta : sample_fields(v.n())) {
      for (double lambda : {0.5, 3.0}) {
        const double base = first_variation(v, theta);
        const double scaled = first_variation(v.dilated(lambda), dilated(theta, lambda));
        CHECK(std::abs(scaled - std::pow(lambda, v.m() - 1) * base) <= 1e-10 * std::abs(scaled) + 1e-13);
      }
    }
  }
}

TEST_CASE("distributional boundary") {
  const auto disc = AnalyticFamily::disc(2, 3, 1.0);
  const auto dv = sample(disc, 0.01);
  const auto everything = [](const Vec&) { return true; };
  for (const auto& theta : default_dictionary(-Vec::Ones(3), Vec::Ones(3)))
    CHECK(std::abs(distributional_boundary_eval(disc, dv, everything, theta)) <= 1e-2 * theta.supNorm);

  const auto circle = AnalyticFamily::sphere(1, 2, 1.0);
  const auto cv = sample(circle, 1e-3);
  const auto e1 = plateau_field(Vec::Zero(2), 1.5, 2.0, vec2(1.0, 0.0));
  const double value = distributional_boundary_eval(circle, cv, [](const Vec& x) { return x(0) > 0; }, e1);
  CHECK(std::abs(value) == doctest::Approx(2.0).epsilon(2e-2));

  // Empty set: both terms vanish.
  FirstVariationMeasure none(2);
  CHECK(distributional_boundary_eval(cv, none, [](const Vec&) { return false; }, e1) == 0.0);
}

TEST_CASE("serial and OpenMP kernels agree") {
  const auto v = sample(AnalyticFamily::disc(2, 3, 1.0), 0.05);
  for (const auto& theta : sample_fields(3)) {
    const double a = kernels::serial::first_variation(v, theta);
    const double b = kernels::omp::first_variation(v, theta);
    CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)));
  }
  MaximalParams p;
  p.sMin = 0.25;
  p.sMax = 2.0;
  std::vector<Vec> centers;
  for (std::size_t i = 0; i < v.size(); i += 7) centers.push_back(v.position(i));
  centers.push_back(Vec::Zero(3));
  const auto ms = kernels::serial::maximal_at_atoms(v, centers, p);
  const auto mo = kernels::omp::maximal_at_atoms(v, centers, p);
  REQUIRE(ms.size() == mo.size());
  for (std::size_t i = 0; i < ms.size(); ++i) CHECK(std::abs(ms[i] - mo[i]) <= 1e-12 * std::max(1.0, ms[i]));

  std::vector<double> radii(centers.size(), 0.4), values;
  const auto f = radial_cap(Vec::Zero(3), 0.9);
  for (std::size_t i = 0; i < v.size(); ++i) values.push_back(f.f(v.position(i)));
  const auto bs = kernels::serial::ball_masses(v, centers, radii);
  const auto bo = kernels::omp::ball_masses(v, centers, radii);
  const auto gs = kernels::serial::medians(v, values, centers, radii, 0.5);
  const auto go = kernels::omp::medians(v, values, centers, radii, 0.5);
  for (std::size_t i = 0; i < centers.size(); ++i) {
    CHECK(std::abs(bs[i] - bo[i]) <= 1e-12 * std::max(1.0, bs[i]));
    CHECK(gs[i].has_value() == go[i].has_value());
    if (gs[i] && go[i]) CHECK(*gs[i] == *go[i]);
  }
}
