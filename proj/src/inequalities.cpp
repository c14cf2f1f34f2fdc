#include "varitool/inequalities.hpp"

#include "varitool/errors.hpp"
#include "varitool/kernels.hpp"
#include "varitool/variation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace varitool {

namespace {

const char* kGammaSource = "explicit isoperimetric constant";

ParamMap base_params(const Specimen& s) {
  ParamMap p;
  p["m"] = double(s.m());
  p["n"] = double(s.n());
  p["h"] = s.h;
  p["family"] = s.label();
  p["atoms"] = double(s.sample.size());
  p["gammaSource"] = std::string(kGammaSource);
  return p;
}

double sample_mass(const DiscreteVarifold& v) { return v.total_mass(); }

std::vector<TestVectorField> bounding_dictionary(const DiscreteVarifold& v) {
  Vec lo = Vec::Zero(v.n()), hi = Vec::Zero(v.n());
  if (!v.empty()) {
    lo = hi = v.position(0);
    for (std::size_t i = 1; i < v.size(); ++i) {
      lo = lo.cwiseMin(v.position(i));
      hi = hi.cwiseMax(v.position(i));
    }
  }
  return default_dictionary(lo, hi);
}

// ||delta V||(R^n) and the flag describing it.
double delta_total(const Specimen& s, DeltaSource source, const std::vector<TestVectorField>* dictionary,
                   VerificationReport& report) {
  if (source == DeltaSource::Analytic) {
    report.params["deltaSource"] = std::string("analytic");
    return s.family ? s.family->delta_total_mass() : s.delta.total();
  }
  const auto dict = dictionary ? *dictionary : bounding_dictionary(s.sample);
  report.params["deltaSource"] = std::string("dictionaryLowerBound");
  report.params["dictionarySize"] = double(dict.size());
  report.conservative.push_back("rhs uses a dictionary lower bound for the total first variation (errs toward fail)");
  return total_variation_lower_bound(s.sample, dict);
}

void require_nonnegative(const DiscreteVarifold& v, const std::vector<double>& values) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!(values[i] >= 0.0)) throw DomainError("test function must be nonnegative on the support");
}

std::vector<double> values_at_atoms(const DiscreteVarifold& v, const ScalarTestFunction& f) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = f.f(v.position(i));
  return out;
}

// Integral of f d||delta V|| + integral of |V Df| d||V||.
double sobolev_rhs_integrals(const Specimen& s, const ScalarTestFunction& f, VerificationReport& report) {
  const double pairing = s.delta.integrate(f.f);
  const double gradient = weak_gradient_integral(s.sample, f);
  report.params["deltaPairing"] = pairing;
  report.params["gradientIntegral"] = gradient;
  return pairing + gradient;
}

}  // namespace

std::string Specimen::label() const {
  if (family) return family->name();
  if (sample.meta()) return sample.meta()->family;
  return "atomic";
}

Specimen make_specimen(const AnalyticFamily& family, double h) {
  return Specimen{family, sample(family, h), first_variation_measure(family, h), h};
}

Specimen dilated(const Specimen& s, double lambda) {
  return Specimen{std::nullopt, s.sample.dilated(lambda), s.delta.dilated(lambda, s.m()), s.h * lambda};
}

double isoperimetric_constant(int m) { return gamma_upper(m); }

double region_norm(const DiscreteVarifold& v, const std::vector<std::size_t>& region, const std::vector<double>& values) {
  const int m = v.m();
  if (m == 1) {
    double best = 0.0;
    for (std::size_t i : region)
      if (v.weight(i) > 0.0) best = std::max(best, values[i]);
    return best;
  }
  const double beta = double(m) / (m - 1);
  double s = 0.0;
  for (std::size_t i : region) s += v.weight(i) * std::pow(values[i], beta);
  return std::pow(s, 1.0 / beta);
}

VerificationReport verify_isoperimetric(const Specimen& s, double d, const MaximalParams& p, DeltaSource source,
                                        const std::vector<TestVectorField>* dictionary) {
  if (!(d > 0.0)) throw DomainError("isoperimetric: d must be positive");
  if (s.family && !s.family->finite_mass()) throw PreconditionError("isoperimetric: total mass must be finite");
  p.validate();
  VerificationReport r;
  r.name = "isoperimetric " + s.label();
  r.theorem = "isoperimetric";
  r.params = base_params(s);
  const int m = s.m();
  const double mass = s.sample.empty() ? 0.0 : superlevel_mass(s.sample, d, p);
  const double delta = delta_total(s, source, dictionary, r);
  r.lhs = m == 1 ? (mass > 0.0 ? 1.0 : 0.0) : std::pow(mass, 1.0 - 1.0 / m);
  r.rhs = isoperimetric_constant(m) * std::pow(d, -1.0 / m) * delta;
  r.params["d"] = d;
  r.params["sMin"] = p.sMin;
  r.params["sMax"] = p.sMax;
  r.params["centers"] = std::string(p.centers == CenterStrategy::Grid ? "grid" : p.centers == CenterStrategy::Atoms ? "atoms" : "atoms+query");
  r.params["superlevelMass"] = mass;
  r.params["deltaTotal"] = delta;
  if (source == DeltaSource::Analytic && delta > 0.0) r.params["impliedGammaLowerBound"] = r.lhs * std::pow(d, 1.0 / m) / delta;
  r.conservative.push_back("lhs uses the maximal function over finitely many balls with radius >= sMin (a lower bound)");
  r.finalize();
  return r;
}

VerificationReport verify_ball_iso(const Specimen& s, const Vec& a, double r, DeltaSource source,
                                   const std::vector<TestVectorField>* dictionary) {
  if (!(r > 0.0)) throw DomainError("ball isoperimetric: radius must be positive");
  const double slack = r * (1.0 + 1e-12);
  for (std::size_t i = 0; i < s.sample.size(); ++i)
    if ((s.sample.position(i) - a).norm() > slack) throw PreconditionError("ball isoperimetric: support leaves B(a, r)");
  if (s.family && s.family->max_distance_from(a) > slack) throw PreconditionError("ball isoperimetric: support leaves B(a, r)");
  VerificationReport rep;
  rep.name = "ball-iso " + s.label();
  rep.theorem = "ball-iso";
  rep.params = base_params(s);
  const int m = s.m();
  const double mass = s.family ? s.family->total_mass() : sample_mass(s.sample);
  const double delta = delta_total(s, source, dictionary, rep);
  rep.lhs = std::pow(unit_ball_volume(m), -1.0 / m) / r * mass;
  rep.rhs = isoperimetric_constant(m) * delta;
  rep.params["r"] = r;
  rep.params["mass"] = mass;
  rep.params["massSource"] = std::string(s.family ? "analytic" : "quadrature");
  rep.params["deltaTotal"] = delta;
  if (delta > 0.0) rep.params["impliedGammaLowerBound"] = rep.lhs / delta;
  rep.finalize();
  return rep;
}

std::vector<VerificationReport> verify_size_iso(const AnalyticFamily& family, double d) {
  const int m = family.m();
  if (m < 2) throw PreconditionError("size isoperimetric: needs m >= 2");
  if (!(d > 0.0)) throw DomainError("size isoperimetric: d must be positive");
  if (std::holds_alternative<ProductSlab>(family.shape()))
    throw UnsupportedFamilyError("size isoperimetric: slab densities give no finite-measure carrier");
  if (!family.finite_mass()) throw PreconditionError("size isoperimetric: total mass must be finite");
  ParamMap params;
  params["m"] = double(m);
  params["n"] = double(family.n());
  params["family"] = family.name();
  params["gammaSource"] = std::string(kGammaSource);
  params["d"] = d;
  const double delta = family.delta_total_mass();
  params["deltaTotal"] = delta;

  std::vector<VerificationReport> out;
  VerificationReport principal;
  principal.name = "size-iso " + family.name();
  principal.theorem = "size-iso";
  principal.params = params;
  const double carrier = family.density_superlevel_measure(d);
  principal.params["superlevelMeasure"] = carrier;
  principal.lhs = d * std::pow(carrier, 1.0 - 1.0 / m);
  principal.rhs = isoperimetric_constant(m) * delta;
  principal.finalize();
  out.push_back(principal);

  const double positive = family.positive_density_measure();
  if (family.rectifiable() && std::isfinite(positive)) {
    VerificationReport post;
    post.name = "size-iso-mass " + family.name();
    post.theorem = "size-iso-mass";
    post.params = params;
    post.params["positiveDensityMeasure"] = positive;
    post.lhs = family.total_mass();
    post.rhs = m * isoperimetric_constant(m) * std::pow(positive, 1.0 / m) * delta;
    post.finalize();
    out.push_back(post);
  }
  return out;
}

VerificationReport verify_sobolev_avg(const Specimen& s, const ScalarTestFunction& f, const MedianParams& mp, double d,
                                      std::optional<double> beta_n) {
  mp.validate();
  if (!(d > 0.0)) throw DomainError("averaged Sobolev: d must be positive");
  if (beta_n && !(*beta_n >= 1.0)) throw DomainError("averaged Sobolev: the Besicovitch constant is at least 1");
  VerificationReport r;
  r.name = "sobolev-avg " + s.label();
  r.theorem = "sobolev-avg";
  r.params = base_params(s);
  const int m = s.m();
  const auto& v = s.sample;
  const auto values = values_at_atoms(v, f);
  require_nonnegative(v, values);

  const auto region = lower_density_region(v, d, mp.radius);
  std::vector<Vec> centers;
  std::vector<double> radii;
  for (std::size_t i : region) {
    centers.push_back(v.position(i));
    radii.push_back(mp.radius(centers.back()));
  }
  const auto medians = kernels::omp::medians(v, values, centers, radii, mp.lambda);
  std::vector<double> g(v.size(), 0.0);
  double region_mass = 0.0;
  for (std::size_t k = 0; k < region.size(); ++k) {
    g[region[k]] = medians[k].value_or(0.0);
    region_mass += v.weight(region[k]);
  }
  r.lhs = region_norm(v, region, g);
  const double beta = beta_n.value_or(1.0);
  const double constant =
      std::pow(1.0 - mp.lambda, -1.0) * std::pow(beta, 1.0 - 1.0 / m) * isoperimetric_constant(m) * std::pow(d, -1.0 / m);
  r.rhs = constant * sobolev_rhs_integrals(s, f, r);
  r.params["lambda"] = mp.lambda;
  r.params["d"] = d;
  r.params["regionAtoms"] = double(region.size());
  r.params["regionMass"] = region_mass;
  r.params["fBasedLhs"] = region_norm(v, region, values);
  if (beta_n) {
    r.params["betaN"] = *beta_n;
  } else {
    r.params["betaN"] = std::string("betaFree");
    if (m > 1) r.conservative.push_back("rhs takes the Besicovitch constant as 1, its lower bound (errs toward fail)");
  }
  r.finalize();
  return r;
}

VerificationReport verify_sobolev_rect(const Specimen& s, const ScalarTestFunction& f, double d) {
  if (!(d > 0.0)) throw DomainError("rectifiable Sobolev: d must be positive");
  if (!s.family) throw PreconditionError("rectifiable Sobolev: needs exact densities from an analytic family");
  VerificationReport r;
  r.name = "sobolev-rect " + s.label();
  r.theorem = "sobolev-rect";
  r.params = base_params(s);
  const auto& v = s.sample;
  const auto values = values_at_atoms(v, f);
  require_nonnegative(v, values);
  const auto region = lower_density_region(v, d, &*s.family);
  r.lhs = region_norm(v, region, values);
  r.rhs = isoperimetric_constant(s.m()) * std::pow(d, -1.0 / s.m()) * sobolev_rhs_integrals(s, f, r);
  r.params["d"] = d;
  r.params["regionAtoms"] = double(region.size());
  r.finalize();
  return r;
}

VerificationReport verify_poincare(const Specimen& s, const ScalarTestFunction& f, const Vec& a, double r) {
  if (!(r > 0.0)) throw DomainError("Poincare: radius must be positive");
  for (std::size_t i = 0; i < s.sample.size(); ++i)
    if (!((s.sample.position(i) - a).norm() < r)) throw PreconditionError("Poincare: support must lie in U(a, r)");
  if (s.family && !(s.family->max_distance_from(a) < r)) throw PreconditionError("Poincare: support must lie in U(a, r)");
  VerificationReport rep;
  rep.name = "poincare " + s.label();
  rep.theorem = "poincare";
  rep.params = base_params(s);
  const auto& v = s.sample;
  const auto values = values_at_atoms(v, f);
  require_nonnegative(v, values);
  double integral = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) integral += v.weight(i) * values[i];
  const int m = s.m();
  rep.lhs = std::pow(unit_ball_volume(m), -1.0 / m) / r * integral;
  rep.rhs = isoperimetric_constant(m) * sobolev_rhs_integrals(s, f, rep);
  rep.params["r"] = r;
  rep.params["fIntegral"] = integral;
  rep.finalize();
  return rep;
}

double gamma_lower_bound(const std::vector<VerificationReport>& reports, int m) {
  bool any = false;
  double best = 0.0;
  for (const auto& r : reports) {
    const auto mit = r.params.find("m");
    const auto git = r.params.find("impliedGammaLowerBound");
    if (mit == r.params.end() || git == r.params.end()) continue;
    if (std::get<double>(mit->second) != m) continue;
    any = true;
    best = std::max(best, std::get<double>(git->second));
  }
  if (!any) throw ArgumentError("gamma_lower_bound: no report for this dimension carries an implied bound");
  return best;
}

VerificationReport decomposition_check(const Specimen& s, const ScalarTestFunction& f, const std::vector<double>& y_grid,
                                       const std::vector<TestVectorField>& dictionary, double tol) {
  if (dictionary.empty()) throw ArgumentError("decomposition check: empty dictionary");
  const auto& v = s.sample;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vec grad = f.df(v.position(i));
    if ((v.plane(i).proj() * grad).norm() > 1e-12 * (1.0 + grad.norm()))
      throw PreconditionError("decomposition check: f must be constant along the planes");
  }
  std::vector<double> scale(dictionary.size(), 0.0);
  for (std::size_t k = 0; k < dictionary.size(); ++k)
    for (std::size_t i = 0; i < v.size(); ++i) scale[k] += v.weight(i) * dictionary[k].dtheta(v.position(i)).norm();

  double worst_delta = 0.0;
  for (std::size_t k = 0; k < dictionary.size(); ++k)
    if (scale[k] > 0.0) worst_delta = std::max(worst_delta, std::abs(first_variation(v, dictionary[k])) / scale[k]);
  double worst_boundary = 0.0;
  for (double y : y_grid) {
    const PointPredicate in_set = [&f, y](const Vec& x) { return f.f(x) > y; };
    const DiscreteVarifold part = restrict(v, in_set);
    for (std::size_t k = 0; k < dictionary.size(); ++k) {
      if (scale[k] == 0.0) continue;
      const double value = s.delta.apply_restricted(dictionary[k].theta, in_set) - first_variation(part, dictionary[k]);
      worst_boundary = std::max(worst_boundary, std::abs(value) / scale[k]);
    }
  }
  VerificationReport r;
  r.name = "decomposition " + s.label();
  r.theorem = "decomposition";
  r.params = base_params(s);
  r.params["dictionarySize"] = double(dictionary.size());
  r.params["levels"] = double(y_grid.size());
  r.params["maxDelta"] = worst_delta;
  r.params["maxBoundary"] = worst_boundary;
  r.lhs = std::max(worst_delta, worst_boundary);
  r.rhs = tol;
  r.finalize();
  return r;
}

}  // namespace varitool
