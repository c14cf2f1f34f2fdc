#include "varitool/runner.hpp"

#include "varitool/blowup.hpp"
#include "varitool/errors.hpp"
#include "varitool/geometry.hpp"
#include "varitool/inequalities.hpp"
#include "varitool/lemmas.hpp"
#include "varitool/suites.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace varitool {

using nlohmann::json;

namespace {

// Typed access to one JSON object; every key read is recorded so that
// finish() can reject the rest.
class Fields {
 public:
  Fields(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw SchemaError(path_.empty() ? "(root)" : path_, "expected an object");
  }

  std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  const std::string& path() const { return path_; }

  bool has(const std::string& key) const { return j_.contains(key); }

  const json* find(const std::string& key) {
    used_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  const json& require(const std::string& key) {
    const json* v = find(key);
    if (!v) throw SchemaError(at(key), "required field is missing");
    return *v;
  }

  double number(const std::string& key) { return as_number(require(key), at(key)); }
  double number_or(const std::string& key, double fallback) {
    const json* v = find(key);
    return v ? as_number(*v, at(key)) : fallback;
  }
  std::optional<double> maybe_number(const std::string& key) {
    const json* v = find(key);
    return v ? std::optional<double>(as_number(*v, at(key))) : std::nullopt;
  }
  /// A number or the string "inf".
  double exponent_or(const std::string& key, double fallback) {
    const json* v = find(key);
    if (!v) return fallback;
    if (v->is_string()) {
      if (v->get<std::string>() == "inf") return std::numeric_limits<double>::infinity();
      throw SchemaError(at(key), "expected a number or \"inf\"");
    }
    return as_number(*v, at(key));
  }

  long integer(const std::string& key) { return as_integer(require(key), at(key)); }
  long integer_or(const std::string& key, long fallback) {
    const json* v = find(key);
    return v ? as_integer(*v, at(key)) : fallback;
  }

  bool flag_or(const std::string& key, bool fallback) {
    const json* v = find(key);
    if (!v) return fallback;
    if (!v->is_boolean()) throw SchemaError(at(key), "expected true or false");
    return v->get<bool>();
  }

  std::string text(const std::string& key) { return as_text(require(key), at(key)); }
  std::string text_or(const std::string& key, const std::string& fallback) {
    const json* v = find(key);
    return v ? as_text(*v, at(key)) : fallback;
  }

  std::vector<double> numbers(const std::string& key) {
    const json& v = require(key);
    if (!v.is_array()) throw SchemaError(at(key), "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_number(v[i], at(key) + "[" + std::to_string(i) + "]"));
    return out;
  }

  Vec vector(const std::string& key, int n) {
    const auto values = numbers(key);
    if (static_cast<int>(values.size()) != n)
      throw SchemaError(at(key), "expected " + std::to_string(n) + " coordinates");
    return Eigen::Map<const Vec>(values.data(), n);
  }
  Vec vector_or_zero(const std::string& key, int n) { return has(key) ? vector(key, n) : Vec(Vec::Zero(n)); }

  Fields object(const std::string& key) { return Fields(require(key), at(key)); }

  const json& array(const std::string& key) {
    const json& v = require(key);
    if (!v.is_array()) throw SchemaError(at(key), "expected an array");
    return v;
  }

  void finish() const {
    for (const auto& item : j_.items())
      if (!used_.count(item.key())) throw SchemaError(at(item.key()), "unknown key");
  }

 private:
  static double as_number(const json& v, const std::string& path) {
    if (!v.is_number()) throw SchemaError(path, "expected a number");
    return v.get<double>();
  }
  static long as_integer(const json& v, const std::string& path) {
    if (!v.is_number_integer()) throw SchemaError(path, "expected an integer");
    return v.get<long>();
  }
  static std::string as_text(const json& v, const std::string& path) {
    if (!v.is_string()) throw SchemaError(path, "expected a string");
    return v.get<std::string>();
  }

  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

// Re-throws library errors raised while building objects with the field path prepended.
template <class Fn>
auto at_path(const std::string& path, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const SchemaError&) {
    throw;
  } catch (const UnsupportedFamilyError& e) {
    throw UnsupportedFamilyError(path + ": " + e.what());
  } catch (const HypothesisError& e) {
    throw HypothesisError(path + ": " + e.what());
  } catch (const PreconditionError& e) {
    throw PreconditionError(path + ": " + e.what());
  } catch (const DomainError& e) {
    throw DomainError(path + ": " + e.what());
  } catch (const ArgumentError& e) {
    throw ArgumentError(path + ": " + e.what());
  }
}

void require_positive(double x, const std::string& path) {
  if (!(x > 0.0 && std::isfinite(x))) throw DomainError(path + ": must be a positive finite number");
}

int dimension(Fields& f, const std::string& key, std::optional<int> fallback = {}) {
  const long v = fallback ? f.integer_or(key, *fallback) : f.integer(key);
  if (v < 1 || v > 16) throw DomainError(f.at(key) + ": dimension must lie in 1..16");
  return static_cast<int>(v);
}

AnalyticFamily parse_family(Fields f) {
  const std::string type = f.text("type");
  const std::string path = f.path();
  if (type == "sphere" || type == "disc") {
    const int m = dimension(f, "m");
    const int n = dimension(f, "n", m + 1);
    const double radius = f.number_or("radius", 1.0);
    const double mult = f.number_or("multiplicity", 1.0);
    std::optional<Vec> center;
    if (f.has("center")) center = f.vector("center", n);
    f.finish();
    require_positive(radius, f.at("radius"));
    require_positive(mult, f.at("multiplicity"));
    return at_path(path, [&] {
      return type == "sphere" ? AnalyticFamily::sphere(m, n, radius, mult, center)
                              : AnalyticFamily::disc(m, n, radius, mult, center);
    });
  }
  if (type == "plane-bundle") {
    const int m = dimension(f, "m");
    const int n = dimension(f, "n", m + 1);
    const long k = f.integer("k");
    const double radius = f.number_or("radius", 1.0);
    const bool clipped = f.flag_or("clipped", true);
    f.finish();
    if (k < 1) throw DomainError(f.at("k") + ": plane count per axis must be at least 1");
    require_positive(radius, f.at("radius"));
    return at_path(path, [&] { return AnalyticFamily::plane_bundle_filling(m, n, static_cast<int>(k), radius, clipped); });
  }
  if (type == "slab") {
    const int m = dimension(f, "m");
    const int n = dimension(f, "n", m + 1);
    const Vec lo = f.vector("lo", n);
    const Vec hi = f.vector("hi", n);
    const double density = f.number_or("density", 1.0);
    const bool unbounded = f.flag_or("unbounded", false);
    f.finish();
    require_positive(density, f.at("density"));
    return at_path(path, [&] { return AnalyticFamily::slab(m, n, lo, hi, density, unbounded); });
  }
  throw SchemaError(f.at("type"), "unknown family type '" + type + "' (sphere, disc, plane-bundle, slab)");
}

ScalarTestFunction parse_function(Fields f, int n) {
  const std::string type = f.text("type");
  const std::string path = f.path();
  if (type == "cap") {
    const Vec c = f.vector_or_zero("center", n);
    const double r = f.number("radius");
    f.finish();
    require_positive(r, f.at("radius"));
    return radial_cap(c, r);
  }
  if (type == "plateau") {
    const Vec c = f.vector_or_zero("center", n);
    const double inner = f.number("inner");
    const double outer = f.number("outer");
    f.finish();
    if (!(inner >= 0.0 && outer > inner)) throw DomainError(path + ": need 0 <= inner < outer");
    return at_path(path, [&] { return plateau_function(c, inner, outer); });
  }
  if (type == "zero") {
    f.finish();
    return zero_function(n);
  }
  if (type == "linear") {
    const Vec u = f.vector("gradient", n);
    const Vec c = f.vector_or_zero("center", n);
    f.finish();
    return linear_function(u, c);
  }
  if (type == "sum") {
    const json& terms = f.array("terms");
    f.finish();
    if (terms.empty()) throw SchemaError(f.at("terms"), "expected at least one term");
    std::optional<ScalarTestFunction> total;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      Fields term(terms[i], f.at("terms") + "[" + std::to_string(i) + "]");
      const double weight = term.number("weight");
      const auto g = parse_function(term.object("function"), n);
      term.finish();
      total = total ? combine(1.0, *total, weight, g) : combine(weight, g, 0.0, zero_function(n));
    }
    return *total;
  }
  throw SchemaError(f.at("type"), "unknown function type '" + type + "' (cap, plateau, zero, linear, sum)");
}

double parse_resolution(Fields& f) {
  const double h = f.number("h");
  require_positive(h, f.at("h"));
  return h;
}

DeltaSource parse_delta_source(Fields& f) {
  const std::string s = f.text_or("deltaSource", "analytic");
  if (s == "analytic") return DeltaSource::Analytic;
  if (s == "dictionary") return DeltaSource::DictionaryLowerBound;
  throw SchemaError(f.at("deltaSource"), "expected \"analytic\" or \"dictionary\"");
}

MaximalParams parse_maximal(Fields& parent, double h, const AnalyticFamily& family) {
  MaximalParams p;
  p.sMin = 5.0 * h;
  p.sMax = 2.0 * family.max_distance_from(Vec::Zero(family.n())) + p.sMin;
  if (!parent.has("maximal")) {
    parent.find("maximal");
    return p;
  }
  Fields f = parent.object("maximal");
  p.sMin = f.number_or("sMin", p.sMin);
  p.sMax = f.number_or("sMax", p.sMax);
  const std::string centers = f.text_or("centers", "atoms-query");
  if (centers == "atoms") {
    p.centers = CenterStrategy::Atoms;
  } else if (centers == "atoms-query") {
    p.centers = CenterStrategy::AtomsQuery;
  } else if (centers == "grid") {
    p.centers = CenterStrategy::Grid;
  } else {
    throw SchemaError(f.at("centers"), "expected \"atoms\", \"atoms-query\" or \"grid\"");
  }
  p.gridPerAxis = static_cast<int>(f.integer_or("gridPerAxis", p.gridPerAxis));
  p.exactRadii = f.flag_or("exactRadii", p.exactRadii);
  p.radiiPerCenter = static_cast<int>(f.integer_or("radiiPerCenter", p.radiiPerCenter));
  p.levelTolerance = f.number_or("levelTolerance", p.levelTolerance);
  f.finish();
  if (p.gridPerAxis < 2) throw DomainError(f.at("gridPerAxis") + ": need at least 2 points per axis");
  if (!(p.levelTolerance >= 0.0 && p.levelTolerance < 1e-3))
    throw DomainError(f.at("levelTolerance") + ": must lie in [0, 1e-3)");
  at_path(f.path(), [&] { p.validate(); });
  return p;
}

// Test fields supported inside the box with margin: bumps at the center and
// at 0.4 of the half-width toward the faces of the first two axes, plus
// inward and outward radial fields.
std::vector<TestVectorField> interior_dictionary(const Vec& lo, const Vec& hi) {
  const int n = static_cast<int>(lo.size());
  const Vec mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo).minCoeff();
  std::vector<Vec> centers{mid};
  for (int axis = 0; axis < std::min(n, 2); ++axis)
    for (double sgn : {-1.0, 1.0}) {
      Vec c = mid;
      c(axis) += sgn * 0.4 * half;
      centers.push_back(c);
    }
  auto dict = bump_dictionary(n, centers, {0.2 * half, 0.35 * half, 0.55 * half});
  dict.push_back(radial_field(mid, 0.2 * half, 0.8 * half, 1.0));
  dict.push_back(radial_field(mid, 0.2 * half, 0.8 * half, -1.0));
  return dict;
}

std::vector<VerificationReport> named(const std::string& job, std::vector<VerificationReport> reports) {
  if (reports.size() == 1) {
    reports[0].name = job;
  } else {
    for (auto& r : reports) r.name = job + "/" + r.name;
  }
  return reports;
}

Job make_job(std::string name, std::string kind, std::function<std::vector<VerificationReport>()> fn) {
  Job job;
  job.name = name;
  job.kind = kind;
  job.run = [name, fn = std::move(fn)] {
    JobResult r;
    r.job = name;
    r.reports = named(name, fn());
    return r;
  };
  return job;
}

std::string experiment_path(std::size_t i) { return "experiments[" + std::to_string(i) + "]"; }

Job parse_gamma_bound(Fields& f, const std::string& name, std::uint64_t seed) {
  const int m = dimension(f, "m");
  const json& members = f.array("members");
  f.finish();
  if (members.empty()) throw SchemaError(f.at("members"), "expected at least one member experiment");
  std::vector<Job> jobs;
  std::set<std::string> names;
  for (std::size_t i = 0; i < members.size(); ++i) {
    const std::string path = f.at("members") + "[" + std::to_string(i) + "]";
    Job member = parse_experiment(members[i], path, seed);
    if (member.kind != "isoperimetric" && member.kind != "ball-iso")
      throw SchemaError(path + ".kind", "gamma-bound members must be isoperimetric or ball-iso experiments");
    if (!names.insert(member.name).second) throw SchemaError(path + ".name", "duplicate member name");
    jobs.push_back(std::move(member));
  }
  return make_job(name, "gamma-bound", [name, m, jobs] {
    std::vector<VerificationReport> reports;
    for (const auto& member : jobs) {
      auto part = member.run();
      reports.insert(reports.end(), part.reports.begin(), part.reports.end());
    }
    VerificationReport summary;
    summary.name = "bound";
    summary.theorem = "gamma-bound";
    summary.lhs = gamma_lower_bound(reports, m);
    summary.rhs = isoperimetric_constant(m);
    summary.params["m"] = double(m);
    summary.params["members"] = double(jobs.size());
    summary.params["discLowerBound"] = gamma_disc_lower(m);
    summary.finalize();
    reports.insert(reports.begin(), summary);
    return reports;
  });
}

}  // namespace

AnalyticFamily parse_family_spec(const json& spec, const std::string& path) { return parse_family(Fields(spec, path)); }

Job parse_experiment(const json& spec, const std::string& path, std::uint64_t seed) {
  Fields f(spec, path);
  const std::string name = f.text("name");
  if (name.empty()) throw SchemaError(f.at("name"), "must not be empty");
  const std::string kind = f.text("kind");
  auto family_of = [&f]() { return parse_family(f.object("family")); };

  if (kind == "isoperimetric") {
    const auto family = family_of();
    const double h = parse_resolution(f);
    const double d = f.number("d");
    const auto source = parse_delta_source(f);
    const auto mp = parse_maximal(f, h, family);
    f.finish();
    require_positive(d, f.at("d"));
    return make_job(name, kind, [=] {
      return std::vector<VerificationReport>{verify_isoperimetric(make_specimen(family, h), d, mp, source)};
    });
  }
  if (kind == "ball-iso") {
    const auto family = family_of();
    const double h = parse_resolution(f);
    const Vec a = f.vector_or_zero("center", family.n());
    const double r = f.number_or("radius", family.max_distance_from(a));
    const auto source = parse_delta_source(f);
    f.finish();
    require_positive(r, f.at("radius"));
    return make_job(name, kind, [=] {
      return std::vector<VerificationReport>{verify_ball_iso(make_specimen(family, h), a, r, source)};
    });
  }
  if (kind == "size-iso") {
    const auto family = family_of();
    const double d = f.number("d");
    f.finish();
    require_positive(d, f.at("d"));
    return make_job(name, kind, [=] { return verify_size_iso(family, d); });
  }
  if (kind == "sobolev-avg") {
    const auto family = family_of();
    const double h = parse_resolution(f);
    const auto fn = parse_function(f.object("function"), family.n());
    const double d = f.number("d");
    const double lambda = f.number_or("lambda", 0.5);
    const double radius = f.number("radius");
    const auto beta = f.maybe_number("betaN");
    f.finish();
    require_positive(d, f.at("d"));
    require_positive(radius, f.at("radius"));
    if (!(lambda > 0.0 && lambda < 1.0)) throw DomainError(f.at("lambda") + ": must lie in (0, 1)");
    if (beta && !(*beta >= 1.0)) throw DomainError(f.at("betaN") + ": the Besicovitch constant is at least 1");
    MedianParams mp;
    mp.lambda = lambda;
    mp.radius = [radius](const Vec&) { return radius; };
    return make_job(name, kind, [=] {
      auto r = verify_sobolev_avg(make_specimen(family, h), fn, mp, d, beta);
      r.params["radius"] = radius;
      return std::vector<VerificationReport>{r};
    });
  }
  if (kind == "sobolev-rect") {
    const auto family = family_of();
    const double h = parse_resolution(f);
    const auto fn = parse_function(f.object("function"), family.n());
    const double d = f.number("d");
    f.finish();
    require_positive(d, f.at("d"));
    return make_job(name, kind, [=] {
      return std::vector<VerificationReport>{verify_sobolev_rect(make_specimen(family, h), fn, d)};
    });
  }
  if (kind == "poincare") {
    const auto family = family_of();
    const double h = parse_resolution(f);
    const auto fn = parse_function(f.object("function"), family.n());
    const Vec a = f.vector_or_zero("center", family.n());
    const double r = f.number("radius");
    f.finish();
    require_positive(r, f.at("radius"));
    return make_job(name, kind, [=] {
      return std::vector<VerificationReport>{verify_poincare(make_specimen(family, h), fn, a, r)};
    });
  }
  if (kind == "decomposition") {
    const auto family = family_of();
    const double h = parse_resolution(f);
    const auto fn = parse_function(f.object("function"), family.n());
    const long levels = f.integer_or("levels", 16);
    const double tol = f.number_or("tolerance", 1e-3);
    f.finish();
    if (levels < 1) throw DomainError(f.at("levels") + ": need at least one level");
    require_positive(tol, f.at("tolerance"));
    const auto* slab = std::get_if<ProductSlab>(&family.shape());
    if (!slab) throw UnsupportedFamilyError(f.at("family") + ": decomposition checks need a slab");
    const Vec lo = slab->lo, hi = slab->hi;
    return make_job(name, kind, [=] {
      const auto s = make_specimen(family, h);
      double fmin = std::numeric_limits<double>::infinity(), fmax = -fmin;
      for (std::size_t i = 0; i < s.sample.size(); ++i) {
        const double v = fn.f(s.sample.position(i));
        fmin = std::min(fmin, v);
        fmax = std::max(fmax, v);
      }
      std::vector<double> ys;
      for (long i = 0; i < levels; ++i) ys.push_back(fmin + (i + 0.5) / levels * (fmax - fmin));
      return std::vector<VerificationReport>{decomposition_check(s, fn, ys, interior_dictionary(lo, hi), tol)};
    });
  }
  if (kind == "gamma-bound") return parse_gamma_bound(f, name, seed);
  if (kind == "blowup") {
    BlowupOptions o;
    try {
      o.kind = parse_blowup_kind(f.text("blowup"));
    } catch (const ArgumentError& e) {
      throw SchemaError(f.at("blowup"), e.what());
    }
    o.m = dimension(f, "m", o.m);
    o.n = dimension(f, "n", o.n);
    o.p = f.exponent_or("p", o.p);
    o.steps = static_cast<int>(f.integer_or("steps", o.steps));
    o.k0 = static_cast<int>(f.integer_or("k0", o.k0));
    o.assertDivergence = f.flag_or("assertDivergence", o.assertDivergence);
    o.budgetTolerance = f.number_or("budgetTolerance", o.budgetTolerance);
    o.growthThreshold = f.number_or("growthThreshold", o.growthThreshold);
    o.controlFactor = f.number_or("controlFactor", o.controlFactor);
    o.cellsPerEps = static_cast<int>(f.integer_or("cellsPerEps", o.cellsPerEps));
    o.hFactor = f.number_or("hFactor", o.hFactor);
    o.gridPerAxis = static_cast<int>(f.integer_or("gridPerAxis", o.gridPerAxis));
    f.finish();
    if (o.steps < 2 || o.steps > 8) throw DomainError(f.at("steps") + ": must lie in 2..8");
    if (o.k0 < 1) throw DomainError(f.at("k0") + ": must be at least 1");
    if (!(o.p >= 1.0)) throw DomainError(f.at("p") + ": must be at least 1");
    if (o.m > o.n) throw DomainError(f.at("m") + ": must not exceed n");
    if (o.assertDivergence && o.kind != BlowupKind::SobolevVsIso && o.n > 1 && !(o.p > o.n / double(o.n - 1)))
      throw DomainError(f.at("p") + ": divergence needs p > n/(n-1); set assertDivergence to false for a control run");
    Job job;
    job.name = name;
    job.kind = kind;
    job.run = [name, o] {
      JobResult r;
      r.job = name;
      auto s = blowup_series(o);
      s.name = name;
      r.series.push_back(std::move(s));
      return r;
    };
    return job;
  }
  if (kind == "median-contrast") {
    const int m = dimension(f, "m", 1);
    const int n = dimension(f, "n", 2);
    const int steps = static_cast<int>(f.integer_or("steps", 4));
    const int k0 = static_cast<int>(f.integer_or("k0", 2));
    const double spike = f.number_or("spike", 4.0);
    const double spread = f.number_or("gSpreadLimit", 1.2);
    const double growth = f.number_or("fGrowthMin", 1.5);
    f.finish();
    if (steps < 2 || steps > 6) throw DomainError(f.at("steps") + ": must lie in 2..6");
    if (k0 < 1) throw DomainError(f.at("k0") + ": must be at least 1");
    if (m > n) throw DomainError(f.at("m") + ": must not exceed n");
    require_positive(spike, f.at("spike"));
    Job job;
    job.name = name;
    job.kind = kind;
    job.run = [=] {
      const auto mc = median_contrast(m, n, steps, k0, spike, spread, growth);
      BlowupSeries s;
      s.name = name;
      s.kind = "median-contrast";
      s.p = m == 1 ? std::numeric_limits<double>::infinity() : m / (m - 1.0);
      s.parameter = mc.planes;
      s.norm = mc.fLhs;
      s.budget = mc.budget;
      s.growthFactor.push_back(1.0);
      for (std::size_t i = 1; i < mc.fLhs.size(); ++i) s.growthFactor.push_back(mc.fLhs[i] / mc.fLhs[i - 1]);
      s.params["m"] = double(m);
      s.params["n"] = double(n);
      s.params["gSpread"] = mc.gSpread;
      s.params["minFGrowth"] = mc.minFGrowth;
      for (std::size_t i = 0; i < mc.gLhs.size(); ++i) s.params["gLhs" + std::to_string(i)] = mc.gLhs[i];
      s.pass = mc.pass;
      s.verdict = mc.pass ? "g bounded, f diverging" : "contrast not reproduced";
      JobResult r;
      r.job = name;
      r.series.push_back(std::move(s));
      return r;
    };
    return job;
  }
  if (kind == "lemmas") {
    const std::string lemma = f.text_or("lemma", "all");
    const long instances = f.integer_or("instances", 1000);
    const auto job_seed = static_cast<std::uint64_t>(f.integer_or("seed", static_cast<long>(seed)));
    const int refinements = static_cast<int>(f.integer_or("refinements", 2));
    f.finish();
    static const std::set<std::string> known{"all", "iteration", "calculus", "weak-lp", "superlevel"};
    if (!known.count(lemma))
      throw SchemaError(f.at("lemma"), "expected all, iteration, calculus, weak-lp or superlevel");
    if (instances < 1) throw DomainError(f.at("instances") + ": need at least one instance");
    if (refinements < 0) throw DomainError(f.at("refinements") + ": must be nonnegative");
    const int count = static_cast<int>(instances);
    return make_job(name, kind, [=] {
      std::vector<VerificationReport> out;
      const bool all = lemma == "all";
      if (all || lemma == "iteration") out.push_back(iteration_suite(count, job_seed));
      if (all || lemma == "calculus") out.push_back(calculus_suite(count, job_seed + 1, refinements));
      if (all || lemma == "weak-lp") {
        out.push_back(weak_lp_suite(count, job_seed + 2));
        out.push_back(weak_lp_equality(2.0, 1.0));
      }
      if (all || lemma == "superlevel") {
        out.push_back(superlevel_suite(count, job_seed + 3));
        out.push_back(superlevel_hat(10000));
      }
      return out;
    });
  }
  if (kind == "weak-lp") {
    const double p = f.number("p");
    const double q = f.number("q");
    const long instances = f.integer_or("instances", 1000);
    const auto job_seed = static_cast<std::uint64_t>(f.integer_or("seed", static_cast<long>(seed)));
    f.finish();
    at_path(f.path(), [&] { weak_lp_bound(1.0, 1.0, p, q); });
    if (instances < 1) throw DomainError(f.at("instances") + ": need at least one instance");
    return make_job(name, kind, [=] {
      return std::vector<VerificationReport>{weak_lp_suite(static_cast<int>(instances), job_seed, std::pair{p, q}),
                                             weak_lp_equality(p, q)};
    });
  }
  throw SchemaError(f.at("kind"), "unknown experiment kind '" + kind + "'");
}

RunConfig parse_config(const json& doc) {
  Fields root(doc, "");
  RunConfig cfg;
  cfg.name = root.text_or("name", cfg.name);
  cfg.seed = static_cast<std::uint64_t>(root.integer_or("seed", 0));
  if (root.has("output")) {
    Fields out = root.object("output");
    cfg.outputDir = out.text_or("dir", "");
    cfg.prefix = out.text_or("prefix", "");
    out.finish();
  } else {
    root.find("output");
  }
  std::optional<double> tolerance;
  if (root.has("tolerances")) {
    Fields tol = root.object("tolerances");
    tolerance = tol.maybe_number("report");
    tol.finish();
    if (tolerance && !(*tolerance >= 0.0 && *tolerance < 0.1))
      throw DomainError("tolerances.report: must lie in [0, 0.1)");
  } else {
    root.find("tolerances");
  }
  std::set<std::string> names;
  if (root.has("experiments")) {
    const json& list = root.array("experiments");
    for (std::size_t i = 0; i < list.size(); ++i) {
      Job job = parse_experiment(list[i], experiment_path(i), cfg.seed);
      if (!names.insert(job.name).second) throw SchemaError(experiment_path(i) + ".name", "duplicate experiment name");
      if (tolerance) {
        job.run = [inner = std::move(job.run), t = *tolerance] {
          auto r = inner();
          for (auto& rep : r.reports) {
            rep.tolerance = t;
            rep.finalize();
          }
          return r;
        };
      }
      cfg.jobs.push_back(std::move(job));
    }
  } else {
    root.find("experiments");
  }
  root.finish();
  if (cfg.prefix.empty()) cfg.prefix = cfg.name;
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError(path, "cannot read configuration file");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError(path, std::string("not valid JSON: ") + e.what());
  }
  return parse_config(doc);
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const SchemaError*>(&e)) return 2;
  if (dynamic_cast<const ResolutionError*>(&e)) return 4;
  if (dynamic_cast<const DomainError*>(&e) || dynamic_cast<const PreconditionError*>(&e) ||
      dynamic_cast<const ArgumentError*>(&e))
    return 3;
  return 1;
}

int exit_code_for(std::exception_ptr e) {
  try {
    std::rethrow_exception(e);
  } catch (const std::exception& ex) {
    return exit_code_for(ex);
  } catch (...) {
    return 1;
  }
}

RunOutcome run_jobs(const std::vector<Job>& jobs) {
  RunOutcome out;
  out.jobs.resize(jobs.size());
  const long count = static_cast<long>(jobs.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < count; ++i) {
    JobResult r;
    try {
      r = jobs[i].run();
    } catch (const std::exception& e) {
      r = JobResult{};
      r.exitCode = exit_code_for(e);
      r.error = e.what();
      if (r.exitCode == 4) r.error += " (refine: decrease h or raise the grid resolution)";
    }
    r.job = jobs[i].name;
    out.jobs[i] = std::move(r);
  }
  std::stable_sort(out.jobs.begin(), out.jobs.end(), [](const JobResult& a, const JobResult& b) { return a.job < b.job; });
  for (const auto& j : out.jobs) {
    if (out.exitCode == 0 && j.exitCode != 0) out.exitCode = j.exitCode;
    out.reports.insert(out.reports.end(), j.reports.begin(), j.reports.end());
    out.series.insert(out.series.end(), j.series.begin(), j.series.end());
  }
  if (out.exitCode == 0) {
    for (const auto& r : out.reports)
      if (!r.pass) out.exitCode = 1;
    for (const auto& s : out.series)
      if (!s.pass) out.exitCode = 1;
  }
  return out;
}

std::string resolve_output_dir(const std::string& explicit_dir) {
  if (!explicit_dir.empty()) return explicit_dir;
  if (const char* env = std::getenv("VARITOOL_OUTPUT_DIR"); env && *env) return env;
  return ".";
}

namespace {

std::string file_stem(const std::string& text) {
  std::string out;
  for (char c : text) out += std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' ? c : '_';
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
}

}  // namespace

std::vector<std::string> write_outputs(const RunOutcome& outcome, const std::string& dir, const std::string& prefix) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const std::string stem = file_stem(prefix.empty() ? "run" : prefix);
  std::vector<std::string> written;
  auto emit = [&](const std::string& name, const std::string& content) {
    const fs::path path = fs::path(dir) / name;
    write_file(path, content);
    written.push_back(path.string());
  };
  emit(stem + "-reports.csv", reports_csv(outcome.reports));
  emit(stem + "-reports.json", results_json(outcome.reports, outcome.series));
  for (const auto& s : outcome.series) emit(stem + "-series-" + file_stem(s.name) + ".csv", series_csv(s));
  return written;
}

}  // namespace varitool
