#include "varitool/blowup.hpp"

#include "varitool/errors.hpp"
#include "varitool/families.hpp"
#include "varitool/fields.hpp"
#include "varitool/inequalities.hpp"
#include "varitool/kernels.hpp"
#include "varitool/maximal.hpp"
#include "varitool/variation.hpp"

#include <algorithm>
#include <cmath>

namespace varitool {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double lp_norm(const DiscreteVarifold& v, const std::vector<std::size_t>& region, const std::vector<double>& values, double p) {
  if (std::isinf(p)) {
    double best = 0.0;
    for (std::size_t i : region) best = std::max(best, std::abs(values[i]));
    return best;
  }
  double s = 0.0;
  for (std::size_t i : region) s += v.weight(i) * std::pow(std::abs(values[i]), p);
  return std::pow(s, 1.0 / p);
}

std::vector<std::size_t> all_atoms(const DiscreteVarifold& v) {
  std::vector<std::size_t> out(v.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = i;
  return out;
}

std::vector<double> values_of(const DiscreteVarifold& v, const ScalarTestFunction& f) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = f.f(v.position(i));
  return out;
}

double beta_exponent(int m) { return m == 1 ? kInf : double(m) / (m - 1); }

// Complete plane bundle at step j with a spike of width eps on the plane
// nearest the origin.
struct BundleStep {
  DiscreteVarifold sample;
  ScalarTestFunction spike;
  double eps;
  double h;
};

BundleStep bundle_step(int m, int n, int k, double h_factor) {
  const double eps = 2.0 / k;
  const double h = eps * h_factor;
  const auto family = AnalyticFamily::plane_bundle_filling(m, n, k, 1.0, false);
  const auto& bundle = std::get<PlaneBundle>(family.shape());
  Vec center = bundle.offsets.front();
  for (const auto& o : bundle.offsets)
    if (o.norm() < center.norm()) center = o;
  const double support = 0.45;
  if (!(center.norm() + support * eps < 1.0)) throw DomainError("blowup: spike support leaves U(0, 1); increase k0");
  ScalarTestFunction spike = rescaled(radial_cap(center / eps, support), eps, std::pow(eps, 1 - n));
  return {sample(family, h), spike, eps, h};
}

}  // namespace

std::string to_string(BlowupKind kind) {
  switch (kind) {
    case BlowupKind::LebesgueScaling: return "lebesgue-scaling";
    case BlowupKind::PlaneBundle: return "plane-bundle";
    case BlowupKind::SobolevVsIso: return "sobolev-vs-iso";
  }
  return "";
}

BlowupKind parse_blowup_kind(const std::string& text) {
  if (text == "lebesgue-scaling" || text == "lebesgueScaling") return BlowupKind::LebesgueScaling;
  if (text == "plane-bundle" || text == "planeBundle") return BlowupKind::PlaneBundle;
  if (text == "sobolev-vs-iso" || text == "sobolevVsIso") return BlowupKind::SobolevVsIso;
  throw ArgumentError("unknown blowup kind '" + text + "'");
}

BlowupSeries blowup_series(const BlowupOptions& o) {
  if (o.n < 2) throw DomainError("blowup: needs n >= 2");
  if (o.kind != BlowupKind::LebesgueScaling && !(o.m >= 1 && o.m < o.n)) throw DomainError("blowup: needs 1 <= m < n");
  if (o.steps < 2) throw DomainError("blowup: needs at least two steps");
  const double p = o.kind == BlowupKind::SobolevVsIso ? beta_exponent(o.m) : o.p;
  if (!(p >= 1.0)) throw DomainError("blowup: needs p >= 1");
  const double critical = double(o.n) / (o.n - 1);
  if (o.assertDivergence && !(p > critical))
    throw DomainError("blowup: divergence is only claimed for p > n/(n-1)");

  BlowupSeries series;
  series.kind = to_string(o.kind);
  series.name = "blowup " + series.kind;
  series.p = p;
  series.params["m"] = double(o.kind == BlowupKind::LebesgueScaling ? o.n : o.m);
  series.params["n"] = double(o.n);
  series.params["steps"] = double(o.steps);
  series.params["mode"] = std::string(o.assertDivergence ? "divergence" : "control");

  for (int j = 0; j < o.steps; ++j) {
    DiscreteVarifold v(1, 1);
    ScalarTestFunction f;
    double parameter = 0.0;
    std::vector<std::size_t> region;
    if (o.kind == BlowupKind::LebesgueScaling) {
      const double eps = std::ldexp(1.0, -j);
      const Vec half = Vec::Constant(o.n, eps);
      v = sample(AnalyticFamily::slab(o.n, o.n, -half, half), eps / o.cellsPerEps);
      f = rescaled(radial_cap(Vec::Zero(o.n), 0.9), eps, std::pow(eps, 1 - o.n));
      parameter = eps;
      region = all_atoms(v);
    } else {
      const int k = o.k0 << j;
      auto step = bundle_step(o.m, o.n, k, o.hFactor);
      v = std::move(step.sample);
      f = step.spike;
      parameter = k;
      if (o.kind == BlowupKind::PlaneBundle) {
        region = all_atoms(v);
      } else {
        MaximalParams mp;
        mp.sMin = 5.0 * step.h;
        mp.sMax = 2.0;
        mp.centers = CenterStrategy::Grid;
        mp.gridPerAxis = o.gridPerAxis;
        const double d = unit_ball_volume(o.n) / unit_ball_volume(o.m);
        const auto maximal = maximal_at_atoms(v, mp);
        for (std::size_t i = 0; i < v.size(); ++i)
          if (maximal[i] >= d * (1.0 - mp.levelTolerance)) region.push_back(i);
        series.params["d"] = d;
      }
    }
    const double raw_budget = weak_gradient_integral(v, f);
    const ScalarTestFunction normalized = combine(1.0 / raw_budget, f, 0.0, zero_function(o.n));
    const double budget = weak_gradient_integral(v, normalized);
    const double norm = lp_norm(v, region, values_of(v, normalized), p);
    series.parameter.push_back(parameter);
    series.norm.push_back(norm);
    series.budget.push_back(budget);
    series.growthFactor.push_back(j == 0 ? 1.0 : norm / series.norm[j - 1]);
  }

  bool ok = true;
  for (double b : series.budget) ok = ok && b <= 1.0 + o.budgetTolerance;
  if (!ok) series.verdict = "budget exceeded";
  if (o.assertDivergence) {
    for (std::size_t j = 1; j < series.norm.size(); ++j) {
      if (!(series.growthFactor[j] >= o.growthThreshold)) {
        ok = false;
        series.verdict = "growth below threshold";
      }
    }
    if (ok) series.verdict = "diverging";
  } else {
    const double peak = *std::max_element(series.norm.begin(), series.norm.end());
    const double spread = peak / series.norm.front();
    series.params["controlSpread"] = spread;
    if (!(spread <= o.controlFactor)) {
      ok = false;
      series.verdict = "control series not bounded";
    }
    if (ok) series.verdict = "bounded";
  }
  series.pass = ok;
  return series;
}

MedianContrast median_contrast(int m, int n, int steps, int k0, double spike, double g_spread_limit, double f_growth_min) {
  if (!(m >= 1 && m < n)) throw DomainError("median contrast: needs 1 <= m < n");
  MedianContrast out;
  const double d = std::ldexp(1.0, -m) * unit_ball_volume(n) / unit_ball_volume(m);
  const double lambda = 0.5;
  const double radius = 2.0;
  for (int j = 0; j < steps; ++j) {
    const int k = k0 << j;
    auto step = bundle_step(m, n, k, 1.0 / 16.0);
    const auto& v = step.sample;
    const ScalarTestFunction base = plateau_function(Vec::Zero(n), 0.8, 0.95);
    const ScalarTestFunction raw = combine(1.0, base, spike, step.spike);
    const double budget = weak_gradient_integral(v, raw);
    const ScalarTestFunction f = combine(1.0 / budget, raw, 0.0, zero_function(n));
    const auto values = values_of(v, f);
    const auto region = lower_density_region(v, d, [radius](const Vec&) { return radius; });
    std::vector<Vec> centers;
    for (std::size_t i : region) centers.push_back(v.position(i));
    const auto medians = kernels::omp::medians(v, values, centers, std::vector<double>(centers.size(), radius), lambda);
    std::vector<double> g(v.size(), 0.0);
    for (std::size_t i = 0; i < region.size(); ++i) g[region[i]] = medians[i].value_or(0.0);
    out.planes.push_back(k);
    out.gLhs.push_back(region_norm(v, region, g));
    out.fLhs.push_back(region_norm(v, region, values));
    out.budget.push_back(weak_gradient_integral(v, f));
  }
  const auto [lo, hi] = std::minmax_element(out.gLhs.begin(), out.gLhs.end());
  out.gSpread = *lo > 0.0 ? *hi / *lo : kInf;
  out.minFGrowth = kInf;
  for (std::size_t j = 1; j < out.fLhs.size(); ++j) out.minFGrowth = std::min(out.minFGrowth, out.fLhs[j] / out.fLhs[j - 1]);
  out.pass = out.gSpread <= g_spread_limit && out.minFGrowth >= f_growth_min;
  return out;
}

}  // namespace varitool
