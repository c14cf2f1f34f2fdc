// Acceptance checks: one PASS/FAIL line per criterion, exit status 0 when
// all pass. Usage: acceptance --cli <varitool> --suite <config> --data <dir>
// --workdir <dir>

#include "varitool/blowup.hpp"
#include "varitool/families.hpp"
#include "varitool/geometry.hpp"
#include "varitool/inequalities.hpp"
#include "varitool/runner.hpp"
#include "varitool/spatial_index.hpp"
#include "varitool/suites.hpp"
#include "varitool/varifold_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <sys/wait.h>

using namespace varitool;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

struct Paths {
  std::string cli;
  std::string suite;
  std::string data;
  std::string workdir;
};

int run_command(const std::string& cmd) {
  const int raw = std::system(cmd.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

std::string quote(const std::string& s) { return "'" + s + "'"; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

// ---- 1 ----
Outcome constants() {
  Outcome o;
  o.require(close(unit_ball_volume(1), 2.0, 1e-12), "alpha(1)");
  o.require(close(unit_ball_volume(2), kPi, 1e-12), "alpha(2)");
  o.require(close(unit_ball_volume(3), 4.0 * kPi / 3.0, 1e-12), "alpha(3)");
  o.require(gamma_upper(1) == 0.5, "gamma upper bound for m = 1");
  for (int m : {2, 3}) {
    const double expected = std::pow(5.0, m) * std::pow(3.0, 1.0 / (m - 1)) * std::pow(unit_ball_volume(m), -1.0 / m);
    o.require(std::abs(gamma_upper(m) - expected) <= 1e-12 * expected, "gamma upper bound for m = " + std::to_string(m));
  }
  o.detail << "alpha(2)=" << format_double(unit_ball_volume(2)) << " upper(2)=" << format_double(gamma_upper(2));
  return o;
}

// ---- 2 ----
Outcome gamma_bounds() {
  Outcome o;
  const auto disc = verify_ball_iso(make_specimen(AnalyticFamily::disc(2, 3, 1.0), 0.02), Vec::Zero(3), 1.0);
  const double implied = std::get<double>(disc.params.at("impliedGammaLowerBound"));
  const double expected = 0.5 / std::sqrt(kPi);
  o.require(close(implied, expected, 1e-6), "unit disc implied bound");

  std::vector<VerificationReport> m1;
  const Vec origin = Vec::Zero(2);
  for (double r : {1.0, 0.5, 0.25}) {
    m1.push_back(verify_ball_iso(make_specimen(AnalyticFamily::disc(1, 2, r), 1e-3), origin, 1.0));
    m1.push_back(verify_ball_iso(make_specimen(AnalyticFamily::sphere(1, 2, r), 1e-3), origin, 1.0));
  }
  MaximalParams p;
  p.sMin = 5e-3;
  p.sMax = 3.0;
  p.centers = CenterStrategy::Grid;
  const auto circle = make_specimen(AnalyticFamily::sphere(1, 2, 1.0), 1e-3);
  const auto segment = make_specimen(AnalyticFamily::disc(1, 2, 1.0), 1e-3);
  for (double d : {0.5, 1.0, 2.0, kPi}) {
    m1.push_back(verify_isoperimetric(circle, d, p));
    m1.push_back(verify_isoperimetric(segment, d, p));
  }
  const double bound1 = gamma_lower_bound(m1, 1);
  // Equality cases land exactly on 1/2; the slack absorbs last-bit rounding.
  o.require(bound1 <= 0.5 + 1e-12, "m = 1 suite implies a bound above 1/2");
  o.detail << "disc=" << format_double(implied) << " (expected " << format_double(expected) << ") m1max="
           << format_double(bound1) << " over " << m1.size() << " reports";
  return o;
}

// ---- 3 ----
Outcome circle_equality() {
  Outcome o;
  MaximalParams p;
  p.sMin = 5e-3;
  p.sMax = 3.0;
  p.centers = CenterStrategy::Grid;
  const auto r = verify_isoperimetric(make_specimen(AnalyticFamily::sphere(1, 2, 1.0), 1e-3), kPi, p);
  o.require(r.ratio >= 0.97 && r.ratio <= 1.0, "ratio outside [0.97, 1]");
  o.detail << "ratio=" << format_double(r.ratio);
  return o;
}

// ---- 4 ----
Outcome theorem_suite(const Paths& paths, json& results) {
  Outcome o;
  const fs::path out = fs::path(paths.workdir) / "suite";
  fs::remove_all(out);
  const auto start = std::chrono::steady_clock::now();
  const int status = run_command(quote(paths.cli) + " run " + quote(paths.suite) + " --output-dir " +
                                 quote(out.string()) + " --prefix suite > " + quote((out.string() + ".log")) + " 2>&1");
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.require(status == 0, "suite exit status " + std::to_string(status));
  const fs::path json_path = out / "suite-reports.json";
  if (!fs::exists(json_path)) {
    o.require(false, "no report file");
    return o;
  }
  results = json::parse(slurp(json_path));
  const std::set<std::string> theorems{"isoperimetric", "ball-iso", "size-iso", "size-iso-mass",
                                       "sobolev-avg",   "sobolev-rect", "poincare"};
  int count = 0, failed = 0;
  double worst = 0.0;
  for (const auto& r : results["reports"]) {
    if (!theorems.count(r["theorem"].get<std::string>())) continue;
    ++count;
    if (!r["pass"].get<bool>()) ++failed;
    if (r["ratio"].is_number()) worst = std::max(worst, r["ratio"].get<double>());
  }
  o.require(count >= 30, "fewer than 30 theorem reports");
  o.require(failed == 0, std::to_string(failed) + " theorem reports failed");
  o.detail << count << " theorem reports, worst ratio " << format_double(worst) << ", suite status " << status << ", "
           << std::fixed << std::setprecision(1) << seconds << "s";
  return o;
}

// ---- 5 ----
Outcome lemma_suites() {
  Outcome o;
  const int instances = 1000;
  const auto it = iteration_suite(instances, 101);
  const auto calc = calculus_suite(instances, 102, 2);
  const auto weak = weak_lp_suite(instances, 103);
  const auto sup = superlevel_suite(instances, 104);
  o.require(it.pass && std::get<double>(it.params.at("violations")) == 0, "iteration lemma");
  o.require(calc.pass && calc.lhs <= 2, "calculus lemma");
  o.require(weak.pass, "weak-Lp embedding");
  o.require(sup.pass && std::get<double>(sup.params.at("violations")) == 0, "superlevel integration");
  const auto eq = weak_lp_equality(2.0, 1.0);
  o.require(close(eq.lhs, 2.0, 1e-6) && close(eq.rhs, 2.0, 1e-6), "weak-Lp equality case");
  const auto hat = superlevel_hat(10000, 0.01);
  const double norm = std::get<double>(hat.params.at("normValue"));
  const double integral = std::get<double>(hat.params.at("integralValue"));
  o.require(std::abs(norm / std::sqrt(2.0 / 3.0) - 1.0) <= 0.01, "hat norm");
  o.require(std::abs(integral / (2.0 * std::sqrt(2.0) / 3.0) - 1.0) <= 0.01, "hat integral");
  o.detail << "iteration worst " << format_double(it.lhs) << ", calculus refinements " << format_double(calc.lhs)
           << ", weak-Lp worst " << format_double(weak.lhs) << ", superlevel worst " << format_double(sup.lhs)
           << ", equality " << format_double(eq.lhs) << "/" << format_double(eq.rhs) << ", hat " << format_double(norm)
           << "/" << format_double(integral);
  return o;
}

// ---- 6 ----
Outcome blowups() {
  Outcome o;
  BlowupOptions leb;
  leb.kind = BlowupKind::LebesgueScaling;
  leb.n = 2;
  leb.steps = 4;
  const auto a = blowup_series(leb);
  for (std::size_t i = 1; i < a.growthFactor.size(); ++i)
    o.require(std::abs(a.growthFactor[i] / 2.0 - 1.0) <= 0.05, "lebesgue growth factor off 2");

  BlowupOptions bundle;
  bundle.kind = BlowupKind::PlaneBundle;
  bundle.m = 1;
  bundle.n = 2;
  bundle.k0 = 2;
  bundle.steps = 4;
  const auto b = blowup_series(bundle);
  for (std::size_t i = 1; i < b.norm.size(); ++i) o.require(b.norm[i] > b.norm[i - 1], "bundle not increasing");
  for (double x : b.budget) o.require(x <= 1.0 + 1e-3, "bundle budget");
  o.require(b.parameter.front() == 2 && b.parameter.back() == 16, "bundle sweep is not k = 2..16");

  double spread = 0.0;
  for (auto kind : {BlowupKind::LebesgueScaling, BlowupKind::PlaneBundle}) {
    BlowupOptions c = kind == BlowupKind::LebesgueScaling ? leb : bundle;
    c.p = 1.0;
    c.assertDivergence = false;
    const auto s = blowup_series(c);
    const double top = *std::max_element(s.norm.begin(), s.norm.end());
    spread = std::max(spread, top / s.norm.front());
    o.require(s.pass, "p = 1 control " + to_string(kind));
  }
  o.require(spread <= 1.1, "p = 1 control exceeds factor 1.1");
  o.detail << "lebesgue " << format_double(a.norm.front()) << ".." << format_double(a.norm.back()) << ", bundle "
           << format_double(b.norm.front()) << ".." << format_double(b.norm.back()) << ", control max/first "
           << format_double(spread);
  return o;
}

// ---- 7 ----
Outcome decomposition() {
  Outcome o;
  const json spec{{"name", "slab"},
                  {"kind", "decomposition"},
                  {"h", 0.02},
                  {"levels", 16},
                  {"tolerance", 1e-3},
                  {"family", {{"type", "slab"}, {"m", 1}, {"n", 2}, {"lo", {-1.0, -1.0}}, {"hi", {1.0, 1.0}}}},
                  {"function", {{"type", "linear"}, {"gradient", {0.0, 1.0}}}}};
  const auto result = parse_experiment(spec, "decomposition", 0).run();
  o.require(result.reports.size() == 1 && result.reports[0].pass, "decomposition check");
  if (!result.reports.empty()) {
    const auto& r = result.reports[0];
    o.detail << "max scaled |dV|=" << format_double(std::get<double>(r.params.at("maxDelta")))
             << " max scaled |V bdry E|=" << format_double(std::get<double>(r.params.at("maxBoundary"))) << " over "
             << format_double(std::get<double>(r.params.at("levels"))) << " levels";
  }
  return o;
}

// ---- 8 ----
Outcome median_contrast_check() {
  Outcome o;
  const auto mc = median_contrast(1, 2, 4);
  o.require(mc.gSpread <= 1.2, "g-based side spread");
  o.require(mc.minFGrowth >= 1.5, "f-based side growth");
  for (double b : mc.budget) o.require(b <= 1.0 + 1e-3, "budget");
  o.detail << "g spread " << format_double(mc.gSpread) << ", min f growth " << format_double(mc.minFGrowth);
  return o;
}

// ---- 9 ----
Outcome engineering(const Paths& paths) {
  Outcome o;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int mismatches = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int dim = 1 + trial % 4;
    const int count = 1 + trial * 3 % 400;
    std::vector<double> coords(count * dim);
    for (auto& c : coords) c = trial % 5 == 0 ? std::round(4 * u(rng)) / 4 : u(rng);
    const SpatialIndex index(coords, dim);
    std::vector<double> a(dim);
    for (auto& c : a) c = trial % 5 == 0 ? std::round(4 * u(rng)) / 4 : u(rng);
    const double r = trial % 5 == 0 ? 0.5 : std::abs(u(rng));
    std::vector<std::size_t> scan;
    for (int i = 0; i < count; ++i) {
      double d2 = 0.0;
      for (int k = 0; k < dim; ++k) d2 += (coords[i * dim + k] - a[k]) * (coords[i * dim + k] - a[k]);
      if (d2 <= r * r) scan.push_back(i);
    }
    if (index.ball_query(a, r) != scan) ++mismatches;
  }
  o.require(mismatches == 0, std::to_string(mismatches) + " ball query mismatches");

  const auto v = sample(AnalyticFamily::sphere(2, 3, 1.3), 0.1);
  const std::string text = varifold_csv(v);
  std::istringstream in(text);
  o.require(varifold_csv(read_varifold_csv(in)) == text, "CSV round trip");

  const fs::path det = fs::path(paths.workdir) / "determinism";
  fs::remove_all(det);
  const std::string config = quote((fs::path(paths.data) / "determinism.json").string());
  int runs_ok = 0;
  for (const char* sub : {"a", "b"})
    runs_ok += run_command(quote(paths.cli) + " run " + config + " --output-dir " + quote((det / sub).string()) +
                           " > /dev/null 2>&1") == 0;
  o.require(runs_ok == 2, "determinism runs failed");
  std::size_t compared = 0;
  if (fs::exists(det / "a")) {
    for (const auto& entry : fs::directory_iterator(det / "a")) {
      ++compared;
      const fs::path other = det / "b" / entry.path().filename();
      o.require(fs::exists(other) && slurp(entry.path()) == slurp(other), "differing bytes in " + entry.path().filename().string());
    }
  }
  o.require(compared >= 3, "too few report files to compare");

  const std::vector<std::pair<std::string, int>> statuses{
      {"empty.json", 0}, {"unknown-key.json", 2}, {"weak-lp-q-ge-p.json", 3}, {"coarse.json", 4}};
  for (const auto& [file, expected] : statuses) {
    const int got = run_command(quote(paths.cli) + " run " + quote((fs::path(paths.data) / file).string()) +
                                " --output-dir " + quote((det / "status").string()) + " > /dev/null 2>&1");
    o.require(got == expected, file + " exited " + std::to_string(got) + ", expected " + std::to_string(expected));
  }
  o.detail << "200 ball queries, " << v.size() << "-atom round trip, " << compared << " files compared, statuses 0/2/3/4";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks"};
  Paths paths;
  app.add_option("--cli", paths.cli, "varitool executable")->required();
  app.add_option("--suite", paths.suite, "shipped suite configuration")->required();
  app.add_option("--data", paths.data, "directory with the status-code configurations")->required();
  app.add_option("--workdir", paths.workdir, "scratch directory")->required();
  CLI11_PARSE(app, argc, argv);
  fs::create_directories(paths.workdir);

  json suite_results;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"constants", constants},
      {"gamma bounds", gamma_bounds},
      {"circle near-equality", circle_equality},
      {"theorem suites", [&] { return theorem_suite(paths, suite_results); }},
      {"lemma suites", lemma_suites},
      {"blow-ups", blowups},
      {"non-rectifiable decomposition", decomposition},
      {"median contrast", median_contrast_check},
      {"engineering", [&] { return engineering(paths); }},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << i + 1 << "] " << criteria[i].first << ": " << o.detail.str()
              << std::endl;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
