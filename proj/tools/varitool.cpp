// Command-line front end: run configs, verify single theorems, sweep
// blow-ups, aggregate gamma bounds, run lemma suites, convert varifolds.

#include "varitool/errors.hpp"
#include "varitool/families.hpp"
#include "varitool/inequalities.hpp"
#include "varitool/report.hpp"
#include "varitool/runner.hpp"
#include "varitool/varifold_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

using nlohmann::json;
using namespace varitool;

namespace {

template <class T>
void put(json& obj, const char* key, const std::optional<T>& value) {
  if (value) obj[key] = *value;
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError(path, "cannot read configuration file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError(path, std::string("not valid JSON: ") + e.what());
  }
}

// The experiment object a single-experiment subcommand starts from: the
// document itself, or the first entry of its "experiments" list.
json base_experiment(const std::optional<std::string>& config) {
  if (!config) return json::object();
  json doc = read_json(*config);
  if (doc.is_object() && doc.contains("experiments")) {
    const json& list = doc["experiments"];
    if (!list.is_array() || list.empty()) throw SchemaError("experiments", "expected a non-empty array");
    return list[0];
  }
  return doc;
}

/// Family flags shared by verify and convert.
struct FamilyFlags {
  std::optional<std::string> type;
  std::optional<int> m, n, k;
  std::optional<double> radius, multiplicity, density;
  std::optional<std::vector<double>> lo, hi, center;
  std::optional<bool> clipped, unbounded;

  void attach(CLI::App* app) {
    app->add_option("--family", type, "Family type: sphere, disc, plane-bundle, slab");
    app->add_option("--m", m, "Varifold dimension");
    app->add_option("--n", n, "Ambient dimension (default m+1)");
    app->add_option("--k", k, "Planes per normal axis (plane-bundle)");
    app->add_option("--radius", radius, "Family radius");
    app->add_option("--multiplicity", multiplicity, "Weight multiplicity (sphere, disc)");
    app->add_option("--density", density, "Slab density");
    app->add_option("--lo", lo, "Slab box lower corner")->expected(1, 16);
    app->add_option("--hi", hi, "Slab box upper corner")->expected(1, 16);
    app->add_option("--family-center", center, "Family center")->expected(1, 16);
    app->add_option("--clipped", clipped, "Clip plane bundles to the ball");
    app->add_option("--unbounded", unbounded, "Slab describes Lebesgue measure on all of R^n");
  }

  void apply(json& family) const {
    if (type && family.value("type", *type) != *type) family = json::object();
    put(family, "type", type);
    put(family, "m", m);
    put(family, "n", n);
    put(family, "k", k);
    put(family, "radius", radius);
    put(family, "multiplicity", multiplicity);
    put(family, "density", density);
    put(family, "lo", lo);
    put(family, "hi", hi);
    put(family, "center", center);
    put(family, "clipped", clipped);
    put(family, "unbounded", unbounded);
  }
};

int report_outcome(const RunOutcome& outcome, bool print_gamma) {
  for (const auto& j : outcome.jobs)
    if (j.exitCode != 0) std::cerr << "error [" << j.job << "]: " << j.error << "\n";
  for (const auto& r : outcome.reports) {
    std::cout << r.summary() << "\n";
    if (print_gamma) {
      const auto it = r.params.find("impliedGammaLowerBound");
      if (it != r.params.end())
        std::cout << "impliedGammaLowerBound = " << format_double(std::get<double>(it->second)) << "\n";
    }
  }
  for (const auto& s : outcome.series) std::cout << s.summary() << "\n";
  return outcome.exitCode;
}

void maybe_write(const RunOutcome& outcome, const std::optional<std::string>& dir, const std::string& prefix) {
  if (!dir) return;
  for (const auto& path : write_outputs(outcome, *dir, prefix)) std::cerr << "wrote " << path << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical toolkit for general varifolds: first variation, maximal functions, inequality checks"};
  // "-h" is left free for the sampling resolution flag.
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "Run every experiment of a configuration file");
  std::string run_config;
  std::optional<std::string> run_dir, run_prefix;
  std::optional<long> run_seed;
  run->add_option("--config,config", run_config, "Configuration file (JSON)")->required();
  run->add_option("--output-dir", run_dir, "Report directory (default: output.dir, $VARITOOL_OUTPUT_DIR, .)");
  run->add_option("--prefix", run_prefix, "Report file prefix (default: output.prefix or name)");
  run->add_option("--seed", run_seed, "Seed for randomized jobs");

  // verify
  auto* verify = app.add_subcommand("verify", "Check one inequality on one family");
  std::optional<std::string> v_config, v_theorem, v_name, v_dir, v_function, v_delta, v_centers;
  std::optional<double> v_h, v_d, v_lambda, v_ball_radius, v_beta, v_fradius, v_finner, v_fouter, v_smin, v_smax;
  std::optional<std::vector<double>> v_center, v_fcenter;
  std::optional<int> v_grid;
  FamilyFlags v_family;
  verify->add_option("--config", v_config, "Experiment object or configuration (first experiment is used)");
  verify->add_option("--theorem", v_theorem,
                     "isoperimetric, ball-iso, size-iso, sobolev-avg, sobolev-rect, poincare, decomposition");
  verify->add_option("--name", v_name, "Report name");
  v_family.attach(verify);
  verify->add_option("--h", v_h, "Sampling resolution (default 0.05)");
  verify->add_option("--d", v_d, "Density level d");
  verify->add_option("--lambda", v_lambda, "Median quantile (sobolev-avg)");
  verify->add_option("--ball-radius", v_ball_radius, "Ball radius (ball-iso, poincare, sobolev-avg)");
  verify->add_option("--center", v_center, "Ball center")->expected(1, 16);
  verify->add_option("--beta-n", v_beta, "Besicovitch constant (sobolev-avg)");
  verify->add_option("--delta-source", v_delta, "analytic or dictionary");
  verify->add_option("--function", v_function, "Test function: cap, plateau, zero");
  verify->add_option("--function-radius", v_fradius, "Cap radius");
  verify->add_option("--function-inner", v_finner, "Plateau inner radius");
  verify->add_option("--function-outer", v_fouter, "Plateau outer radius");
  verify->add_option("--function-center", v_fcenter, "Function center")->expected(1, 16);
  verify->add_option("--s-min", v_smin, "Smallest ball radius for the maximal function");
  verify->add_option("--s-max", v_smax, "Largest ball radius for the maximal function");
  verify->add_option("--centers", v_centers, "Maximal-function centers: atoms, atoms-query, grid");
  verify->add_option("--grid-per-axis", v_grid, "Grid centers per axis");
  verify->add_option("--output-dir", v_dir, "Also write report files here");

  // blowup
  auto* blow = app.add_subcommand("blowup", "Run a blow-up series and print it as CSV");
  std::optional<std::string> b_config, b_kind, b_p, b_dir;
  std::optional<int> b_steps, b_m, b_n, b_k0;
  std::optional<bool> b_assert;
  bool b_control = false;
  blow->add_option("--config", b_config, "Experiment object or configuration (first experiment is used)");
  blow->add_option("--kind", b_kind, "lebesgue-scaling, plane-bundle, sobolev-vs-iso, median-contrast");
  blow->add_option("--p", b_p, "Norm exponent (number or inf)");
  blow->add_option("--steps", b_steps, "Number of refinement steps");
  blow->add_option("--m", b_m, "Varifold dimension");
  blow->add_option("--n", b_n, "Ambient dimension");
  blow->add_option("--k0", b_k0, "Plane count of the first bundle step");
  blow->add_option("--assert-divergence", b_assert, "Require growth at every step");
  blow->add_flag("--control", b_control, "Control run: require the norm to stay bounded");
  blow->add_option("--output-dir", b_dir, "Also write report files here");

  // gamma-bound
  auto* gamma = app.add_subcommand("gamma-bound", "Aggregate implied lower bounds for gamma(m)");
  std::optional<std::string> g_config;
  int g_m = 1;
  std::optional<double> g_h;
  gamma->add_option("--m", g_m, "Dimension m")->required();
  gamma->add_option("--config", g_config, "Use the isoperimetric and ball-iso experiments of this configuration");
  gamma->add_option("--h", g_h, "Sampling resolution of the built-in suite (default 0.02)");

  // lemmas
  auto* lemmas = app.add_subcommand("lemmas", "Randomized lemma suites");
  std::optional<std::string> l_config, l_lemma;
  std::optional<long> l_instances, l_seed;
  lemmas->add_option("--config", l_config, "Experiment object or configuration (first experiment is used)");
  lemmas->add_option("--lemma", l_lemma, "all, iteration, calculus, weak-lp, superlevel");
  lemmas->add_option("--instances", l_instances, "Random instances per lemma");
  lemmas->add_option("--seed", l_seed, "Seed");

  // convert
  auto* convert = app.add_subcommand("convert", "Read and rewrite a varifold CSV, or sample a family into one");
  std::optional<std::string> c_input;
  std::string c_output = "-";
  std::optional<double> c_h;
  FamilyFlags c_family;
  convert->add_option("--input", c_input, "Varifold CSV to read");
  convert->add_option("--output", c_output, "Destination ('-' for stdout)");
  c_family.attach(convert);
  convert->add_option("--h", c_h, "Sampling resolution when sampling a family (default 0.05)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*run) {
      json doc = read_json(run_config);
      if (!doc.is_object()) throw SchemaError("(root)", "expected an object");
      if (run_seed) doc["seed"] = *run_seed;
      if (run_prefix) doc["output"]["prefix"] = *run_prefix;
      auto cfg = parse_config(doc);
      const auto outcome = run_jobs(cfg.jobs);
      const std::string dir = resolve_output_dir(run_dir ? *run_dir : cfg.outputDir);
      for (const auto& path : write_outputs(outcome, dir, cfg.prefix)) std::cerr << "wrote " << path << "\n";
      return report_outcome(outcome, false);
    }

    if (*verify) {
      json exp = base_experiment(v_config);
      put(exp, "kind", v_theorem);
      if (!exp.contains("name")) exp["name"] = exp.value("kind", std::string("verify"));
      put(exp, "name", v_name);
      json family = exp.value("family", json::object());
      v_family.apply(family);
      if (!family.empty()) exp["family"] = family;
      const std::string kind = exp.value("kind", std::string());
      const bool needs_h = kind != "size-iso" && kind != "gamma-bound";
      if (v_h) {
        exp["h"] = *v_h;
      } else if (needs_h && !exp.contains("h")) {
        exp["h"] = 0.05;
      }
      put(exp, "d", v_d);
      put(exp, "lambda", v_lambda);
      put(exp, "radius", v_ball_radius);
      put(exp, "center", v_center);
      put(exp, "betaN", v_beta);
      put(exp, "deltaSource", v_delta);
      if (v_function || v_fradius || v_finner || v_fouter || v_fcenter) {
        json fn = exp.value("function", json::object());
        if (v_function && fn.value("type", *v_function) != *v_function) fn = json::object();
        put(fn, "type", v_function);
        put(fn, "radius", v_fradius);
        put(fn, "inner", v_finner);
        put(fn, "outer", v_fouter);
        put(fn, "center", v_fcenter);
        exp["function"] = fn;
      }
      if (v_smin || v_smax || v_centers || v_grid) {
        json mp = exp.value("maximal", json::object());
        put(mp, "sMin", v_smin);
        put(mp, "sMax", v_smax);
        put(mp, "centers", v_centers);
        put(mp, "gridPerAxis", v_grid);
        exp["maximal"] = mp;
      }
      const Job job = parse_experiment(exp, "verify", 0);
      const auto outcome = run_jobs({job});
      maybe_write(outcome, v_dir, job.name);
      return report_outcome(outcome, true);
    }

    if (*blow) {
      json exp = base_experiment(b_config);
      if (!exp.contains("kind")) exp["kind"] = "blowup";
      if (b_kind) {
        if (*b_kind == "median-contrast") {
          exp["kind"] = "median-contrast";
          exp.erase("blowup");
        } else {
          exp["kind"] = "blowup";
          exp["blowup"] = *b_kind;
        }
      }
      if (!exp.contains("name")) exp["name"] = exp.value("blowup", exp.value("kind", std::string("blowup")));
      if (b_p) {
        if (*b_p == "inf") {
          exp["p"] = "inf";
        } else {
          try {
            exp["p"] = std::stod(*b_p);
          } catch (const std::exception&) {
            throw SchemaError("--p", "expected a number or inf");
          }
        }
      }
      put(exp, "steps", b_steps);
      put(exp, "m", b_m);
      put(exp, "n", b_n);
      put(exp, "k0", b_k0);
      put(exp, "assertDivergence", b_assert);
      if (b_control) exp["assertDivergence"] = false;
      const Job job = parse_experiment(exp, "blowup", 0);
      const auto outcome = run_jobs({job});
      maybe_write(outcome, b_dir, job.name);
      for (const auto& j : outcome.jobs)
        if (j.exitCode != 0) std::cerr << "error [" << j.job << "]: " << j.error << "\n";
      for (const auto& s : outcome.series) {
        std::cout << series_csv(s);
        std::cerr << s.summary() << "\n";
      }
      return outcome.exitCode;
    }

    if (*gamma) {
      json members = json::array();
      if (g_config) {
        const json doc = read_json(*g_config);
        if (!doc.is_object() || !doc.contains("experiments") || !doc["experiments"].is_array())
          throw SchemaError("experiments", "expected an array of experiments");
        for (const auto& e : doc["experiments"]) {
          const std::string kind = e.value("kind", std::string());
          if (kind == "isoperimetric" || kind == "ball-iso") members.push_back(e);
          if (kind == "gamma-bound" && e.contains("members"))
            for (const auto& sub : e["members"]) members.push_back(sub);
        }
      } else {
        const double h = g_h.value_or(0.02);
        members.push_back({{"name", "unit-disc"}, {"kind", "ball-iso"}, {"h", h},
                           {"family", {{"type", "disc"}, {"m", g_m}, {"radius", 1.0}}}});
        members.push_back({{"name", "half-disc"}, {"kind", "ball-iso"}, {"h", h},
                           {"family", {{"type", "disc"}, {"m", g_m}, {"radius", 0.5}}}});
        members.push_back({{"name", "unit-sphere"}, {"kind", "ball-iso"}, {"h", h},
                           {"family", {{"type", "sphere"}, {"m", g_m}, {"radius", 1.0}}}});
      }
      std::set<std::string> seen;
      json unique = json::array();
      for (auto& e : members) {
        if (e.value("family", json::object()).value("m", -1) != g_m) continue;
        if (!seen.insert(e.value("name", std::string())).second) continue;
        unique.push_back(e);
      }
      if (unique.empty()) throw ArgumentError("gamma-bound: no isoperimetric or ball-iso experiment with this m");
      json exp = {{"name", "gamma-bound"}, {"kind", "gamma-bound"}, {"m", g_m}, {"members", unique}};
      const Job job = parse_experiment(exp, "gamma-bound", 0);
      const auto outcome = run_jobs({job});
      const int status = report_outcome(outcome, false);
      for (const auto& r : outcome.reports)
        if (r.theorem == "gamma-bound") {
          std::cout << "gammaLowerBound = " << format_double(r.lhs) << "\n";
          std::cout << "gammaUpperBound = " << format_double(r.rhs) << "\n";
        }
      return status;
    }

    if (*lemmas) {
      json exp = base_experiment(l_config);
      if (!exp.contains("kind")) exp["kind"] = "lemmas";
      if (!exp.contains("name")) exp["name"] = "lemmas";
      put(exp, "lemma", l_lemma);
      put(exp, "instances", l_instances);
      put(exp, "seed", l_seed);
      const Job job = parse_experiment(exp, "lemmas", 0);
      return report_outcome(run_jobs({job}), false);
    }

    if (*convert) {
      DiscreteVarifold v = [&] {
        if (c_input) return load_varifold_csv(*c_input);
        json family = json::object();
        c_family.apply(family);
        if (family.empty()) throw ArgumentError("convert: give --input or a family to sample");
        const double h = c_h.value_or(0.05);
        if (!(h > 0.0)) throw DomainError("--h: must be positive");
        return sample(parse_family_spec(family, "family"), h);
      }();
      if (c_output == "-") {
        write_varifold_csv(v, std::cout);
      } else {
        save_varifold_csv(v, c_output);
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    const int code = exit_code_for(e);
    if (code == 4) std::cerr << "hint: refine the resolution (smaller h or more grid points)\n";
    return code;
  }
  return 0;
}
