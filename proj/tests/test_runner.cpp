#include "varitool/errors.hpp"
#include "varitool/runner.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace varitool;
using nlohmann::json;

namespace {

std::string schema_path(const json& doc) {
  try {
    parse_config(doc);
  } catch (const SchemaError& e) {
    return e.path();
  }
  return "(accepted)";
}

json disc_ball_iso(const std::string& name) {
  return json{{"name", name},
              {"kind", "ball-iso"},
              {"h", 0.05},
              {"family", {{"type", "disc"}, {"m", 2}, {"n", 3}, {"radius", 1.0}}}};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("empty configuration runs nothing and succeeds") {
  const auto cfg = parse_config(json::object());
  CHECK(cfg.jobs.empty());
  CHECK(cfg.prefix == "run");
  CHECK(run_jobs(cfg.jobs).exitCode == 0);
  CHECK(parse_config(json{{"experiments", json::array()}}).jobs.empty());
}

TEST_CASE("schema errors name the offending field") {
  CHECK(schema_path(json{{"bogus", 1}}) == "bogus");
  CHECK(schema_path(json::array()) == "(root)");
  CHECK(schema_path(json{{"seed", "x"}}) == "seed");

  auto bad_radius = disc_ball_iso("a");
  bad_radius["family"]["radius"] = "big";
  CHECK(schema_path(json{{"experiments", {disc_ball_iso("ok"), bad_radius}}}) == "experiments[1].family.radius");

  auto unknown = disc_ball_iso("a");
  unknown["family"]["colour"] = "red";
  CHECK(schema_path(json{{"experiments", {unknown}}}) == "experiments[0].family.colour");

  auto no_kind = disc_ball_iso("a");
  no_kind.erase("kind");
  CHECK(schema_path(json{{"experiments", {no_kind}}}) == "experiments[0].kind");

  auto weird_kind = disc_ball_iso("a");
  weird_kind["kind"] = "teleport";
  CHECK(schema_path(json{{"experiments", {weird_kind}}}) == "experiments[0].kind");

  CHECK(schema_path(json{{"experiments", {disc_ball_iso("a"), disc_ball_iso("a")}}}) == "experiments[1].name");

  json blow{{"name", "b"}, {"kind", "blowup"}, {"blowup", "nope"}};
  CHECK(schema_path(json{{"experiments", {blow}}}) == "experiments[0].blowup");
}

TEST_CASE("numeric range violations are rejected before running") {
  json weak{{"name", "w"}, {"kind", "weak-lp"}, {"p", 2.0}, {"q", 3.0}};
  CHECK_THROWS_AS(parse_config(json{{"experiments", {weak}}}), DomainError);
  json blow{{"name", "b"}, {"kind", "blowup"}, {"blowup", "lebesgue-scaling"}, {"n", 2}, {"p", 1.5}};
  CHECK_THROWS_AS(parse_config(json{{"experiments", {blow}}}), DomainError);
  auto negative_h = disc_ball_iso("a");
  negative_h["h"] = -0.1;
  CHECK_THROWS_AS(parse_config(json{{"experiments", {negative_h}}}), DomainError);
  CHECK_THROWS_AS(parse_config(json{{"tolerances", {{"report", 0.5}}}}), DomainError);
}

TEST_CASE("exit statuses follow the error class") {
  CHECK(exit_code_for(SchemaError("x", "y")) == 2);
  CHECK(exit_code_for(DomainError("x")) == 3);
  CHECK(exit_code_for(PreconditionError("x")) == 3);
  CHECK(exit_code_for(HypothesisError("x")) == 3);
  CHECK(exit_code_for(UnsupportedFamilyError("x")) == 3);
  CHECK(exit_code_for(ArgumentError("x")) == 3);
  CHECK(exit_code_for(ResolutionError("x")) == 4);
  CHECK(exit_code_for(std::runtime_error("x")) == 1);
}

TEST_CASE("too coarse a resolution fails the job with status 4") {
  auto coarse = disc_ball_iso("coarse");
  coarse["h"] = 0.5;
  const auto cfg = parse_config(json{{"experiments", {coarse, disc_ball_iso("fine")}}});
  const auto out = run_jobs(cfg.jobs);
  CHECK(out.exitCode == 4);
  REQUIRE(out.jobs.size() == 2);
  CHECK(out.jobs[0].job == "coarse");
  CHECK(out.jobs[0].error.find("refine") != std::string::npos);
  CHECK(out.jobs[1].exitCode == 0);
  CHECK(out.reports.size() == 1);
}

TEST_CASE("runs are byte-for-byte deterministic") {
  const json doc{{"name", "det"},
                 {"seed", 11},
                 {"experiments",
                  {disc_ball_iso("disc"),
                   {{"name", "lem"}, {"kind", "lemmas"}, {"lemma", "weak-lp"}, {"instances", 50}},
                   {{"name", "scale"}, {"kind", "blowup"}, {"blowup", "lebesgue-scaling"}, {"steps", 3}}}}};
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / "varitool-runner-test";
  fs::remove_all(root);
  std::vector<std::vector<std::string>> contents;
  for (int run = 0; run < 2; ++run) {
    const auto cfg = parse_config(doc);
    const auto outcome = run_jobs(cfg.jobs);
    CHECK(outcome.exitCode == 0);
    const auto files = write_outputs(outcome, (root / std::to_string(run)).string(), cfg.prefix);
    CHECK(files.size() == 3);
    std::vector<std::string> texts;
    for (const auto& f : files) texts.push_back(slurp(f));
    contents.push_back(texts);
  }
  CHECK(contents[0] == contents[1]);
  CHECK(fs::exists(root / "0" / "det-reports.csv"));
  CHECK(fs::exists(root / "0" / "det-series-scale.csv"));
  fs::remove_all(root);
}

TEST_CASE("report tolerance override is applied") {
  const json doc{{"tolerances", {{"report", 0.05}}}, {"experiments", {disc_ball_iso("disc")}}};
  const auto out = run_jobs(parse_config(doc).jobs);
  REQUIRE(out.reports.size() == 1);
  CHECK(out.reports[0].tolerance == 0.05);
  CHECK(out.reports[0].name == "disc");
}

TEST_CASE("gamma bound job summarises its members") {
  json member = disc_ball_iso("unit");
  const json doc{{"experiments", {{{"name", "g"}, {"kind", "gamma-bound"}, {"m", 2}, {"members", {member}}}}}};
  const auto out = run_jobs(parse_config(doc).jobs);
  REQUIRE(out.reports.size() == 2);
  CHECK(out.reports[0].name == "g/bound");
  CHECK(out.reports[0].pass);
  CHECK(out.reports[1].name == "g/unit");

  json bad{{"name", "g"}, {"kind", "gamma-bound"}, {"m", 2}, {"members", {{{"name", "x"}, {"kind", "weak-lp"}, {"p", 2}, {"q", 1}}}}};
  CHECK(schema_path(json{{"experiments", {bad}}}) == "experiments[0].members[0].kind");
}

TEST_CASE("output directory resolution") {
  CHECK(resolve_output_dir("explicit") == "explicit");
  setenv("VARITOOL_OUTPUT_DIR", "from-env", 1);
  CHECK(resolve_output_dir("") == "from-env");
  unsetenv("VARITOOL_OUTPUT_DIR");
  CHECK(resolve_output_dir("") == ".");
}

TEST_CASE("unreadable configuration is a schema error") {
  CHECK_THROWS_AS(load_config("/nonexistent/varitool.json"), SchemaError);
  const auto path = std::filesystem::temp_directory_path() / "varitool-broken.json";
  std::ofstream(path) << "{ not json";
  CHECK_THROWS_AS(load_config(path.string()), SchemaError);
  std::filesystem::remove(path);
}
