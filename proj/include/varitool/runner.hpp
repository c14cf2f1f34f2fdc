#pragma once

#include "varitool/families.hpp"
#include "varitool/report.hpp"

#include <json.hpp>

#include <cstdint>
#include <exception>
#include <functional>
#include <string>
#include <vector>

namespace varitool {

/// Reports produced by one experiment, or the error that stopped it.
struct JobResult {
  std::string job;
  std::vector<VerificationReport> reports;
  std::vector<BlowupSeries> series;
  int exitCode = 0;
  std::string error;
};

/// A validated experiment ready to run.
struct Job {
  std::string name;
  std::string kind;
  std::function<JobResult()> run;
};

struct RunConfig {
  std::string name = "run";
  std::uint64_t seed = 0;
  std::string outputDir;
  std::string prefix;
  std::vector<Job> jobs;
};

/// Validates the whole document and builds the job list. Throws SchemaError
/// naming the offending field; unknown keys are errors.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::string& path);

/// Validates a family object ({"type": ..., ...}) and builds the family.
AnalyticFamily parse_family_spec(const nlohmann::json& spec, const std::string& path);

/// Validates one experiment object (as found in "experiments").
Job parse_experiment(const nlohmann::json& spec, const std::string& path, std::uint64_t seed);

struct RunOutcome {
  std::vector<JobResult> jobs;
  std::vector<VerificationReport> reports;
  std::vector<BlowupSeries> series;
  /// 0 when every report and series passes, otherwise the status of the
  /// first failing job in name order (1 for a failed check).
  int exitCode = 0;
};

/// Runs the jobs (in parallel when OpenMP threads are available) and merges
/// their output by job name.
RunOutcome run_jobs(const std::vector<Job>& jobs);

/// Writes <prefix>-reports.csv, <prefix>-reports.json and one CSV per series
/// into `dir`; returns the written paths.
std::vector<std::string> write_outputs(const RunOutcome& outcome, const std::string& dir, const std::string& prefix);

/// Output directory: explicit value, else $VARITOOL_OUTPUT_DIR, else ".".
std::string resolve_output_dir(const std::string& explicit_dir);

/// Process exit status for an exception: 2 schema, 3 precondition or
/// domain, 4 resolution, 1 otherwise.
int exit_code_for(const std::exception& e);
int exit_code_for(std::exception_ptr e);

}  // namespace varitool
