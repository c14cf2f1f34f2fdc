#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

namespace varitool {

using ParamValue = std::variant<double, std::string>;
using ParamMap = std::map<std::string, ParamValue>;

/// Outcome of one inequality check.
struct VerificationReport {
  std::string name;
  std::string theorem;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  ParamMap params;
  /// Which side used a bound instead of an exact value, and in which direction.
  std::vector<std::string> conservative;
  bool pass = false;
  double tolerance = 1e-9;

  /// Sets ratio = lhs / rhs (0/0 = 0, x/0 = inf) and pass = ratio <= 1 + tolerance.
  void finalize();
  /// One-line human summary.
  std::string summary() const;
};

/// A sweep whose measured norm is meant to diverge (or stay bounded) while
/// the derivative budget stays at most 1.
struct BlowupSeries {
  std::string name;
  std::string kind;
  double p = 0.0;
  std::vector<double> parameter;
  std::vector<double> norm;
  std::vector<double> budget;
  /// norm[i] / norm[i-1]; the first entry is 1 by convention.
  std::vector<double> growthFactor;
  ParamMap params;
  bool pass = false;
  std::string verdict;

  std::string summary() const;
};

/// Shortest decimal that reads back to the same double; "inf", "-inf", "nan".
std::string format_double(double x);

/// One row per report; parameter keys become columns (union over reports,
/// sorted), missing entries left empty.
std::string reports_csv(const std::vector<VerificationReport>& reports);
std::string series_csv(const BlowupSeries& series);
/// JSON document with "reports" and "series" arrays.
std::string results_json(const std::vector<VerificationReport>& reports, const std::vector<BlowupSeries>& series);

}  // namespace varitool
