#pragma once

#include "varitool/report.hpp"

#include <limits>
#include <string>
#include <vector>

namespace varitool {

enum class BlowupKind { LebesgueScaling, PlaneBundle, SobolevVsIso };

std::string to_string(BlowupKind kind);
/// Accepts "lebesgue-scaling", "plane-bundle", "sobolev-vs-iso" and the camelCase forms.
BlowupKind parse_blowup_kind(const std::string& text);

struct BlowupOptions {
  BlowupKind kind = BlowupKind::LebesgueScaling;
  int m = 1;
  int n = 2;
  /// Norm exponent; ignored by SobolevVsIso, which always uses beta.
  double p = std::numeric_limits<double>::infinity();
  int steps = 4;
  /// Plane count of the first bundle step (doubled each step).
  int k0 = 2;
  /// Require growth >= growthThreshold per step; needs p > n/(n-1).
  bool assertDivergence = true;
  double budgetTolerance = 1e-3;
  double growthThreshold = 1.5;
  /// Control series (no divergence asserted) pass when max norm / first norm <= controlFactor.
  double controlFactor = 1.1;
  /// Lebesgue grid cells per unit of eps along each axis (half-width eps box).
  int cellsPerEps = 64;
  /// Sample resolution h = hFactor * eps for bundle kinds.
  double hFactor = 1.0 / 16.0;
  /// Grid size per axis for maximal-function centers (SobolevVsIso).
  int gridPerAxis = 21;
};

/// Runs the sweep: eps = 2^-j for LebesgueScaling, k = k0 2^j planes with
/// eps = 2/k otherwise. Each step rescales f so its derivative budget is 1.
BlowupSeries blowup_series(const BlowupOptions& options);

/// Averaged-Sobolev left sides with medians g versus f itself on complete
/// plane bundles (r(a) = 2, d = 2^-m alpha(m)^-1 alpha(n), lambda = 1/2).
struct MedianContrast {
  std::vector<double> planes;
  std::vector<double> gLhs;
  std::vector<double> fLhs;
  std::vector<double> budget;
  /// max gLhs / min gLhs.
  double gSpread = 0.0;
  /// Smallest step-to-step growth of fLhs.
  double minFGrowth = 0.0;
  bool pass = false;
};
MedianContrast median_contrast(int m, int n, int steps, int k0 = 2, double spike = 4.0, double g_spread_limit = 1.2,
                               double f_growth_min = 1.5);

}  // namespace varitool
