#pragma once

#include <optional>

#include "utm/contours.hpp"

namespace utm {

/// User-settable contour parameters. Absent values are chosen per integral
/// by the decay policies in contours.hpp.
struct ContourConfig {
  double theta = kDefaultTheta;
  std::optional<double> lambda_max;
  int panels = kDefaultPanels;
  std::optional<double> indent;  // interval default: min(0.1, π/(4L))
  int order = kDefaultOrder;
};

/// Threshold on the discarded imaginary part of a real-valued result.
inline constexpr double kImagDiagnostic = 1e-8;
inline constexpr double kImagFailure = 1e-6;

double default_indent(double L);

/// Worker count for grid-parallel loops; falls back to UTM_HEAT_JOBS, then 1.
int max_jobs();
void set_max_jobs(int jobs);

}  // namespace utm
