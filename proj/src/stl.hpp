#pragma once

#include <string>
#include <vector>

#include "errors.hpp"

namespace agewatch {

struct StlConfig {
  // Cycle-subseries smoother: span counted in cycles, not samples.
  int seasonal_span = 7;
  int seasonal_degree = 0;
  // 0 means derive the smallest odd integer >= 1.5*period/(1 - 1.5/seasonal_span).
  int trend_span = 0;
  int trend_degree = 1;
  // 0 means derive the smallest odd integer >= period.
  int lowpass_span = 0;
  int lowpass_degree = 1;
  int inner_iterations = 2;
  int outer_iterations = 1;
};

struct Decomposition {
  std::vector<double> trend;
  std::vector<double> seasonal;
  std::vector<double> residual;
  int period = 0;
};

// Locally weighted regression with tricube weights over the `span` nearest
// indices; windows truncate asymmetrically at the ends. Degenerate degree-1
// fits fall back to the weighted mean.
std::vector<double> loess_smooth(const std::vector<double>& values, int span, int degree);

// Seasonal-trend decomposition via iterated LOESS: per-cycle subseries
// smoothing, a triple-moving-average low-pass stage, and trend smoothing,
// with one bisquare reweighting round for outliers. The residual is defined
// as input - trend - seasonal, so the additive identity is exact. Seasonal
// is centered over each disjoint full cycle.
Decomposition stl_decompose(const std::vector<double>& values, int period,
                            const StlConfig& cfg = {});

std::string components_to_csv(const Decomposition& d);
void write_components_csv(const Decomposition& d, const std::string& path);

}  // namespace agewatch
