#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "labeling.hpp"

namespace agewatch {

inline constexpr std::size_t kFeatureWidth = 5;

struct FeatureRow {
  std::vector<double> features;
  int label = 0;
  std::size_t index = 0;  // source sample index
};

// One row per sample index i >= window, computed over the trailing window
// (i-window, i]:
//   [ memory(i), rolling mean, rolling sample std (0 for identical values),
//     least-squares slope, first difference memory(i) - memory(i-1) ]
// The label is copied from sample i.
std::vector<FeatureRow> extract_features(const LabeledSeries& series, std::size_t window = 12);

std::string features_to_csv(const std::vector<FeatureRow>& rows);
void write_features_csv(const std::vector<FeatureRow>& rows, const std::string& path);

}  // namespace agewatch
