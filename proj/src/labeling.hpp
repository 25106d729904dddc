#pragma once

#include <string>
#include <vector>

#include "series.hpp"
#include "stl.hpp"

namespace agewatch {

enum class Provenance { Warmup, TrendWindow, Default };

const char* provenance_name(Provenance p);
Provenance provenance_from_name(const std::string& name);

struct LabelingConfig {
  int window_size = 60;
  int stride = 1;
  double slope_threshold = 0.5;  // memory units per sample
  double warmup_seconds = 600.0;
};

struct LabeledSeries {
  MemorySeries series;
  std::vector<int> labels;
  std::vector<Provenance> provenance;

  std::size_t size() const { return series.samples.size(); }
};

// Least-squares slope of y against x = 0..n-1.
double ols_slope(const std::vector<double>& y);
double ols_slope(const double* y, std::size_t n);

// Slides windows of cfg.window_size at cfg.stride offsets; every sample in a
// window with slope strictly above the threshold gets label 1. Overlapping
// windows combine by OR. Samples covered by no window stay 0.
std::vector<int> label_by_trend(const std::vector<double>& trend, const LabelingConfig& cfg);

// True for samples covered by at least one evaluated window.
std::vector<bool> window_coverage(std::size_t n, const LabelingConfig& cfg);

// Warmup zeros prepended to the body labels.
std::vector<int> consolidate(const std::vector<int>& body_labels, std::size_t warmup_len);

// Full labeling pass: warmup split, trend decomposition of the body,
// window labeling on the trend, consolidation over the original series.
LabeledSeries label_pipeline(const MemorySeries& input, int period, const StlConfig& stl_cfg,
                             const LabelingConfig& cfg);

std::string labeled_to_csv(const LabeledSeries& ls, bool include_provenance);
void write_labeled_csv(const LabeledSeries& ls, const std::string& path,
                       bool include_provenance = true);

// Reads `elapsed_seconds,memory_used,label[,provenance]`; provenance defaults
// to Default when the column is absent. Applies the same validation as the
// plain series loader.
LabeledSeries load_labeled_csv(const std::string& path, const std::string& profile = "synthetic");
LabeledSeries parse_labeled_csv(const std::string& text, const std::string& profile);

}  // namespace agewatch
