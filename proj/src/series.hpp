#pragma once

#include <string>
#include <vector>

#include "errors.hpp"

namespace agewatch {

struct MemorySample {
  double elapsed_seconds = 0.0;
  double memory_used = 0.0;
};

struct MemorySeries {
  std::string profile = "synthetic";
  double sampling_interval_seconds = 1.0;
  std::vector<MemorySample> samples;

  std::size_t size() const { return samples.size(); }
  std::vector<double> memory_values() const;
};

// Parses a two-column CSV (header `elapsed_seconds,memory_used`; extra
// columns are skipped, reported through `warnings` when given). Row indices
// in errors are 1-based over data rows. The sampling interval is the median
// of consecutive timestamp deltas; a delta off by more than 10% from that
// median rejects the file.
MemorySeries load_csv(const std::string& path, const std::string& profile = "synthetic",
                      std::vector<std::string>* warnings = nullptr);

MemorySeries parse_series_csv(const std::string& text, const std::string& profile,
                              std::vector<std::string>* warnings = nullptr);

std::string series_to_csv(const MemorySeries& series);
void write_csv(const MemorySeries& series, const std::string& path);

// Splits at warmup_seconds. Warmup keeps every sample with
// elapsed_seconds < warmup_seconds; concatenating the two parts gives back
// the input unchanged.
std::pair<MemorySeries, MemorySeries> remove_warmup(const MemorySeries& series,
                                                    double warmup_seconds = 600.0);

double infer_interval(const std::vector<MemorySample>& samples);

}  // namespace agewatch
