#include "features.hpp"

#include <cmath>

#include "textio.hpp"

namespace agewatch {

std::vector<FeatureRow> extract_features(const LabeledSeries& series, std::size_t window) {
  std::size_t n = series.size();
  if (window < 2) throw Error(errc::invalid_argument, "feature window must be >= 2");
  if (n <= window) {
    throw Error(errc::series_too_short,
                std::to_string(n) + " samples, need more than " + std::to_string(window));
  }
  if (series.labels.size() != n) {
    throw Error(errc::length_mismatch, "labels do not cover the series");
  }

  std::vector<FeatureRow> rows;
  rows.reserve(n - window);
  std::vector<double> buf(window);
  for (std::size_t i = window; i < n; ++i) {
    for (std::size_t j = 0; j < window; ++j) {
      buf[j] = series.series.samples[i - window + 1 + j].memory_used;
    }
    double mean = 0.0;
    for (double v : buf) mean += v;
    mean /= static_cast<double>(window);
    double ss = 0.0;
    for (double v : buf) ss += (v - mean) * (v - mean);
    double var = ss / static_cast<double>(window - 1);
    double sd = var > 0.0 ? std::sqrt(var) : 0.0;

    FeatureRow row;
    row.index = i;
    row.label = series.labels[i];
    row.features = {
        series.series.samples[i].memory_used,
        mean,
        sd,
        ols_slope(buf),
        series.series.samples[i].memory_used - series.series.samples[i - 1].memory_used,
    };
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string features_to_csv(const std::vector<FeatureRow>& rows) {
  std::string out = "index,memory,rolling_mean,rolling_std,slope,first_diff,label\n";
  for (const auto& r : rows) {
    out += format_int(static_cast<std::int64_t>(r.index));
    for (double f : r.features) {
      out += ',';
      out += format_double(f);
    }
    out += ',';
    out += r.label ? '1' : '0';
    out += '\n';
  }
  return out;
}

void write_features_csv(const std::vector<FeatureRow>& rows, const std::string& path) {
  write_file(path, features_to_csv(rows));
}

}  // namespace agewatch
