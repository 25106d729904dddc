#include "labeling.hpp"

#include <cmath>

#include "textio.hpp"

namespace agewatch {

const char* provenance_name(Provenance p) {
  switch (p) {
    case Provenance::Warmup: return "Warmup";
    case Provenance::TrendWindow: return "TrendWindow";
    case Provenance::Default: return "Default";
  }
  return "Default";
}

Provenance provenance_from_name(const std::string& name) {
  if (name == "Warmup") return Provenance::Warmup;
  if (name == "TrendWindow") return Provenance::TrendWindow;
  if (name == "Default") return Provenance::Default;
  throw Error(errc::parse_error, "unknown provenance '" + name + "'");
}

double ols_slope(const double* y, std::size_t n) {
  if (n < 2) throw Error(errc::window_too_short, "need at least 2 points");
  // x = 0..n-1, so sum of (x - xbar)^2 has the closed form n(n^2-1)/12 and
  // the cross term reduces to sum of (x - xbar)*y.
  double nd = static_cast<double>(n);
  double xbar = 0.5 * (nd - 1.0);
  double sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) sxy += (static_cast<double>(i) - xbar) * y[i];
  double sxx = nd * (nd * nd - 1.0) / 12.0;
  return sxy / sxx;
}

double ols_slope(const std::vector<double>& y) { return ols_slope(y.data(), y.size()); }

static void validate_labeling_config(const LabelingConfig& cfg) {
  if (cfg.window_size < 2) throw Error(errc::invalid_argument, "window_size must be >= 2");
  if (cfg.stride < 1 || cfg.stride > cfg.window_size) {
    throw Error(errc::invalid_argument, "stride must be in [1, window_size]");
  }
  if (!(cfg.slope_threshold > 0.0)) {
    throw Error(errc::invalid_argument, "slope_threshold must be > 0");
  }
}

std::vector<int> label_by_trend(const std::vector<double>& trend, const LabelingConfig& cfg) {
  validate_labeling_config(cfg);
  std::size_t n = trend.size();
  std::size_t w = static_cast<std::size_t>(cfg.window_size);
  if (n < w) {
    throw Error(errc::series_shorter_than_window,
                std::to_string(n) + " samples < window " + std::to_string(w));
  }
  std::vector<int> labels(n, 0);
  for (std::size_t s = 0; s + w <= n; s += static_cast<std::size_t>(cfg.stride)) {
    if (ols_slope(trend.data() + s, w) > cfg.slope_threshold) {
      for (std::size_t i = s; i < s + w; ++i) labels[i] = 1;
    }
  }
  return labels;
}

std::vector<bool> window_coverage(std::size_t n, const LabelingConfig& cfg) {
  validate_labeling_config(cfg);
  std::vector<bool> covered(n, false);
  std::size_t w = static_cast<std::size_t>(cfg.window_size);
  for (std::size_t s = 0; s + w <= n; s += static_cast<std::size_t>(cfg.stride)) {
    for (std::size_t i = s; i < s + w; ++i) covered[i] = true;
  }
  return covered;
}

std::vector<int> consolidate(const std::vector<int>& body_labels, std::size_t warmup_len) {
  std::vector<int> out(warmup_len, 0);
  out.insert(out.end(), body_labels.begin(), body_labels.end());
  return out;
}

LabeledSeries label_pipeline(const MemorySeries& input, int period, const StlConfig& stl_cfg,
                             const LabelingConfig& cfg) {
  auto [warmup, body] = remove_warmup(input, cfg.warmup_seconds);
  auto decomposition = stl_decompose(body.memory_values(), period, stl_cfg);
  auto body_labels = label_by_trend(decomposition.trend, cfg);
  auto covered = window_coverage(body_labels.size(), cfg);

  LabeledSeries out;
  out.series = input;
  out.labels = consolidate(body_labels, warmup.size());
  out.provenance.assign(warmup.size(), Provenance::Warmup);
  for (std::size_t i = 0; i < body_labels.size(); ++i) {
    out.provenance.push_back(covered[i] ? Provenance::TrendWindow : Provenance::Default);
  }
  return out;
}

std::string labeled_to_csv(const LabeledSeries& ls, bool include_provenance) {
  if (ls.labels.size() != ls.series.samples.size() ||
      ls.provenance.size() != ls.series.samples.size()) {
    throw Error(errc::length_mismatch, "labels/provenance do not cover the series");
  }
  std::string out = include_provenance ? "elapsed_seconds,memory_used,label,provenance\n"
                                       : "elapsed_seconds,memory_used,label\n";
  for (std::size_t i = 0; i < ls.series.samples.size(); ++i) {
    out += format_double(ls.series.samples[i].elapsed_seconds);
    out += ',';
    out += format_double(ls.series.samples[i].memory_used);
    out += ',';
    out += ls.labels[i] ? '1' : '0';
    if (include_provenance) {
      out += ',';
      out += provenance_name(ls.provenance[i]);
    }
    out += '\n';
  }
  return out;
}

void write_labeled_csv(const LabeledSeries& ls, const std::string& path,
                       bool include_provenance) {
  write_file(path, labeled_to_csv(ls, include_provenance));
}

LabeledSeries parse_labeled_csv(const std::string& text, const std::string& profile) {
  LabeledSeries out;
  out.series = parse_series_csv(text, profile, nullptr);

  auto lines = split_lines(text);
  auto header = split_csv_line(lines[0]);
  std::ptrdiff_t label_col = -1, prov_col = -1;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == "label") label_col = static_cast<std::ptrdiff_t>(c);
    else if (header[c] == "provenance") prov_col = static_cast<std::ptrdiff_t>(c);
  }
  if (label_col < 0) throw Error(errc::missing_column, "label not in header");

  for (std::size_t i = 1; i < lines.size(); ++i) {
    auto fields = split_csv_line(lines[i]);
    if (fields.size() <= static_cast<std::size_t>(label_col)) {
      throw Error(errc::parse_error, "row " + std::to_string(i) + " lacks label field");
    }
    std::int64_t label = 0;
    if (!parse_int(fields[static_cast<std::size_t>(label_col)], label) ||
        (label != 0 && label != 1)) {
      throw Error(errc::parse_error, "label at row " + std::to_string(i) + " must be 0 or 1");
    }
    out.labels.push_back(static_cast<int>(label));
    if (prov_col >= 0) {
      if (fields.size() <= static_cast<std::size_t>(prov_col)) {
        throw Error(errc::parse_error, "row " + std::to_string(i) + " lacks provenance field");
      }
      out.provenance.push_back(
          provenance_from_name(std::string(fields[static_cast<std::size_t>(prov_col)])));
    } else {
      out.provenance.push_back(Provenance::Default);
    }
  }
  return out;
}

LabeledSeries load_labeled_csv(const std::string& path, const std::string& profile) {
  return parse_labeled_csv(read_file(path), profile);
}

}  // namespace agewatch
