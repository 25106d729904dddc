#include "series.hpp"

#include <algorithm>
#include <cmath>

#include "textio.hpp"

namespace agewatch {

std::vector<double> MemorySeries::memory_values() const {
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.memory_used);
  return out;
}

double infer_interval(const std::vector<MemorySample>& samples) {
  if (samples.size() < 2) return 1.0;
  std::vector<double> deltas;
  deltas.reserve(samples.size() - 1);
  for (std::size_t i = 1; i < samples.size(); ++i) {
    deltas.push_back(samples[i].elapsed_seconds - samples[i - 1].elapsed_seconds);
  }
  std::sort(deltas.begin(), deltas.end());
  std::size_t mid = deltas.size() / 2;
  if (deltas.size() % 2 == 1) return deltas[mid];
  return 0.5 * (deltas[mid - 1] + deltas[mid]);
}

MemorySeries parse_series_csv(const std::string& text, const std::string& profile,
                              std::vector<std::string>* warnings) {
  auto lines = split_lines(text);
  if (lines.empty()) throw Error(errc::empty_file, "no header row");

  auto header = split_csv_line(lines[0]);
  std::ptrdiff_t time_col = -1, mem_col = -1;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == "elapsed_seconds") time_col = static_cast<std::ptrdiff_t>(c);
    else if (header[c] == "memory_used") mem_col = static_cast<std::ptrdiff_t>(c);
    else if (warnings && !header[c].empty()) {
      warnings->push_back("ignoring extra column '" + std::string(header[c]) + "'");
    }
  }
  if (time_col < 0) throw Error(errc::missing_column, "elapsed_seconds not in header");
  if (mem_col < 0) throw Error(errc::missing_column, "memory_used not in header");

  MemorySeries series;
  series.profile = profile;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    auto fields = split_csv_line(lines[i]);
    std::size_t row = i;  // 1-based over data rows
    std::size_t need = static_cast<std::size_t>(std::max(time_col, mem_col)) + 1;
    if (fields.size() < need) {
      throw Error(errc::parse_error, "row " + std::to_string(row) + " has too few fields");
    }
    MemorySample sample;
    if (!parse_double(fields[static_cast<std::size_t>(time_col)], sample.elapsed_seconds) ||
        !std::isfinite(sample.elapsed_seconds)) {
      throw Error(errc::non_finite_value,
                  "elapsed_seconds at row " + std::to_string(row));
    }
    if (!parse_double(fields[static_cast<std::size_t>(mem_col)], sample.memory_used) ||
        !std::isfinite(sample.memory_used)) {
      throw Error(errc::non_finite_value, "memory_used at row " + std::to_string(row));
    }
    if (!series.samples.empty() &&
        sample.elapsed_seconds <= series.samples.back().elapsed_seconds) {
      throw Error(errc::non_monotonic_timestamps, "at row " + std::to_string(row));
    }
    series.samples.push_back(sample);
  }
  if (series.samples.empty()) throw Error(errc::empty_file, "no data rows");

  series.sampling_interval_seconds = infer_interval(series.samples);
  if (series.samples.size() >= 2) {
    double median = series.sampling_interval_seconds;
    for (std::size_t i = 1; i < series.samples.size(); ++i) {
      double delta = series.samples[i].elapsed_seconds - series.samples[i - 1].elapsed_seconds;
      if (std::abs(delta - median) > 0.10 * median) {
        throw Error(errc::non_uniform_interval,
                    "delta " + format_double(delta) + " vs median " + format_double(median) +
                        " at row " + std::to_string(i + 1));
      }
    }
  }
  return series;
}

MemorySeries load_csv(const std::string& path, const std::string& profile,
                      std::vector<std::string>* warnings) {
  return parse_series_csv(read_file(path), profile, warnings);
}

std::string series_to_csv(const MemorySeries& series) {
  std::string out = "elapsed_seconds,memory_used\n";
  for (const auto& s : series.samples) {
    out += format_double(s.elapsed_seconds);
    out += ',';
    out += format_double(s.memory_used);
    out += '\n';
  }
  return out;
}

void write_csv(const MemorySeries& series, const std::string& path) {
  write_file(path, series_to_csv(series));
}

std::pair<MemorySeries, MemorySeries> remove_warmup(const MemorySeries& series,
                                                    double warmup_seconds) {
  if (series.samples.empty()) throw Error(errc::empty_file, "empty series");
  MemorySeries warmup, body;
  warmup.profile = body.profile = series.profile;
  warmup.sampling_interval_seconds = body.sampling_interval_seconds =
      series.sampling_interval_seconds;
  for (const auto& s : series.samples) {
    (s.elapsed_seconds < warmup_seconds ? warmup : body).samples.push_back(s);
  }
  if (body.samples.empty()) {
    throw Error(errc::warmup_consumes_everything,
                "warmup of " + format_double(warmup_seconds) + " s leaves no samples");
  }
  return {std::move(warmup), std::move(body)};
}

}  // namespace agewatch
