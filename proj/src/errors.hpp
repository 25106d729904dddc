#pragma once

#include <stdexcept>
#include <string>

namespace agewatch {

enum class errc {
  missing_column,
  non_monotonic_timestamps,
  non_finite_value,
  empty_file,
  non_uniform_interval,
  warmup_consumes_everything,
  series_too_short,
  invalid_period,
  invalid_span,
  window_too_short,
  series_shorter_than_window,
  empty_training_set,
  feature_width_mismatch,
  too_few_rows,
  length_mismatch,
  value_out_of_range,
  index_out_of_range,
  invalid_spec,
  source_exhausted,
  io_error,
  parse_error,
  invalid_argument,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::missing_column: return "MissingColumn";
    case errc::non_monotonic_timestamps: return "NonMonotonicTimestamps";
    case errc::non_finite_value: return "NonFiniteValue";
    case errc::empty_file: return "EmptyFile";
    case errc::non_uniform_interval: return "NonUniformInterval";
    case errc::warmup_consumes_everything: return "WarmupConsumesEverything";
    case errc::series_too_short: return "SeriesTooShort";
    case errc::invalid_period: return "InvalidPeriod";
    case errc::invalid_span: return "InvalidSpan";
    case errc::window_too_short: return "WindowTooShort";
    case errc::series_shorter_than_window: return "SeriesShorterThanWindow";
    case errc::empty_training_set: return "EmptyTrainingSet";
    case errc::feature_width_mismatch: return "FeatureWidthMismatch";
    case errc::too_few_rows: return "TooFewRows";
    case errc::length_mismatch: return "LengthMismatch";
    case errc::value_out_of_range: return "ValueOutOfRange";
    case errc::index_out_of_range: return "IndexOutOfRange";
    case errc::invalid_spec: return "InvalidSpec";
    case errc::source_exhausted: return "SourceExhausted";
    case errc::io_error: return "IoError";
    case errc::parse_error: return "ParseError";
    case errc::invalid_argument: return "InvalidArgument";
  }
  return "Unknown";
}

// All recoverable failures in the library throw this. The C API boundary
// converts it to a status code plus a retrievable message.
class Error : public std::runtime_error {
 public:
  Error(errc code, std::string detail)
      : std::runtime_error(std::string(errc_name(code)) + ": " + detail),
        code_(code),
        detail_(std::move(detail)) {}

  errc code() const { return code_; }
  // Message without the code-name prefix; the status already names the code.
  const std::string& detail() const { return detail_; }

 private:
  errc code_;
  std::string detail_;
};

}  // namespace agewatch
