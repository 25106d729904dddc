#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "forest.hpp"
#include "metrics.hpp"

namespace agewatch {

struct RetrainEvent {
  std::size_t step = 0;
  std::string trigger;  // Drift (ddm) or Change (adwin)
  std::uint64_t window_count0 = 0;
  std::uint64_t window_count1 = 0;
  std::string action;  // Retrained | SkippedSingleClass
};

// One contiguous stretch scored under a single model version (prequential)
// or one fold (kfold).
struct SegmentStat {
  std::size_t begin = 0;
  std::size_t end = 0;
  int model_version = 0;
  ConfusionMatrix cm;
  Metrics metrics;
};

struct EventLogRow {
  std::size_t step = 0;
  std::string detector;
  std::string phase;
};

struct PlotRow {
  std::size_t step = 0;
  double memory = 0.0;
  int label = 0;
  int prediction = 0;
  int model_version = 0;
};

struct RunReport {
  std::string kind;  // prequential | kfold
  std::string mode;  // static | ddm | adwin | kfold
  std::string scenario;
  nlohmann::json config;  // full effective configuration echo
  std::size_t n_instances = 0;
  ConfusionMatrix cm;
  Metrics metrics;
  std::vector<RetrainEvent> events;
  std::vector<SegmentStat> segments;
};

nlohmann::json metrics_to_json(const Metrics& m);
nlohmann::json confusion_to_json(const ConfusionMatrix& cm);
nlohmann::json report_to_json(const RunReport& report);
std::string report_to_string(const RunReport& report);
void write_report(const RunReport& report, const std::string& path);
RunReport report_from_json(const std::string& text);

RunReport make_kfold_report(const KfoldResult& result, const std::string& scenario,
                            nlohmann::json config);

// model,scenario,accuracy,precision,recall,f1 rows in input order.
std::string aggregate_csv(const std::vector<RunReport>& reports);

std::string events_to_csv(const std::vector<EventLogRow>& rows);
std::string plot_to_csv(const std::vector<PlotRow>& rows);
std::vector<PlotRow> plot_from_csv(const std::string& text);

// Static line chart of the memory trace with truth/prediction bands and
// retrain markers; pure text output, deterministic.
std::string render_svg(const std::vector<PlotRow>& rows,
                       const std::vector<RetrainEvent>& events);

// Human-readable digest of a stored report.
std::string summarize_report(const std::string& report_json_text);

}  // namespace agewatch
