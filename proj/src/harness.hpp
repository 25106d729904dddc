#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "detectors.hpp"
#include "forest.hpp"
#include "report.hpp"
#include "scenarios.hpp"

namespace agewatch {

enum class Mode { Static, AdaptiveDDM, AdaptiveADWIN };

const char* mode_name(Mode m);
Mode mode_from_name(const std::string& name);

struct HarnessConfig {
  Mode mode = Mode::Static;
  std::size_t retrain_window = 2000;
  ForestConfig forest;  // hyperparameters for retrained models
  int ddm_min_instances = 30;
  double adwin_delta = 0.002;
  int adwin_max_buckets = 5;
  std::uint64_t base_seed = 0;  // retrain seeds derive from this per event
};

struct PrequentialResult {
  RunReport report;  // scenario/config fields left to the caller
  std::vector<EventLogRow> event_log;
  std::vector<PlotRow> plot;
};

// Test-then-train-on-drift loop: every instance is scored with the current
// model first; adaptive modes feed the 0/1 misclassification to their
// detector and, on a drift/change signal, retrain a fresh forest on the
// FIFO buffer of the last retrain_window instances when it holds both
// classes, then reset the detector. Warning never retrains. Static mode
// keeps the initial model throughout.
PrequentialResult run_prequential(const std::vector<FeatureRow>& stream,
                                  const ForestModel& initial_model,
                                  const HarnessConfig& cfg);

struct MatrixConfig {
  std::vector<std::string> scenarios;  // builtin names or spec file paths
  std::vector<Mode> modes;
  std::uint64_t seed = 42;
  std::size_t retrain_window = 2000;
  std::size_t feature_window = 12;
  ForestConfig forest;
  std::string train_profile = "low";
  int kfold_k = 5;
};

MatrixConfig default_matrix_config();
MatrixConfig parse_matrix_config(const std::string& text);
MatrixConfig load_matrix_config(const std::string& path);

struct MatrixResult {
  std::vector<RunReport> reports;  // scenario-major, mode-minor order
  std::vector<std::vector<EventLogRow>> event_logs;
  std::vector<std::vector<PlotRow>> plots;
  std::vector<std::string> labels;  // file-name-safe run labels
  RunReport kfold_reference;        // in-distribution kfold on the train profile
};

// Trains the initial model offline on the train profile, evaluates it
// in-distribution by k-fold, then runs every scenario under every mode
// with shared seeds.
MatrixResult run_matrix(const MatrixConfig& cfg);

// report_<label>.json, events_<label>.csv, plot_<label>.csv per run, plus
// aggregate.csv and report_kfold_<train_profile>.json under out_dir.
void write_matrix_outputs(const MatrixResult& result, const std::string& out_dir);

nlohmann::json forest_config_to_json(const ForestConfig& cfg);
nlohmann::json harness_config_to_json(const HarnessConfig& cfg);

}  // namespace agewatch
