#if !defined(_WIN32)
#define AGEWATCH_API __attribute__((visibility("default")))
#endif

#include "agewatch.h"

#include <cstring>
#include <new>
#include <string>

#include "detectors.hpp"
#include "errors.hpp"
#include "features.hpp"
#include "forest.hpp"
#include "harness.hpp"
#include "labeling.hpp"
#include "report.hpp"
#include "scenarios.hpp"
#include "series.hpp"
#include "stl.hpp"
#include "textio.hpp"

using namespace agewatch;

namespace {

thread_local std::string g_last_error;

aw_status status_from_errc(errc code) {
  switch (code) {
    case errc::missing_column: return AW_E_MISSING_COLUMN;
    case errc::non_monotonic_timestamps: return AW_E_NON_MONOTONIC_TIMESTAMPS;
    case errc::non_finite_value: return AW_E_NON_FINITE_VALUE;
    case errc::empty_file: return AW_E_EMPTY_FILE;
    case errc::non_uniform_interval: return AW_E_NON_UNIFORM_INTERVAL;
    case errc::warmup_consumes_everything: return AW_E_WARMUP_CONSUMES_EVERYTHING;
    case errc::series_too_short: return AW_E_SERIES_TOO_SHORT;
    case errc::invalid_period: return AW_E_INVALID_PERIOD;
    case errc::invalid_span: return AW_E_INVALID_SPAN;
    case errc::window_too_short: return AW_E_WINDOW_TOO_SHORT;
    case errc::series_shorter_than_window: return AW_E_SERIES_SHORTER_THAN_WINDOW;
    case errc::empty_training_set: return AW_E_EMPTY_TRAINING_SET;
    case errc::feature_width_mismatch: return AW_E_FEATURE_WIDTH_MISMATCH;
    case errc::too_few_rows: return AW_E_TOO_FEW_ROWS;
    case errc::length_mismatch: return AW_E_LENGTH_MISMATCH;
    case errc::value_out_of_range: return AW_E_VALUE_OUT_OF_RANGE;
    case errc::index_out_of_range: return AW_E_INDEX_OUT_OF_RANGE;
    case errc::invalid_spec: return AW_E_INVALID_SPEC;
    case errc::source_exhausted: return AW_E_SOURCE_EXHAUSTED;
    case errc::io_error: return AW_E_IO;
    case errc::parse_error: return AW_E_PARSE;
    case errc::invalid_argument: return AW_E_INVALID_ARGUMENT;
  }
  return AW_E_INTERNAL;
}

// Runs fn, translating any exception into a status + thread-local message.
template <typename Fn>
aw_status guarded(Fn&& fn) {
  try {
    fn();
    return AW_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_from_errc(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return AW_E_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return AW_E_INTERNAL;
  }
}

aw_status require(bool cond, const char* message) {
  if (!cond) {
    g_last_error = message;
    return AW_E_INVALID_ARGUMENT;
  }
  return AW_OK;
}

StlConfig stl_config_from(const aw_label_params& p) {
  StlConfig cfg;
  cfg.seasonal_span = p.stl_seasonal_span;
  cfg.trend_span = p.stl_trend_span;
  cfg.lowpass_span = p.stl_lowpass_span;
  cfg.inner_iterations = p.stl_inner_iterations;
  cfg.outer_iterations = p.stl_outer_iterations;
  return cfg;
}

}  // namespace

struct aw_ddm {
  Ddm impl;
};
struct aw_adwin {
  Adwin impl;
};
struct aw_model {
  ForestModel impl;
};

extern "C" {

const char* aw_status_name(aw_status status) {
  switch (status) {
    case AW_OK: return "Ok";
    case AW_E_MISSING_COLUMN: return "MissingColumn";
    case AW_E_NON_MONOTONIC_TIMESTAMPS: return "NonMonotonicTimestamps";
    case AW_E_NON_FINITE_VALUE: return "NonFiniteValue";
    case AW_E_EMPTY_FILE: return "EmptyFile";
    case AW_E_NON_UNIFORM_INTERVAL: return "NonUniformInterval";
    case AW_E_WARMUP_CONSUMES_EVERYTHING: return "WarmupConsumesEverything";
    case AW_E_SERIES_TOO_SHORT: return "SeriesTooShort";
    case AW_E_INVALID_PERIOD: return "InvalidPeriod";
    case AW_E_INVALID_SPAN: return "InvalidSpan";
    case AW_E_WINDOW_TOO_SHORT: return "WindowTooShort";
    case AW_E_SERIES_SHORTER_THAN_WINDOW: return "SeriesShorterThanWindow";
    case AW_E_EMPTY_TRAINING_SET: return "EmptyTrainingSet";
    case AW_E_FEATURE_WIDTH_MISMATCH: return "FeatureWidthMismatch";
    case AW_E_TOO_FEW_ROWS: return "TooFewRows";
    case AW_E_LENGTH_MISMATCH: return "LengthMismatch";
    case AW_E_VALUE_OUT_OF_RANGE: return "ValueOutOfRange";
    case AW_E_INDEX_OUT_OF_RANGE: return "IndexOutOfRange";
    case AW_E_INVALID_SPEC: return "InvalidSpec";
    case AW_E_SOURCE_EXHAUSTED: return "SourceExhausted";
    case AW_E_IO: return "IoError";
    case AW_E_PARSE: return "ParseError";
    case AW_E_INVALID_ARGUMENT: return "InvalidArgument";
    case AW_E_INTERNAL: return "InternalError";
  }
  return "Unknown";
}

const char* aw_last_error(void) { return g_last_error.c_str(); }

const char* aw_version(void) { return "0.1.0"; }

void aw_string_free(char* s) { delete[] s; }

/* ---------- detectors ---------- */

aw_ddm* aw_ddm_new(int min_num_instances) {
  aw_ddm* handle = nullptr;
  aw_status st = guarded([&] { handle = new aw_ddm{Ddm(min_num_instances)}; });
  return st == AW_OK ? handle : nullptr;
}

aw_status aw_ddm_update(aw_ddm* d, int error, int* phase_out) {
  if (aw_status st = require(d && phase_out, "null argument"); st != AW_OK) return st;
  return guarded([&] { *phase_out = static_cast<int>(d->impl.update(error)); });
}

aw_status aw_ddm_reset(aw_ddm* d) {
  if (aw_status st = require(d != nullptr, "null handle"); st != AW_OK) return st;
  return guarded([&] { d->impl.reset(); });
}

void aw_ddm_free(aw_ddm* d) { delete d; }

aw_adwin* aw_adwin_new(double delta, int max_buckets_per_level) {
  aw_adwin* handle = nullptr;
  aw_status st = guarded([&] { handle = new aw_adwin{Adwin(delta, max_buckets_per_level)}; });
  return st == AW_OK ? handle : nullptr;
}

aw_status aw_adwin_update(aw_adwin* a, double value, int* change_out) {
  if (aw_status st = require(a && change_out, "null argument"); st != AW_OK) return st;
  return guarded([&] { *change_out = a->impl.update(value) ? 1 : 0; });
}

aw_status aw_adwin_width(const aw_adwin* a, uint64_t* out) {
  if (aw_status st = require(a && out, "null argument"); st != AW_OK) return st;
  *out = a->impl.width();
  return AW_OK;
}

aw_status aw_adwin_mean(const aw_adwin* a, double* out) {
  if (aw_status st = require(a && out, "null argument"); st != AW_OK) return st;
  *out = a->impl.mean();
  return AW_OK;
}

aw_status aw_adwin_reset(aw_adwin* a) {
  if (aw_status st = require(a != nullptr, "null handle"); st != AW_OK) return st;
  a->impl.reset();
  return AW_OK;
}

void aw_adwin_free(aw_adwin* a) { delete a; }

/* ---------- models ---------- */

aw_model* aw_model_load(const char* path, size_t expected_width) {
  aw_model* handle = nullptr;
  aw_status st = guarded([&] {
    if (!path) throw Error(errc::invalid_argument, "null path");
    handle = new aw_model{load_model(path, expected_width)};
  });
  return st == AW_OK ? handle : nullptr;
}

aw_status aw_model_predict(const aw_model* m, const double* features, size_t width,
                           int* prediction_out) {
  if (aw_status st = require(m && features && prediction_out, "null argument"); st != AW_OK) {
    return st;
  }
  return guarded([&] {
    std::vector<double> row(features, features + width);
    *prediction_out = predict(m->impl, row);
  });
}

void aw_model_free(aw_model* m) { delete m; }

/* ---------- pipeline operations ---------- */

void aw_label_params_init(aw_label_params* p) {
  if (!p) return;
  StlConfig stl;
  LabelingConfig lab;
  p->period = 720;
  p->window_size = lab.window_size;
  p->stride = lab.stride;
  p->slope_threshold = lab.slope_threshold;
  p->warmup_seconds = lab.warmup_seconds;
  p->stl_seasonal_span = stl.seasonal_span;
  p->stl_trend_span = stl.trend_span;
  p->stl_lowpass_span = stl.lowpass_span;
  p->stl_inner_iterations = stl.inner_iterations;
  p->stl_outer_iterations = stl.outer_iterations;
}

aw_status aw_label_run(const aw_label_params* p, const char* input_csv,
                       const char* labeled_csv_out, const char* components_csv_out) {
  if (aw_status st = require(p && input_csv && labeled_csv_out, "null argument");
      st != AW_OK) {
    return st;
  }
  return guarded([&] {
    MemorySeries series = load_csv(input_csv);
    LabelingConfig lab;
    lab.window_size = p->window_size;
    lab.stride = p->stride;
    lab.slope_threshold = p->slope_threshold;
    lab.warmup_seconds = p->warmup_seconds;
    LabeledSeries labeled = label_pipeline(series, p->period, stl_config_from(*p), lab);
    write_labeled_csv(labeled, labeled_csv_out, true);
    if (components_csv_out) {
      auto [warmup, body] = remove_warmup(series, lab.warmup_seconds);
      auto d = stl_decompose(body.memory_values(), p->period, stl_config_from(*p));
      write_components_csv(d, components_csv_out);
    }
  });
}

void aw_train_params_init(aw_train_params* p) {
  if (!p) return;
  ForestConfig cfg;
  p->n_trees = cfg.n_trees;
  p->max_depth = cfg.max_depth;
  p->min_samples_leaf = cfg.min_samples_leaf;
  p->feature_window = 12;
  p->kfold_k = 5;
  p->seed = 0;
}

aw_status aw_train_run(const aw_train_params* p, const char* labeled_csv,
                       const char* model_out, const char* report_json_out) {
  if (aw_status st = require(p && labeled_csv && model_out, "null argument"); st != AW_OK) {
    return st;
  }
  return guarded([&] {
    LabeledSeries labeled = load_labeled_csv(labeled_csv);
    auto rows = extract_features(labeled, static_cast<std::size_t>(p->feature_window));
    bool has0 = false, has1 = false;
    for (const auto& row : rows) (row.label ? has1 : has0) = true;
    if (!has0 || !has1) {
      throw Error(errc::invalid_argument,
                  "training input holds a single class; a usable model needs both");
    }
    ForestConfig cfg;
    cfg.n_trees = p->n_trees;
    cfg.max_depth = p->max_depth;
    cfg.min_samples_leaf = p->min_samples_leaf;
    cfg.rng_seed = p->seed;
    ForestModel model = train(rows, cfg);
    save_model(model, model_out);
    if (report_json_out) {
      KfoldResult kfold = kfold_evaluate(rows, cfg, p->kfold_k);
      nlohmann::json config = {
          {"forest", forest_config_to_json(cfg)},
          {"feature_window", p->feature_window},
          {"kfold_k", p->kfold_k},
          {"seed", p->seed},
          {"input", labeled_csv},
      };
      write_report(make_kfold_report(kfold, labeled.series.profile, config),
                   report_json_out);
    }
  });
}

void aw_simulate_params_init(aw_simulate_params* p) {
  if (!p) return;
  p->seed = 0;
  p->has_seed = 0;
}

aw_status aw_simulate_run(const aw_simulate_params* p, const char* spec_file,
                          const char* out_csv) {
  if (aw_status st = require(p && spec_file && out_csv, "null argument"); st != AW_OK) {
    return st;
  }
  return guarded([&] {
    ShiftSpec spec = load_shift_spec(spec_file);
    if (p->has_seed) spec.seed = p->seed;
    LabeledSeries stream = build_scenario(spec);
    write_labeled_csv(stream, out_csv, false);
  });
}

void aw_run_params_init(aw_run_params* p) {
  if (!p) return;
  HarnessConfig hc;
  ForestConfig fc;
  p->mode = "static";
  p->retrain_window = hc.retrain_window;
  p->feature_window = 12;
  p->n_trees = fc.n_trees;
  p->max_depth = fc.max_depth;
  p->min_samples_leaf = fc.min_samples_leaf;
  p->ddm_min_instances = hc.ddm_min_instances;
  p->adwin_delta = hc.adwin_delta;
  p->adwin_max_buckets = hc.adwin_max_buckets;
  p->seed = 0;
}

aw_status aw_run_prequential(const aw_run_params* p, const char* scenario_csv,
                             const char* model_file, const char* report_json_out,
                             const char* events_csv_out, const char* plot_csv_out,
                             const char* svg_out) {
  if (aw_status st =
          require(p && p->mode && scenario_csv && model_file && report_json_out,
                  "null argument");
      st != AW_OK) {
    return st;
  }
  return guarded([&] {
    LabeledSeries stream_series = load_labeled_csv(scenario_csv);
    auto stream = extract_features(stream_series, static_cast<std::size_t>(p->feature_window));
    ForestModel model = load_model(model_file, kFeatureWidth);

    HarnessConfig hc;
    hc.mode = mode_from_name(p->mode);
    hc.retrain_window = p->retrain_window;
    hc.forest.n_trees = p->n_trees;
    hc.forest.max_depth = p->max_depth;
    hc.forest.min_samples_leaf = p->min_samples_leaf;
    hc.ddm_min_instances = p->ddm_min_instances;
    hc.adwin_delta = p->adwin_delta;
    hc.adwin_max_buckets = p->adwin_max_buckets;
    hc.base_seed = p->seed;

    PrequentialResult run = run_prequential(stream, model, hc);
    run.report.scenario = stream_series.series.profile;
    run.report.config = {
        {"harness", harness_config_to_json(hc)},
        {"feature_window", p->feature_window},
        {"scenario_csv", scenario_csv},
        {"model_file", model_file},
    };
    write_report(run.report, report_json_out);
    if (events_csv_out) write_file(events_csv_out, events_to_csv(run.event_log));
    if (plot_csv_out) write_file(plot_csv_out, plot_to_csv(run.plot));
    if (svg_out) write_file(svg_out, render_svg(run.plot, run.report.events));
  });
}

void aw_matrix_params_init(aw_matrix_params* p) {
  if (!p) return;
  p->seed = 0;
  p->has_seed = 0;
}

aw_status aw_run_matrix(const aw_matrix_params* p, const char* config_file,
                        const char* out_dir) {
  if (aw_status st = require(p && out_dir, "null argument"); st != AW_OK) return st;
  return guarded([&] {
    MatrixConfig cfg =
        config_file ? load_matrix_config(config_file) : default_matrix_config();
    if (p->has_seed) cfg.seed = p->seed;
    MatrixResult result = run_matrix(cfg);
    write_matrix_outputs(result, out_dir);
  });
}

/* ---------- report rendering ---------- */

aw_status aw_report_summary(const char* report_json_path, char** out_text) {
  if (aw_status st = require(report_json_path && out_text, "null argument"); st != AW_OK) {
    return st;
  }
  return guarded([&] {
    std::string text = summarize_report(read_file(report_json_path));
    char* buf = new char[text.size() + 1];
    std::memcpy(buf, text.c_str(), text.size() + 1);
    *out_text = buf;
  });
}

aw_status aw_report_chart(const char* plot_csv_path, const char* report_json_path,
                          const char* out_svg) {
  if (aw_status st = require(plot_csv_path && out_svg, "null argument"); st != AW_OK) {
    return st;
  }
  return guarded([&] {
    auto rows = plot_from_csv(read_file(plot_csv_path));
    std::vector<RetrainEvent> events;
    if (report_json_path) {
      events = report_from_json(read_file(report_json_path)).events;
    }
    write_file(out_svg, render_svg(rows, events));
  });
}

} /* extern "C" */
