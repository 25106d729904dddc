#include "harness.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <filesystem>

#include "rng.hpp"
#include "textio.hpp"

namespace agewatch {

namespace {

constexpr std::uint64_t kRetrainTag = 0x7e7ea12fULL;
constexpr std::uint64_t kTrainProfileTag = 0x0ff11e5eedULL;
constexpr std::uint64_t kInitialForestTag = 0xf0e57ULL;

SegmentStat close_segment(std::size_t begin, std::size_t end, int version,
                          const std::vector<int>& preds, const std::vector<int>& truths) {
  SegmentStat s;
  s.begin = begin;
  s.end = end;
  s.model_version = version;
  for (std::size_t i = begin; i < end; ++i) s.cm.add(preds[i], truths[i]);
  s.metrics = derive(s.cm);
  return s;
}

}  // namespace

const char* mode_name(Mode m) {
  switch (m) {
    case Mode::Static: return "static";
    case Mode::AdaptiveDDM: return "ddm";
    case Mode::AdaptiveADWIN: return "adwin";
  }
  return "static";
}

Mode mode_from_name(const std::string& name) {
  if (name == "static") return Mode::Static;
  if (name == "ddm") return Mode::AdaptiveDDM;
  if (name == "adwin") return Mode::AdaptiveADWIN;
  throw Error(errc::invalid_argument, "unknown mode '" + name + "'");
}

PrequentialResult run_prequential(const std::vector<FeatureRow>& stream,
                                  const ForestModel& initial_model,
                                  const HarnessConfig& cfg) {
  if (cfg.retrain_window < 2) {
    throw Error(errc::invalid_argument, "retrain_window must be >= 2");
  }
  for (const auto& row : stream) {
    if (row.features.size() != initial_model.n_features) {
      throw Error(errc::feature_width_mismatch, "stream width does not match the model");
    }
  }

  Ddm ddm(cfg.ddm_min_instances);
  Adwin adwin(cfg.adwin_delta, cfg.adwin_max_buckets);

  PrequentialResult out;
  out.report.kind = "prequential";
  out.report.mode = mode_name(cfg.mode);
  out.report.n_instances = stream.size();

  const ForestModel* model = &initial_model;
  ForestModel retrained;  // storage for the active retrained model
  int version = 0;
  std::size_t segment_begin = 0;
  std::deque<const FeatureRow*> buffer;

  std::vector<int> preds, truths;
  preds.reserve(stream.size());
  truths.reserve(stream.size());
  std::string prev_phase = "InControl";

  for (std::size_t i = 0; i < stream.size(); ++i) {
    int pred = predict(*model, stream[i].features);
    preds.push_back(pred);
    truths.push_back(stream[i].label);
    out.plot.push_back(
        {i, stream[i].features[0], stream[i].label, pred, version});

    buffer.push_back(&stream[i]);
    if (buffer.size() > cfg.retrain_window) buffer.pop_front();

    if (cfg.mode == Mode::Static) continue;

    int err = pred != stream[i].label ? 1 : 0;
    std::string phase;
    bool signal = false;
    if (cfg.mode == Mode::AdaptiveDDM) {
      DetectorPhase p = ddm.update(err);
      phase = phase_name(p);
      signal = p == DetectorPhase::Drift;
    } else {
      bool changed = adwin.update(static_cast<double>(err));
      phase = changed ? "Change" : "InControl";
      signal = changed;
    }
    if (phase != prev_phase && phase != "InControl") {
      out.event_log.push_back({i, mode_name(cfg.mode), phase});
    }
    prev_phase = phase;

    if (!signal) continue;

    RetrainEvent event;
    event.step = i;
    event.trigger = phase;
    for (const FeatureRow* r : buffer) {
      (r->label == 1 ? event.window_count1 : event.window_count0) += 1;
    }
    if (event.window_count0 > 0 && event.window_count1 > 0) {
      std::vector<FeatureRow> window_rows;
      window_rows.reserve(buffer.size());
      for (const FeatureRow* r : buffer) window_rows.push_back(*r);
      ForestConfig fc = cfg.forest;
      fc.rng_seed = mix_seed(cfg.base_seed ^ kRetrainTag, out.report.events.size());
      retrained = train(window_rows, fc);
      model = &retrained;
      event.action = "Retrained";
      out.report.segments.push_back(
          close_segment(segment_begin, i + 1, version, preds, truths));
      segment_begin = i + 1;
      version += 1;
    } else {
      event.action = "SkippedSingleClass";
    }
    out.report.events.push_back(std::move(event));
    if (cfg.mode == Mode::AdaptiveDDM) ddm.reset(); else adwin.reset();
    prev_phase = "InControl";
  }

  if (segment_begin < stream.size() || out.report.segments.empty()) {
    out.report.segments.push_back(
        close_segment(segment_begin, stream.size(), version, preds, truths));
  }
  out.report.cm = score(preds, truths);
  out.report.metrics = derive(out.report.cm);
  return out;
}

nlohmann::json forest_config_to_json(const ForestConfig& cfg) {
  const char* subset = cfg.features_per_split == FeatureSubset::All
                           ? "all"
                           : cfg.features_per_split == FeatureSubset::Fixed ? "fixed" : "sqrt";
  return {
      {"n_trees", cfg.n_trees},
      {"max_depth", cfg.max_depth},
      {"min_samples_leaf", cfg.min_samples_leaf},
      {"features_per_split", subset},
      {"fixed_features", cfg.fixed_features},
      {"rng_seed", cfg.rng_seed},
  };
}

nlohmann::json harness_config_to_json(const HarnessConfig& cfg) {
  return {
      {"mode", mode_name(cfg.mode)},
      {"retrain_window", cfg.retrain_window},
      {"forest", forest_config_to_json(cfg.forest)},
      {"ddm_min_instances", cfg.ddm_min_instances},
      {"adwin_delta", cfg.adwin_delta},
      {"adwin_max_buckets", cfg.adwin_max_buckets},
      {"base_seed", cfg.base_seed},
  };
}

MatrixConfig default_matrix_config() {
  MatrixConfig cfg;
  cfg.scenarios = builtin_scenario_names();
  cfg.modes = {Mode::Static, Mode::AdaptiveDDM, Mode::AdaptiveADWIN};
  return cfg;
}

MatrixConfig parse_matrix_config(const std::string& text) {
  MatrixConfig cfg;
  for (auto raw : split_lines(text)) {
    auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(errc::invalid_spec, "expected key = value, got '" + std::string(line) + "'");
    }
    std::string key(trim(line.substr(0, eq)));
    std::string value(trim(line.substr(eq + 1)));
    std::int64_t num = 0;
    auto need_count = [&](const char* what) {
      if (!parse_int(value, num) || num < 0) {
        throw Error(errc::invalid_spec, std::string("bad ") + what + " '" + value + "'");
      }
    };
    if (key == "scenario") {
      cfg.scenarios.push_back(value);
    } else if (key == "mode") {
      cfg.modes.push_back(mode_from_name(value));
    } else if (key == "seed") {
      need_count("seed");
      cfg.seed = static_cast<std::uint64_t>(num);
    } else if (key == "retrain_window") {
      need_count("retrain_window");
      cfg.retrain_window = static_cast<std::size_t>(num);
    } else if (key == "feature_window") {
      need_count("feature_window");
      cfg.feature_window = static_cast<std::size_t>(num);
    } else if (key == "trees") {
      need_count("trees");
      cfg.forest.n_trees = static_cast<int>(num);
    } else if (key == "max_depth") {
      need_count("max_depth");
      cfg.forest.max_depth = static_cast<int>(num);
    } else if (key == "min_samples_leaf") {
      need_count("min_samples_leaf");
      cfg.forest.min_samples_leaf = static_cast<int>(num);
    } else if (key == "kfold_k") {
      need_count("kfold_k");
      cfg.kfold_k = static_cast<int>(num);
    } else if (key == "train_profile") {
      cfg.train_profile = value;
    } else {
      throw Error(errc::invalid_spec, "unknown key '" + key + "'");
    }
  }
  if (cfg.scenarios.empty()) cfg.scenarios = builtin_scenario_names();
  if (cfg.modes.empty()) cfg.modes = {Mode::Static, Mode::AdaptiveDDM, Mode::AdaptiveADWIN};
  return cfg;
}

MatrixConfig load_matrix_config(const std::string& path) {
  return parse_matrix_config(read_file(path));
}

namespace {

bool looks_like_path(const std::string& s) {
  return s.find('/') != std::string::npos || s.find('.') != std::string::npos;
}

std::string run_label(const std::string& scenario, Mode mode) {
  std::string stem = scenario;
  if (looks_like_path(scenario)) {
    stem = std::filesystem::path(scenario).stem().string();
  }
  for (char& c : stem) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) c = '_';
  }
  return stem + "_" + mode_name(mode);
}

}  // namespace

MatrixResult run_matrix(const MatrixConfig& cfg) {
  ProfileSpec train_spec = preset_by_name(cfg.train_profile);
  train_spec.rng_seed = mix_seed(cfg.seed, kTrainProfileTag);
  LabeledSeries train_series = generate_profile(train_spec);
  auto train_rows = extract_features(train_series, cfg.feature_window);

  ForestConfig forest_cfg = cfg.forest;
  forest_cfg.rng_seed = mix_seed(cfg.seed, kInitialForestTag);
  ForestModel initial_model = train(train_rows, forest_cfg);

  nlohmann::json shared_config = {
      {"seed", cfg.seed},
      {"retrain_window", cfg.retrain_window},
      {"feature_window", cfg.feature_window},
      {"forest", forest_config_to_json(forest_cfg)},
      {"train_profile", cfg.train_profile},
      {"kfold_k", cfg.kfold_k},
  };

  MatrixResult result;
  KfoldResult kfold = kfold_evaluate(train_rows, forest_cfg, cfg.kfold_k);
  result.kfold_reference =
      make_kfold_report(kfold, cfg.train_profile + "_profile", shared_config);

  for (std::size_t si = 0; si < cfg.scenarios.size(); ++si) {
    const std::string& name = cfg.scenarios[si];
    ShiftSpec spec = looks_like_path(name) ? load_shift_spec(name)
                                           : builtin_scenario(name, cfg.seed);
    LabeledSeries stream_series = build_scenario(spec);
    auto stream = extract_features(stream_series, cfg.feature_window);

    for (std::size_t mi = 0; mi < cfg.modes.size(); ++mi) {
      HarnessConfig hc;
      hc.mode = cfg.modes[mi];
      hc.retrain_window = cfg.retrain_window;
      hc.forest = cfg.forest;
      hc.base_seed = mix_seed(mix_seed(cfg.seed, si), mi);
      PrequentialResult run = run_prequential(stream, initial_model, hc);

      run.report.scenario = stream_series.series.profile;
      nlohmann::json config = shared_config;
      config["harness"] = harness_config_to_json(hc);
      config["scenario_source"] = name;
      run.report.config = std::move(config);

      result.labels.push_back(run_label(name, cfg.modes[mi]));
      result.reports.push_back(std::move(run.report));
      result.event_logs.push_back(std::move(run.event_log));
      result.plots.push_back(std::move(run.plot));
    }
  }
  return result;
}

void write_matrix_outputs(const MatrixResult& result, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  auto path = [&](const std::string& name) { return out_dir + "/" + name; };
  for (std::size_t i = 0; i < result.reports.size(); ++i) {
    write_report(result.reports[i], path("report_" + result.labels[i] + ".json"));
    write_file(path("events_" + result.labels[i] + ".csv"),
               events_to_csv(result.event_logs[i]));
    write_file(path("plot_" + result.labels[i] + ".csv"), plot_to_csv(result.plots[i]));
  }
  write_report(result.kfold_reference,
               path("report_kfold_" + result.kfold_reference.scenario + ".json"));
  std::vector<RunReport> all = result.reports;
  all.push_back(result.kfold_reference);
  write_file(path("aggregate.csv"), aggregate_csv(all));
}

}  // namespace agewatch
