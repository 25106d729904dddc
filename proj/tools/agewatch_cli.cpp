// Command-line front end; everything goes through the public C API.

#include <cstdint>
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "agewatch.h"

namespace {

int fail(aw_status st) {
  std::fprintf(stderr, "error: %s: %s\n", aw_status_name(st), aw_last_error());
  return static_cast<int>(st);
}

void add_seed_option(CLI::App* cmd, std::uint64_t& seed, bool& has_seed) {
  cmd->add_option_function<std::uint64_t>(
         "--seed",
         [&seed, &has_seed](const std::uint64_t& v) {
           seed = v;
           has_seed = true;
         },
         "RNG seed (alternatively via AGEWATCH_SEED)")
      ->envname("AGEWATCH_SEED");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"agewatch: software-aging detection under workload shift"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(aw_version()));

  // ---- label ----
  auto* label = app.add_subcommand(
      "label", "Label a raw memory CSV by trend analysis (warm-up excluded)");
  std::string label_input, label_output, label_components;
  aw_label_params lp;
  aw_label_params_init(&lp);
  label->add_option("--input,-i", label_input, "input CSV (elapsed_seconds,memory_used)")
      ->required();
  label->add_option("--output,-o", label_output, "labeled CSV to write")->required();
  label->add_option("--components", label_components,
                    "also dump trend/seasonal/residual CSV here");
  label->add_option("--period", lp.period, "seasonal period in samples")
      ->required()
      ->check(CLI::PositiveNumber);
  label->add_option("--window", lp.window_size, "trend window in samples");
  label->add_option("--stride", lp.stride, "window stride");
  label->add_option("--threshold", lp.slope_threshold, "slope threshold, units per sample");
  label->add_option("--warmup-seconds", lp.warmup_seconds, "warm-up span to label 0");
  label->add_option("--seasonal-span", lp.stl_seasonal_span, "seasonal smoother span, cycles");
  label->add_option("--trend-span", lp.stl_trend_span, "trend smoother span (0 = derived)");
  label->add_option("--lowpass-span", lp.stl_lowpass_span, "low-pass span (0 = derived)");
  label->add_option("--inner", lp.stl_inner_iterations, "inner iterations");
  label->add_option("--outer", lp.stl_outer_iterations, "robustness iterations");

  // ---- train ----
  auto* train = app.add_subcommand("train", "Train the forest on a labeled CSV");
  std::string train_input, train_model, train_report;
  aw_train_params tp;
  aw_train_params_init(&tp);
  bool train_has_seed = false;
  train->add_option("--input,-i", train_input, "labeled CSV")->required();
  train->add_option("--model-out,-m", train_model, "model JSON to write")->required();
  train->add_option("--report", train_report, "cross-validation report JSON to write");
  train->add_option("--trees", tp.n_trees, "number of trees");
  train->add_option("--max-depth", tp.max_depth, "maximum tree depth");
  train->add_option("--min-samples-leaf", tp.min_samples_leaf, "minimum samples per leaf");
  train->add_option("--feature-window", tp.feature_window, "feature window in samples");
  train->add_option("--kfold", tp.kfold_k, "number of cross-validation folds");
  add_seed_option(train, tp.seed, train_has_seed);

  // ---- simulate ----
  auto* simulate = app.add_subcommand("simulate", "Generate a workload-shift scenario CSV");
  std::string sim_spec, sim_output;
  aw_simulate_params sp;
  aw_simulate_params_init(&sp);
  bool sim_has_seed = false;
  simulate->add_option("--spec,-s", sim_spec, "scenario spec file (key = value)")->required();
  simulate->add_option("--output,-o", sim_output, "scenario CSV to write")->required();
  add_seed_option(simulate, sp.seed, sim_has_seed);

  // ---- run ----
  auto* run = app.add_subcommand("run", "Prequential evaluation of a model on a scenario");
  std::string run_scenario, run_model, run_report, run_events, run_plot, run_svg;
  std::string run_mode = "static";
  aw_run_params rp;
  aw_run_params_init(&rp);
  bool run_has_seed = false;
  run->add_option("--scenario", run_scenario, "scenario CSV with labels")->required();
  run->add_option("--model", run_model, "model JSON")->required();
  run->add_option("--mode", run_mode, "static | ddm | adwin")
      ->check(CLI::IsMember({"static", "ddm", "adwin"}));
  run->add_option("--report", run_report, "report JSON to write")->required();
  run->add_option("--events", run_events, "detector event CSV to write");
  run->add_option("--plot", run_plot, "plot data CSV to write");
  run->add_option("--svg", run_svg, "chart SVG to write");
  run->add_option("--retrain-window", rp.retrain_window, "retraining buffer size");
  run->add_option("--feature-window", rp.feature_window, "feature window in samples");
  run->add_option("--trees", rp.n_trees, "trees per retrained forest");
  run->add_option("--max-depth", rp.max_depth, "maximum tree depth");
  run->add_option("--min-samples-leaf", rp.min_samples_leaf, "minimum samples per leaf");
  run->add_option("--ddm-min-instances", rp.ddm_min_instances, "DDM warm-up instances");
  run->add_option("--adwin-delta", rp.adwin_delta, "ADWIN confidence parameter");
  run->add_option("--adwin-max-buckets", rp.adwin_max_buckets, "ADWIN buckets per level");
  add_seed_option(run, rp.seed, run_has_seed);

  // ---- matrix ----
  auto* matrix = app.add_subcommand(
      "matrix", "Run every scenario under every mode and write the comparison table");
  std::string matrix_config, matrix_out = "matrix_out";
  aw_matrix_params mp;
  aw_matrix_params_init(&mp);
  bool matrix_has_seed = false;
  matrix->add_option("--config", matrix_config, "matrix config file (defaults built in)");
  matrix->add_option("--out-dir", matrix_out, "output directory");
  add_seed_option(matrix, mp.seed, matrix_has_seed);

  // ---- report ----
  auto* report = app.add_subcommand("report", "Summarize a report and optionally chart it");
  std::string report_json, report_plot, report_svg;
  report->add_option("--report", report_json, "report JSON to summarize")->required();
  report->add_option("--plot", report_plot, "plot CSV for charting");
  report->add_option("--svg", report_svg, "chart SVG to write (needs --plot)");

  CLI11_PARSE(app, argc, argv);

  if (label->parsed()) {
    aw_status st = aw_label_run(&lp, label_input.c_str(), label_output.c_str(),
                                label_components.empty() ? nullptr : label_components.c_str());
    return st == AW_OK ? 0 : fail(st);
  }
  if (train->parsed()) {
    aw_status st = aw_train_run(&tp, train_input.c_str(), train_model.c_str(),
                                train_report.empty() ? nullptr : train_report.c_str());
    return st == AW_OK ? 0 : fail(st);
  }
  if (simulate->parsed()) {
    sp.has_seed = sim_has_seed ? 1 : 0;
    aw_status st = aw_simulate_run(&sp, sim_spec.c_str(), sim_output.c_str());
    return st == AW_OK ? 0 : fail(st);
  }
  if (run->parsed()) {
    rp.mode = run_mode.c_str();
    aw_status st = aw_run_prequential(&rp, run_scenario.c_str(), run_model.c_str(),
                                      run_report.c_str(),
                                      run_events.empty() ? nullptr : run_events.c_str(),
                                      run_plot.empty() ? nullptr : run_plot.c_str(),
                                      run_svg.empty() ? nullptr : run_svg.c_str());
    return st == AW_OK ? 0 : fail(st);
  }
  if (matrix->parsed()) {
    mp.has_seed = matrix_has_seed ? 1 : 0;
    aw_status st = aw_run_matrix(&mp, matrix_config.empty() ? nullptr : matrix_config.c_str(),
                                 matrix_out.c_str());
    return st == AW_OK ? 0 : fail(st);
  }
  if (report->parsed()) {
    char* text = nullptr;
    aw_status st = aw_report_summary(report_json.c_str(), &text);
    if (st != AW_OK) return fail(st);
    std::fputs(text, stdout);
    aw_string_free(text);
    if (!report_svg.empty()) {
      if (report_plot.empty()) {
        std::fprintf(stderr, "error: --svg needs --plot\n");
        return static_cast<int>(AW_E_INVALID_ARGUMENT);
      }
      st = aw_report_chart(report_plot.c_str(), report_json.c_str(), report_svg.c_str());
      if (st != AW_OK) return fail(st);
    }
    return 0;
  }
  return 0;
}
