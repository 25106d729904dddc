#include "report.hpp"

#include <algorithm>
#include <cmath>

#include "textio.hpp"

namespace agewatch {

nlohmann::json metrics_to_json(const Metrics& m) {
  nlohmann::json degenerate = nlohmann::json::array();
  if (m.accuracy_degenerate) degenerate.push_back("accuracy");
  if (m.precision_degenerate) degenerate.push_back("precision");
  if (m.recall_degenerate) degenerate.push_back("recall");
  if (m.f1_degenerate) degenerate.push_back("f1");
  return {
      {"accuracy", m.accuracy}, {"precision", m.precision}, {"recall", m.recall},
      {"f1", m.f1},             {"degenerate", degenerate},
  };
}

nlohmann::json confusion_to_json(const ConfusionMatrix& cm) {
  return {{"tp", cm.tp}, {"fp", cm.fp}, {"tn", cm.tn}, {"fn", cm.fn}};
}

static Metrics metrics_from_json(const nlohmann::json& j) {
  Metrics m;
  m.accuracy = j.at("accuracy").get<double>();
  m.precision = j.at("precision").get<double>();
  m.recall = j.at("recall").get<double>();
  m.f1 = j.at("f1").get<double>();
  for (const auto& d : j.at("degenerate")) {
    std::string name = d.get<std::string>();
    if (name == "accuracy") m.accuracy_degenerate = true;
    else if (name == "precision") m.precision_degenerate = true;
    else if (name == "recall") m.recall_degenerate = true;
    else if (name == "f1") m.f1_degenerate = true;
  }
  return m;
}

static ConfusionMatrix confusion_from_json(const nlohmann::json& j) {
  ConfusionMatrix cm;
  cm.tp = j.at("tp").get<std::uint64_t>();
  cm.fp = j.at("fp").get<std::uint64_t>();
  cm.tn = j.at("tn").get<std::uint64_t>();
  cm.fn = j.at("fn").get<std::uint64_t>();
  return cm;
}

nlohmann::json report_to_json(const RunReport& report) {
  nlohmann::json events = nlohmann::json::array();
  for (const auto& e : report.events) {
    events.push_back({
        {"step", e.step},
        {"trigger", e.trigger},
        {"window_class_counts", {e.window_count0, e.window_count1}},
        {"action", e.action},
    });
  }
  nlohmann::json segments = nlohmann::json::array();
  for (const auto& s : report.segments) {
    segments.push_back({
        {"begin", s.begin},
        {"end", s.end},
        {"model_version", s.model_version},
        {"confusion", confusion_to_json(s.cm)},
        {"metrics", metrics_to_json(s.metrics)},
    });
  }
  return {
      {"format", "agewatch-report"},
      {"version", 1},
      {"kind", report.kind},
      {"mode", report.mode},
      {"scenario", report.scenario},
      {"config", report.config},
      {"n_instances", report.n_instances},
      {"confusion", confusion_to_json(report.cm)},
      {"metrics", metrics_to_json(report.metrics)},
      {"retrain_events", events},
      {"segments", segments},
  };
}

std::string report_to_string(const RunReport& report) {
  return report_to_json(report).dump(2) + "\n";
}

void write_report(const RunReport& report, const std::string& path) {
  write_file(path, report_to_string(report));
}

RunReport report_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(errc::parse_error, std::string("report JSON: ") + e.what());
  }
  try {
    if (j.value("format", "") != "agewatch-report" || j.value("version", -1) != 1) {
      throw Error(errc::parse_error, "not a version-1 agewatch-report file");
    }
    RunReport r;
    r.kind = j.at("kind").get<std::string>();
    r.mode = j.at("mode").get<std::string>();
    r.scenario = j.at("scenario").get<std::string>();
    r.config = j.at("config");
    r.n_instances = j.at("n_instances").get<std::size_t>();
    r.cm = confusion_from_json(j.at("confusion"));
    r.metrics = metrics_from_json(j.at("metrics"));
    for (const auto& je : j.at("retrain_events")) {
      RetrainEvent e;
      e.step = je.at("step").get<std::size_t>();
      e.trigger = je.at("trigger").get<std::string>();
      e.window_count0 = je.at("window_class_counts").at(0).get<std::uint64_t>();
      e.window_count1 = je.at("window_class_counts").at(1).get<std::uint64_t>();
      e.action = je.at("action").get<std::string>();
      r.events.push_back(std::move(e));
    }
    for (const auto& js : j.at("segments")) {
      SegmentStat s;
      s.begin = js.at("begin").get<std::size_t>();
      s.end = js.at("end").get<std::size_t>();
      s.model_version = js.at("model_version").get<int>();
      s.cm = confusion_from_json(js.at("confusion"));
      s.metrics = metrics_from_json(js.at("metrics"));
      r.segments.push_back(std::move(s));
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(errc::parse_error, std::string("report JSON: ") + e.what());
  }
}

RunReport make_kfold_report(const KfoldResult& result, const std::string& scenario,
                            nlohmann::json config) {
  RunReport r;
  r.kind = "kfold";
  r.mode = "kfold";
  r.scenario = scenario;
  r.config = std::move(config);
  r.cm = result.pooled;
  r.metrics = result.metrics;
  r.n_instances = result.pooled.total();
  std::size_t begin = 0;
  for (std::size_t f = 0; f < result.fold_sizes.size(); ++f) {
    SegmentStat s;
    s.begin = begin;
    s.end = begin + result.fold_sizes[f];
    begin = s.end;
    s.model_version = static_cast<int>(f);
    s.metrics = result.fold_metrics[f];
    r.segments.push_back(std::move(s));
  }
  return r;
}

std::string aggregate_csv(const std::vector<RunReport>& reports) {
  std::string out = "model,scenario,accuracy,precision,recall,f1\n";
  for (const auto& r : reports) {
    out += r.mode;
    out += ',';
    out += r.scenario;
    out += ',';
    out += format_double(r.metrics.accuracy);
    out += ',';
    out += format_double(r.metrics.precision);
    out += ',';
    out += format_double(r.metrics.recall);
    out += ',';
    out += format_double(r.metrics.f1);
    out += '\n';
  }
  return out;
}

std::string events_to_csv(const std::vector<EventLogRow>& rows) {
  std::string out = "step,detector,phase\n";
  for (const auto& r : rows) {
    out += format_int(static_cast<std::int64_t>(r.step));
    out += ',';
    out += r.detector;
    out += ',';
    out += r.phase;
    out += '\n';
  }
  return out;
}

std::string plot_to_csv(const std::vector<PlotRow>& rows) {
  std::string out = "step,memory,label,prediction,model_version\n";
  for (const auto& r : rows) {
    out += format_int(static_cast<std::int64_t>(r.step));
    out += ',';
    out += format_double(r.memory);
    out += ',';
    out += r.label ? '1' : '0';
    out += ',';
    out += r.prediction ? '1' : '0';
    out += ',';
    out += format_int(r.model_version);
    out += '\n';
  }
  return out;
}

std::vector<PlotRow> plot_from_csv(const std::string& text) {
  auto lines = split_lines(text);
  if (lines.empty() || trim(lines[0]) != "step,memory,label,prediction,model_version") {
    throw Error(errc::parse_error, "not a plot CSV");
  }
  std::vector<PlotRow> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    auto fields = split_csv_line(lines[i]);
    if (fields.size() != 5) {
      throw Error(errc::parse_error, "plot row " + std::to_string(i) + " malformed");
    }
    PlotRow r;
    std::int64_t step = 0, label = 0, pred = 0, version = 0;
    if (!parse_int(fields[0], step) || !parse_double(fields[1], r.memory) ||
        !parse_int(fields[2], label) || !parse_int(fields[3], pred) ||
        !parse_int(fields[4], version)) {
      throw Error(errc::parse_error, "plot row " + std::to_string(i) + " malformed");
    }
    r.step = static_cast<std::size_t>(step);
    r.label = static_cast<int>(label);
    r.prediction = static_cast<int>(pred);
    r.model_version = static_cast<int>(version);
    rows.push_back(r);
  }
  return rows;
}

namespace {

std::string svg_coord(double v) {
  // Two decimals keep the file small; rounding is stable for equal inputs.
  double r = std::round(v * 100.0) / 100.0;
  return format_double(r);
}

void append_band(std::string& svg, const std::vector<PlotRow>& rows, bool predicted,
                 double x_scale, double y0, double height, const char* color) {
  std::size_t i = 0;
  while (i < rows.size()) {
    int v = predicted ? rows[i].prediction : rows[i].label;
    if (!v) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < rows.size() && (predicted ? rows[j].prediction : rows[j].label)) ++j;
    svg += "<rect x=\"" + svg_coord(static_cast<double>(i) * x_scale) + "\" y=\"" +
           svg_coord(y0) + "\" width=\"" +
           svg_coord(static_cast<double>(j - i) * x_scale) + "\" height=\"" +
           svg_coord(height) + "\" fill=\"" + color + "\"/>\n";
    i = j;
  }
}

}  // namespace

std::string render_svg(const std::vector<PlotRow>& rows,
                       const std::vector<RetrainEvent>& events) {
  const double width = 1000.0, height = 320.0, plot_h = 260.0;
  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " +
                    svg_coord(width) + " " + svg_coord(height) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!rows.empty()) {
    double lo = rows[0].memory, hi = rows[0].memory;
    for (const auto& r : rows) {
      lo = std::min(lo, r.memory);
      hi = std::max(hi, r.memory);
    }
    if (hi <= lo) hi = lo + 1.0;
    double x_scale = width / static_cast<double>(rows.size());
    auto ypos = [&](double v) { return plot_h - (v - lo) / (hi - lo) * (plot_h - 10.0) - 5.0; };

    append_band(svg, rows, false, x_scale, 265.0, 25.0, "#f4c7c3");
    append_band(svg, rows, true, x_scale, 292.0, 25.0, "#c3d7f4");

    svg += "<polyline fill=\"none\" stroke=\"#333333\" stroke-width=\"1\" points=\"";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i) svg += ' ';
      svg += svg_coord(static_cast<double>(i) * x_scale) + "," + svg_coord(ypos(rows[i].memory));
    }
    svg += "\"/>\n";

    for (const auto& e : events) {
      double x = static_cast<double>(e.step) * x_scale;
      const char* color = e.action == "Retrained" ? "#2a7d2a" : "#b68a00";
      svg += "<line x1=\"" + svg_coord(x) + "\" y1=\"0\" x2=\"" + svg_coord(x) +
             "\" y2=\"" + svg_coord(plot_h) + "\" stroke=\"" + color +
             "\" stroke-width=\"1\" stroke-dasharray=\"4 3\"/>\n";
    }
  }
  svg += "</svg>\n";
  return svg;
}

std::string summarize_report(const std::string& report_json_text) {
  RunReport r = report_from_json(report_json_text);
  std::string out;
  out += r.kind + " run, mode " + r.mode + ", scenario " + r.scenario + "\n";
  out += "instances: " + format_int(static_cast<std::int64_t>(r.n_instances)) + "\n";
  out += "confusion: tp=" + format_int(static_cast<std::int64_t>(r.cm.tp)) +
         " fp=" + format_int(static_cast<std::int64_t>(r.cm.fp)) +
         " tn=" + format_int(static_cast<std::int64_t>(r.cm.tn)) +
         " fn=" + format_int(static_cast<std::int64_t>(r.cm.fn)) + "\n";
  out += "accuracy=" + format_double(r.metrics.accuracy) +
         " precision=" + format_double(r.metrics.precision) +
         " recall=" + format_double(r.metrics.recall) + " f1=" + format_double(r.metrics.f1) +
         "\n";
  out += "retrain events: " + format_int(static_cast<std::int64_t>(r.events.size())) + "\n";
  for (const auto& e : r.events) {
    out += "  step " + format_int(static_cast<std::int64_t>(e.step)) + " " + e.trigger + " -> " +
           e.action + " (window 0s=" + format_int(static_cast<std::int64_t>(e.window_count0)) +
           ", 1s=" + format_int(static_cast<std::int64_t>(e.window_count1)) + ")\n";
  }
  out += "segments:\n";
  for (const auto& s : r.segments) {
    out += "  [" + format_int(static_cast<std::int64_t>(s.begin)) + "," +
           format_int(static_cast<std::int64_t>(s.end)) + ") " +
           (r.kind == "kfold" ? "fold " : "model v") + format_int(s.model_version) +
           " f1=" + format_double(s.metrics.f1) + "\n";
  }
  return out;
}

}  // namespace agewatch
