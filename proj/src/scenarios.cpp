#include "scenarios.hpp"

#include <cmath>

#include "rng.hpp"
#include "textio.hpp"

namespace agewatch {

namespace {

constexpr double kPi = 3.14159265358979323846;

void validate_profile(const ProfileSpec& spec) {
  if (spec.total_samples < 1) throw Error(errc::invalid_spec, "total_samples must be >= 1");
  if (spec.seasonal_period < 1) throw Error(errc::invalid_spec, "seasonal_period must be >= 1");
  if (spec.total_samples < 2 * spec.seasonal_period) {
    throw Error(errc::invalid_spec, "total_samples must cover two seasonal periods");
  }
  if (spec.noise_std < 0.0) throw Error(errc::invalid_spec, "noise_std must be >= 0");
  if (spec.leak_rate < 0.0) throw Error(errc::invalid_spec, "leak_rate must be >= 0");
  if (spec.episode_length < 1) throw Error(errc::invalid_spec, "episode_length must be >= 1");
  if (spec.release_fraction < 0.0 || spec.release_fraction > 1.0) {
    throw Error(errc::invalid_spec, "release_fraction must lie in [0,1]");
  }
  if (spec.seasonal_amplitude < 0.0) {
    throw Error(errc::invalid_spec, "seasonal_amplitude must be >= 0");
  }
  if (!(spec.sampling_interval_seconds > 0.0)) {
    throw Error(errc::invalid_spec, "sampling_interval_seconds must be > 0");
  }
}

void check_composable(const LabeledSeries& a, const LabeledSeries& b) {
  if (a.series.sampling_interval_seconds != b.series.sampling_interval_seconds) {
    throw Error(errc::invalid_spec, "sources have different sampling intervals");
  }
  if (a.size() == 0 || b.size() == 0) {
    throw Error(errc::invalid_spec, "sources must be non-empty");
  }
}

LabeledSeries make_composed(const LabeledSeries& a, const LabeledSeries& b,
                            const std::string& kind) {
  LabeledSeries out;
  out.series.profile = kind + "(" + a.series.profile + "," + b.series.profile + ")";
  out.series.sampling_interval_seconds = a.series.sampling_interval_seconds;
  return out;
}

void push_sample(LabeledSeries& out, double memory, int label) {
  double t = static_cast<double>(out.size()) * out.series.sampling_interval_seconds;
  out.series.samples.push_back({t, memory});
  out.labels.push_back(label);
  out.provenance.push_back(Provenance::Default);
}

}  // namespace

ProfileSpec preset_low() {
  ProfileSpec s;
  s.name = "low";
  s.base_memory = 120.0;
  s.leak_rate = 0.2;
  s.episode_length = 1200;
  s.release_fraction = 1.0;
  s.seasonal_amplitude = 5.0;
  s.seasonal_period = 600;
  s.noise_std = 1.0;
  s.total_samples = 20000;
  return s;
}

ProfileSpec preset_medium() {
  ProfileSpec s;
  s.name = "medium";
  s.base_memory = 450.0;
  s.leak_rate = 0.7;
  s.episode_length = 900;
  s.release_fraction = 1.0;
  s.seasonal_amplitude = 5.0;
  s.seasonal_period = 160;
  s.noise_std = 1.0;
  s.total_samples = 20000;
  return s;
}

ProfileSpec preset_high() {
  ProfileSpec s;
  s.name = "high";
  s.base_memory = 900.0;
  s.leak_rate = 1.5;
  s.episode_length = 600;
  s.release_fraction = 1.0;
  s.seasonal_amplitude = 5.0;
  s.seasonal_period = 120;
  s.noise_std = 1.0;
  s.total_samples = 20000;
  return s;
}

ProfileSpec preset_by_name(const std::string& name) {
  if (name == "low") return preset_low();
  if (name == "medium") return preset_medium();
  if (name == "high") return preset_high();
  throw Error(errc::invalid_spec, "unknown profile preset '" + name + "'");
}

LabeledSeries generate_profile(const ProfileSpec& spec) {
  validate_profile(spec);

  std::size_t cycle = 2 * spec.episode_length;
  std::size_t release_len = std::max<std::size_t>(1, spec.episode_length / 4);
  double release_amount =
      spec.release_fraction * spec.leak_rate * static_cast<double>(spec.episode_length);
  double release_step = release_amount / static_cast<double>(release_len);

  auto rng = make_rng(spec.rng_seed);
  std::normal_distribution<double> noise(0.0, spec.noise_std);

  LabeledSeries out;
  out.series.profile = spec.name;
  out.series.sampling_interval_seconds = spec.sampling_interval_seconds;
  double level = spec.base_memory;
  for (std::size_t t = 0; t < spec.total_samples; ++t) {
    std::size_t pos = t % cycle;
    int label = 0;
    if (pos < spec.episode_length) {
      level += spec.leak_rate;
      label = spec.leak_rate > 0.0 ? 1 : 0;
    } else if (pos < spec.episode_length + release_len) {
      level -= release_step;
    }
    double value = level +
                   spec.seasonal_amplitude *
                       std::sin(2.0 * kPi * static_cast<double>(t) /
                                static_cast<double>(spec.seasonal_period)) +
                   (spec.noise_std > 0.0 ? noise(rng) : 0.0);
    out.series.samples.push_back(
        {static_cast<double>(t) * spec.sampling_interval_seconds, value});
    out.labels.push_back(label);
    out.provenance.push_back(Provenance::Default);
  }
  return out;
}

LabeledSeries compose_sudden(const LabeledSeries& a, const LabeledSeries& b,
                             std::size_t switch_index) {
  check_composable(a, b);
  if (switch_index > a.size() || switch_index > b.size()) {
    throw Error(errc::index_out_of_range,
                "switch_index " + std::to_string(switch_index) + " exceeds a source");
  }
  LabeledSeries out = make_composed(a, b, "sudden");
  for (std::size_t i = 0; i < switch_index; ++i) {
    push_sample(out, a.series.samples[i].memory_used, a.labels[i]);
  }
  double offset = 0.0;
  if (switch_index > 0 && switch_index < b.size()) {
    offset = a.series.samples[switch_index - 1].memory_used -
             b.series.samples[switch_index].memory_used;
  }
  for (std::size_t i = switch_index; i < b.size(); ++i) {
    push_sample(out, b.series.samples[i].memory_used + offset, b.labels[i]);
  }
  return out;
}

LabeledSeries compose_gradual(const LabeledSeries& a, const LabeledSeries& b,
                              std::size_t start, std::size_t transition_length,
                              std::uint64_t rng_seed) {
  check_composable(a, b);
  if (transition_length < 1) throw Error(errc::invalid_spec, "transition_length must be >= 1");
  if (start + transition_length > a.size()) {
    throw Error(errc::index_out_of_range, "source a cannot cover the transition");
  }
  if (start + transition_length > b.size()) {
    throw Error(errc::index_out_of_range, "source b cannot cover the transition");
  }

  LabeledSeries out = make_composed(a, b, "gradual");
  for (std::size_t i = 0; i < start; ++i) {
    push_sample(out, a.series.samples[i].memory_used, a.labels[i]);
  }

  // Both sources are indexed by the output position, as in the sudden
  // composition; b is shifted once so the two trajectories coincide where
  // the transition opens and drift apart only through their own dynamics.
  double offset =
      a.series.samples[start].memory_used - b.series.samples[start].memory_used;
  auto rng = make_rng(rng_seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  // The draw probability ramps to exactly 1 at the last transition slot, so
  // a transition of length 1 degenerates to a sudden switch at `start`.
  for (std::size_t j = 0; j < transition_length; ++j) {
    std::size_t i = start + j;
    double p = static_cast<double>(j + 1) / static_cast<double>(transition_length);
    if (uniform(rng) < p) {
      push_sample(out, b.series.samples[i].memory_used + offset, b.labels[i]);
    } else {
      push_sample(out, a.series.samples[i].memory_used, a.labels[i]);
    }
  }
  for (std::size_t i = start + transition_length; i < b.size(); ++i) {
    push_sample(out, b.series.samples[i].memory_used + offset, b.labels[i]);
  }
  return out;
}

LabeledSeries compose_recurring(const LabeledSeries& a, const LabeledSeries& b,
                                std::size_t block_length, std::size_t cycles) {
  check_composable(a, b);
  if (block_length < 1) throw Error(errc::invalid_spec, "block_length must be >= 1");
  if (cycles < 1) throw Error(errc::invalid_spec, "cycles must be >= 1");

  LabeledSeries out = make_composed(a, b, "recurring");
  std::size_t ca = 0, cb = 0;
  for (std::size_t block = 0; block < 2 * cycles; ++block) {
    const LabeledSeries& src = (block % 2 == 0) ? a : b;
    std::size_t& cursor = (block % 2 == 0) ? ca : cb;
    std::size_t remaining = src.size() - cursor;
    if (remaining == 0) {
      throw Error(errc::source_exhausted,
                  std::string(block % 2 == 0 ? "a" : "b") + " empty at block " +
                      std::to_string(block));
    }
    std::size_t take = std::min(block_length, remaining);
    double offset = out.size() == 0 ? 0.0
                                    : out.series.samples.back().memory_used -
                                          src.series.samples[cursor].memory_used;
    for (std::size_t j = 0; j < take; ++j, ++cursor) {
      push_sample(out, src.series.samples[cursor].memory_used + offset, src.labels[cursor]);
    }
    if (take < block_length) break;  // source ran dry; truncate the plan here
  }
  return out;
}

namespace {

void apply_profile_override(ProfileSpec& p, const std::string& field, const std::string& value) {
  auto num = [&](double& out) {
    if (!parse_double(value, out)) {
      throw Error(errc::invalid_spec, "bad numeric value '" + value + "' for " + field);
    }
  };
  auto count = [&](std::size_t& out) {
    std::int64_t v = 0;
    if (!parse_int(value, v) || v < 0) {
      throw Error(errc::invalid_spec, "bad count '" + value + "' for " + field);
    }
    out = static_cast<std::size_t>(v);
  };
  if (field == "name") p.name = value;
  else if (field == "base_memory") num(p.base_memory);
  else if (field == "leak_rate") num(p.leak_rate);
  else if (field == "episode_length") count(p.episode_length);
  else if (field == "release_fraction") num(p.release_fraction);
  else if (field == "seasonal_amplitude") num(p.seasonal_amplitude);
  else if (field == "seasonal_period") count(p.seasonal_period);
  else if (field == "noise_std") num(p.noise_std);
  else if (field == "total_samples") count(p.total_samples);
  else if (field == "sampling_interval_seconds") num(p.sampling_interval_seconds);
  else throw Error(errc::invalid_spec, "unknown profile field '" + field + "'");
}

}  // namespace

ShiftSpec parse_shift_spec(const std::string& text) {
  ShiftSpec spec;
  spec.profile_a = preset_low();
  spec.profile_b = preset_low();
  std::vector<std::pair<std::string, std::string>> overrides;

  for (auto raw : split_lines(text)) {
    auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(errc::invalid_spec, "expected key = value, got '" + std::string(line) + "'");
    }
    std::string key(trim(line.substr(0, eq)));
    std::string value(trim(line.substr(eq + 1)));
    if (key.empty() || value.empty()) {
      throw Error(errc::invalid_spec, "empty key or value in '" + std::string(line) + "'");
    }

    auto count = [&](std::size_t& out) {
      std::int64_t v = 0;
      if (!parse_int(value, v) || v < 0) {
        throw Error(errc::invalid_spec, "bad count '" + value + "' for " + key);
      }
      out = static_cast<std::size_t>(v);
    };
    if (key == "kind") {
      if (value != "profile" && value != "sudden" && value != "gradual" &&
          value != "recurring") {
        throw Error(errc::invalid_spec, "unknown kind '" + value + "'");
      }
      spec.kind = value;
    } else if (key == "profile_a") {
      spec.profile_a = preset_by_name(value);
    } else if (key == "profile_b") {
      spec.profile_b = preset_by_name(value);
    } else if (key == "seed") {
      std::int64_t v = 0;
      if (!parse_int(value, v)) throw Error(errc::invalid_spec, "bad seed '" + value + "'");
      spec.seed = static_cast<std::uint64_t>(v);
    } else if (key == "total_samples") {
      std::size_t v = 0;
      count(v);
      spec.profile_a.total_samples = v;
      spec.profile_b.total_samples = v;
    } else if (key == "switch_index") {
      count(spec.switch_index);
    } else if (key == "start") {
      count(spec.start);
    } else if (key == "transition_length") {
      count(spec.transition_length);
    } else if (key == "block_length") {
      count(spec.block_length);
    } else if (key == "cycles") {
      count(spec.cycles);
    } else if (key.rfind("a.", 0) == 0 || key.rfind("b.", 0) == 0) {
      overrides.emplace_back(key, value);
    } else {
      throw Error(errc::invalid_spec, "unknown key '" + key + "'");
    }
  }

  // Profile overrides land after presets and shared keys regardless of
  // their position in the file.
  for (const auto& [key, value] : overrides) {
    apply_profile_override(key[0] == 'a' ? spec.profile_a : spec.profile_b, key.substr(2),
                           value);
  }

  if (spec.kind == "gradual" && spec.transition_length < 1) {
    throw Error(errc::invalid_spec, "transition_length must be >= 1");
  }
  if (spec.kind == "recurring") {
    if (spec.block_length < 1) throw Error(errc::invalid_spec, "block_length must be >= 1");
    if (spec.cycles < 2) throw Error(errc::invalid_spec, "cycles must be >= 2");
  }
  return spec;
}

ShiftSpec load_shift_spec(const std::string& path) {
  return parse_shift_spec(read_file(path));
}

LabeledSeries build_scenario(const ShiftSpec& spec) {
  ProfileSpec pa = spec.profile_a;
  ProfileSpec pb = spec.profile_b;
  pa.rng_seed = mix_seed(spec.seed, 1);
  pb.rng_seed = mix_seed(spec.seed, 2);

  if (spec.kind == "profile") return generate_profile(pa);
  LabeledSeries a = generate_profile(pa);
  LabeledSeries b = generate_profile(pb);
  if (spec.kind == "sudden") return compose_sudden(a, b, spec.switch_index);
  if (spec.kind == "gradual") {
    return compose_gradual(a, b, spec.start, spec.transition_length, mix_seed(spec.seed, 3));
  }
  if (spec.kind == "recurring") return compose_recurring(a, b, spec.block_length, spec.cycles);
  throw Error(errc::invalid_spec, "unknown kind '" + spec.kind + "'");
}

std::vector<std::string> builtin_scenario_names() {
  return {"sudden_low_medium", "sudden_low_high", "gradual_low_high", "recurring_medium_high"};
}

ShiftSpec builtin_scenario(const std::string& name, std::uint64_t seed) {
  ShiftSpec spec;
  spec.seed = seed;
  if (name == "sudden_low_medium") {
    spec.kind = "sudden";
    spec.profile_a = preset_low();
    spec.profile_b = preset_medium();
    spec.switch_index = 7000;
  } else if (name == "sudden_low_high") {
    spec.kind = "sudden";
    spec.profile_a = preset_low();
    spec.profile_b = preset_high();
    spec.switch_index = 7000;
  } else if (name == "gradual_low_high") {
    spec.kind = "gradual";
    spec.profile_a = preset_low();
    spec.profile_b = preset_high();
    spec.start = 6000;
    spec.transition_length = 4000;
  } else if (name == "recurring_medium_high") {
    spec.kind = "recurring";
    spec.profile_a = preset_medium();
    spec.profile_b = preset_high();
    // Short blocks relative to the retrain window keep every retrain buffer
    // straddling a regime boundary, and many boundaries make detection
    // latency the deciding cost between the adaptive modes.
    spec.block_length = 1000;
    spec.cycles = 20;
  } else {
    throw Error(errc::invalid_spec, "unknown scenario '" + name + "'");
  }
  return spec;
}

}  // namespace agewatch
