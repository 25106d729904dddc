#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "labeling.hpp"
#include "scenarios.hpp"

using namespace agewatch;

namespace {

// Two-pass textbook slope: sum (x-xbar)(y-ybar) / sum (x-xbar)^2.
double slope_oracle(const std::vector<double>& y) {
  double n = static_cast<double>(y.size());
  double xbar = (n - 1.0) / 2.0;
  double ybar = 0.0;
  for (double v : y) ybar += v;
  ybar /= n;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    double dx = static_cast<double>(i) - xbar;
    num += dx * (y[i] - ybar);
    den += dx * dx;
  }
  return num / den;
}

// Window scan written from the prose definition, sharing nothing with the
// implementation besides the slope primitive's contract.
std::vector<int> label_oracle(const std::vector<double>& trend, const LabelingConfig& cfg) {
  std::vector<int> labels(trend.size(), 0);
  for (std::size_t s = 0; s + cfg.window_size <= trend.size();
       s += static_cast<std::size_t>(cfg.stride)) {
    std::vector<double> window(trend.begin() + s, trend.begin() + s + cfg.window_size);
    if (slope_oracle(window) > cfg.slope_threshold) {
      for (std::size_t i = s; i < s + cfg.window_size; ++i) labels[i] = 1;
    }
  }
  return labels;
}

}  // namespace

TEST_CASE("slope of flat and linear windows") {
  CHECK(ols_slope({10, 10, 10, 10}) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(ols_slope({0, 1, 2, 3, 4}) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ols_slope({2, 4, 6, 8}) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK_THROWS_AS(ols_slope({1.0}), Error);
}

TEST_CASE("slope agrees with the two-pass closed form") {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> noise(0.0, 10.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::size_t n = 2 + rng() % 200;
    std::vector<double> y(n);
    for (auto& v : y) v = 500 + noise(rng);
    CHECK(std::abs(ols_slope(y) - slope_oracle(y)) <= 1e-9);
  }
}

TEST_CASE("line above threshold labels everything") {
  std::vector<double> trend(300);
  for (std::size_t i = 0; i < trend.size(); ++i) trend[i] = static_cast<double>(i);
  auto labels = label_by_trend(trend, {});
  for (int v : labels) CHECK(v == 1);

  std::vector<double> flat(300, 9.0);
  auto zeros = label_by_trend(flat, {});
  for (int v : zeros) CHECK(v == 0);
}

TEST_CASE("step-change stream matches the exhaustive oracle exactly") {
  std::vector<double> trend(1000, 50.0);
  for (std::size_t i = 500; i < 1000; ++i) {
    trend[i] = 50.0 + static_cast<double>(i - 500);
  }
  LabelingConfig cfg;  // window 60, stride 1, threshold 0.5
  CHECK(label_by_trend(trend, cfg) == label_oracle(trend, cfg));
}

TEST_CASE("strided windows and uncovered tails match the oracle") {
  std::mt19937_64 rng(77);
  std::normal_distribution<double> jitter(0.0, 0.3);
  for (int trial = 0; trial < 12; ++trial) {
    std::size_t n = 80 + rng() % 400;
    std::vector<double> trend(n);
    double level = 10.0;
    for (auto& v : trend) {
      level += (rng() % 5 == 0 ? 1.2 : -0.1);
      v = level + jitter(rng);
    }
    LabelingConfig cfg;
    cfg.window_size = 8 + static_cast<int>(rng() % 40);
    cfg.stride = 1 + static_cast<int>(rng() % cfg.window_size);
    cfg.slope_threshold = 0.4;
    auto got = label_by_trend(trend, cfg);
    auto want = label_oracle(trend, cfg);
    CHECK(got == want);

    auto covered = window_coverage(n, cfg);
    for (std::size_t i = 0; i < n; ++i) {
      if (!covered[i]) CHECK(got[i] == 0);
    }
  }
}

TEST_CASE("raising the threshold only removes labels") {
  std::mt19937_64 rng(123);
  std::normal_distribution<double> jitter(0.0, 1.0);
  std::vector<double> trend(600);
  double level = 0.0;
  for (auto& v : trend) {
    level += 0.3;
    v = level + jitter(rng);
  }
  LabelingConfig lo, hi;
  lo.slope_threshold = 0.2;
  hi.slope_threshold = 0.45;
  auto loose = label_by_trend(trend, lo);
  auto strict = label_by_trend(trend, hi);
  for (std::size_t i = 0; i < trend.size(); ++i) {
    CHECK(strict[i] <= loose[i]);
  }
}

TEST_CASE("configuration and length validation") {
  std::vector<double> trend(100, 1.0);
  LabelingConfig bad;
  bad.stride = 80;
  bad.window_size = 40;
  CHECK_THROWS_AS(label_by_trend(trend, bad), Error);
  bad = {};
  bad.slope_threshold = 0.0;
  CHECK_THROWS_AS(label_by_trend(trend, bad), Error);
  std::vector<double> tiny(10, 1.0);
  CHECK_THROWS_AS(label_by_trend(tiny, {}), Error);  // shorter than the window
}

TEST_CASE("consolidation prepends warm-up zeros") {
  auto out = consolidate({1, 1, 0}, 120);
  REQUIRE(out.size() == 123);
  for (std::size_t i = 0; i < 120; ++i) CHECK(out[i] == 0);
  CHECK(out[120] == 1);
  CHECK(out[121] == 1);
  CHECK(out[122] == 0);

  CHECK(consolidate({1, 0}, 0) == std::vector<int>{1, 0});
  CHECK(consolidate({}, 4) == std::vector<int>(4, 0));
}

TEST_CASE("the full pipeline stamps provenance per region") {
  ProfileSpec spec;
  spec.name = "ramp";
  spec.base_memory = 100.0;
  spec.leak_rate = 1.0;
  spec.episode_length = 900;
  spec.release_fraction = 1.0;
  spec.seasonal_amplitude = 0.0;
  spec.seasonal_period = 60;
  spec.noise_std = 0.0;
  spec.total_samples = 1800;
  auto profile = generate_profile(spec);

  LabelingConfig cfg;
  cfg.window_size = 12;
  LabeledSeries out = label_pipeline(profile.series, 60, {}, cfg);
  REQUIRE(out.size() == profile.size());

  std::size_t warm = 0;
  while (warm < out.size() && out.provenance[warm] == Provenance::Warmup) ++warm;
  CHECK(warm == 120);  // 600 s at 5 s cadence
  for (std::size_t i = 0; i < warm; ++i) CHECK(out.labels[i] == 0);
  for (std::size_t i = warm; i < out.size(); ++i) {
    CHECK(out.provenance[i] != Provenance::Warmup);
  }
  // The body of the growth episode is steep enough to label.
  std::size_t ones = 0;
  for (int v : out.labels) ones += static_cast<std::size_t>(v);
  CHECK(ones > 500);
}

TEST_CASE("labeled CSV round-trips") {
  ProfileSpec spec;
  spec.leak_rate = 0.8;
  spec.episode_length = 120;
  spec.seasonal_amplitude = 2.0;
  spec.seasonal_period = 30;
  spec.noise_std = 0.5;
  spec.total_samples = 400;
  spec.rng_seed = 6;
  auto ls = generate_profile(spec);
  ls.provenance.assign(ls.size(), Provenance::TrendWindow);

  std::string text = labeled_to_csv(ls, true);
  LabeledSeries back = parse_labeled_csv(text, "x");
  CHECK(back.labels == ls.labels);
  CHECK(back.provenance == ls.provenance);
  CHECK(labeled_to_csv(back, true) == text);

  std::string bare = labeled_to_csv(ls, false);
  LabeledSeries plain = parse_labeled_csv(bare, "x");
  CHECK(plain.labels == ls.labels);
  for (auto p : plain.provenance) CHECK(p == Provenance::Default);

  CHECK_THROWS_AS(parse_labeled_csv("elapsed_seconds,memory_used,label\n0,1,2\n", "x"),
                  Error);
}

TEST_CASE("provenance names round-trip") {
  for (auto p : {Provenance::Warmup, Provenance::TrendWindow, Provenance::Default}) {
    CHECK(provenance_from_name(provenance_name(p)) == p);
  }
  CHECK_THROWS_AS(provenance_from_name("Nonsense"), Error);
}
