#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "features.hpp"

using namespace agewatch;

namespace {

LabeledSeries series_of(const std::vector<double>& memory, const std::vector<int>& labels) {
  LabeledSeries ls;
  ls.series.sampling_interval_seconds = 5.0;
  for (std::size_t i = 0; i < memory.size(); ++i) {
    ls.series.samples.push_back({5.0 * static_cast<double>(i), memory[i]});
    ls.labels.push_back(labels.empty() ? 0 : labels[i]);
    ls.provenance.push_back(Provenance::Default);
  }
  if (labels.empty()) ls.labels.assign(memory.size(), 0);
  return ls;
}

// Direct per-window formulas, no rolling state.
void window_oracle(const std::vector<double>& memory, std::size_t i, std::size_t window,
                   double* mean, double* stdev, double* slope) {
  double m = 0.0;
  for (std::size_t j = i + 1 - window; j <= i; ++j) m += memory[j];
  m /= static_cast<double>(window);
  double ss = 0.0;
  for (std::size_t j = i + 1 - window; j <= i; ++j) {
    ss += (memory[j] - m) * (memory[j] - m);
  }
  double var = window > 1 ? ss / static_cast<double>(window - 1) : 0.0;
  double xbar = (static_cast<double>(window) - 1.0) / 2.0;
  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j < window; ++j) {
    double dx = static_cast<double>(j) - xbar;
    num += dx * (memory[i + 1 - window + j] - m);
    den += dx * dx;
  }
  *mean = m;
  *stdev = std::sqrt(std::max(0.0, var));
  *slope = num / den;
}

}  // namespace

TEST_CASE("constant stream gives constant-only features") {
  auto ls = series_of(std::vector<double>(40, 7.5), {});
  auto rows = extract_features(ls, 12);
  REQUIRE(rows.size() == 40 - 12);
  CHECK(rows.front().index == 12);
  for (const auto& row : rows) {
    REQUIRE(row.features.size() == kFeatureWidth);
    CHECK(row.features[0] == 7.5);
    CHECK(row.features[1] == doctest::Approx(7.5).epsilon(1e-12));
    CHECK(row.features[2] == 0.0);
    CHECK(std::abs(row.features[3]) <= 1e-12);
    CHECK(row.features[4] == 0.0);
  }
}

TEST_CASE("linear stream: slope one, oracle std, unit diff") {
  std::vector<double> memory(50);
  for (std::size_t i = 0; i < memory.size(); ++i) memory[i] = static_cast<double>(i);
  auto ls = series_of(memory, {});
  auto rows = extract_features(ls, 12);
  double mean, stdev, slope;
  window_oracle(memory, 12, 12, &mean, &stdev, &slope);
  for (const auto& row : rows) {
    CHECK(row.features[3] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(row.features[4] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(row.features[2] == doctest::Approx(stdev).epsilon(1e-12));
  }
  CHECK(rows[0].features[1] == doctest::Approx(mean).epsilon(1e-12));
}

TEST_CASE("every feature matches the direct window formulas") {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> noise(0.0, 3.0);
  std::vector<double> memory(300);
  double level = 100.0;
  for (auto& v : memory) {
    level += 0.2;
    v = level + noise(rng);
  }
  std::vector<int> labels(memory.size());
  for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = static_cast<int>(rng() & 1);

  auto ls = series_of(memory, labels);
  const std::size_t window = 16;
  auto rows = extract_features(ls, window);
  REQUIRE(rows.size() == memory.size() - window);
  for (const auto& row : rows) {
    std::size_t i = row.index;
    double mean, stdev, slope;
    window_oracle(memory, i, window, &mean, &stdev, &slope);
    CHECK(row.features[0] == memory[i]);
    CHECK(std::abs(row.features[1] - mean) <= 1e-9);
    CHECK(std::abs(row.features[2] - stdev) <= 1e-9);
    CHECK(std::abs(row.features[3] - slope) <= 1e-9);
    CHECK(row.features[4] == memory[i] - memory[i - 1]);
    CHECK(row.label == labels[i]);
  }
}

TEST_CASE("adding a constant shifts only level features") {
  std::mt19937_64 rng(55);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  std::vector<double> memory(80);
  for (auto& v : memory) v = u(rng);
  std::vector<double> shifted = memory;
  for (auto& v : shifted) v += 1000.0;

  auto rows0 = extract_features(series_of(memory, {}), 12);
  auto rows1 = extract_features(series_of(shifted, {}), 12);
  for (std::size_t r = 0; r < rows0.size(); ++r) {
    CHECK(rows1[r].features[0] == doctest::Approx(rows0[r].features[0] + 1000.0));
    CHECK(rows1[r].features[1] == doctest::Approx(rows0[r].features[1] + 1000.0));
    CHECK(std::abs(rows1[r].features[2] - rows0[r].features[2]) <= 1e-6);
    CHECK(std::abs(rows1[r].features[3] - rows0[r].features[3]) <= 1e-6);
    CHECK(std::abs(rows1[r].features[4] - rows0[r].features[4]) <= 1e-9);
  }
}

TEST_CASE("all features stay finite on harsh inputs") {
  std::vector<double> memory(30, 1e12);
  memory[15] = -1e12;
  auto rows = extract_features(series_of(memory, {}), 4);
  for (const auto& row : rows) {
    for (double f : row.features) CHECK(std::isfinite(f));
  }
}

TEST_CASE("window and length validation") {
  auto ls = series_of(std::vector<double>(10, 1.0), {});
  CHECK_THROWS_AS(extract_features(ls, 10), Error);  // needs n > window
  CHECK_THROWS_AS(extract_features(ls, 1), Error);   // window must be >= 2
  LabeledSeries broken = ls;
  broken.labels.pop_back();
  CHECK_THROWS_AS(extract_features(broken, 4), Error);
}

TEST_CASE("CSV dump has one row per feature row") {
  auto ls = series_of(std::vector<double>(20, 3.0), {});
  auto rows = extract_features(ls, 12);
  auto text = features_to_csv(rows);
  CHECK(text.rfind("index,memory,rolling_mean,rolling_std,slope,first_diff,label\n", 0) == 0);
}
