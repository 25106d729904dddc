#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <deque>
#include <random>
#include <vector>

#include "detectors.hpp"

using namespace agewatch;

namespace {

// Reference exponential-histogram simulator: counts only, same merge rule
// (a level overflowing its capacity merges its two oldest buckets into the
// next level). Kept separate from the production code on purpose.
std::vector<std::vector<std::uint64_t>> histogram_oracle(std::uint64_t inserts, int cap) {
  std::vector<std::deque<std::uint64_t>> levels;  // newest at front
  for (std::uint64_t i = 0; i < inserts; ++i) {
    if (levels.empty()) levels.emplace_back();
    levels[0].push_front(1);
    for (std::size_t l = 0; l < levels.size(); ++l) {
      if (levels[l].size() <= static_cast<std::size_t>(cap)) break;
      std::uint64_t merged = levels[l].back();
      levels[l].pop_back();
      merged += levels[l].back();
      levels[l].pop_back();
      if (l + 1 == levels.size()) levels.emplace_back();
      levels[l + 1].push_front(merged);
    }
  }
  std::vector<std::vector<std::uint64_t>> out;
  for (auto& lvl : levels) {
    out.emplace_back(lvl.rbegin(), lvl.rend());  // oldest first
  }
  return out;
}

}  // namespace

TEST_CASE("an all-zero error stream never leaves InControl") {
  Ddm d;
  for (int i = 0; i < 5000; ++i) {
    CHECK(d.update(0) == DetectorPhase::InControl);
  }
  CHECK(d.p() == 0.0);
  CHECK(d.s() == 0.0);
}

TEST_CASE("nothing is signaled before the instance minimum") {
  Ddm d(30);
  for (int i = 0; i < 29; ++i) {
    CHECK(d.update(1) == DetectorPhase::InControl);
  }
}

TEST_CASE("running rate and deviation follow their formulas") {
  Ddm d(1, 1);
  int errors = 0;
  std::mt19937_64 rng(3);
  for (int i = 1; i <= 400; ++i) {
    int e = static_cast<int>(rng() % 3 == 0);
    errors += e;
    d.update(e);
    double p = static_cast<double>(errors) / i;
    CHECK(std::abs(d.p() - p) <= 1e-12);
    CHECK(std::abs(d.s() - std::sqrt(p * (1.0 - p) / i)) <= 1e-12);
    CHECK(d.p() >= 0.0);
    CHECK(d.p() <= 1.0);
    CHECK(d.s() >= 0.0);
    CHECK(d.p_min() + d.s_min() <= d.p() + d.s() + 1e-12);
  }
}

TEST_CASE("a clear error-rate jump raises Drift, and reset rearms") {
  std::mt19937_64 rng(11);
  auto bern = [&](double rate) { return std::uniform_real_distribution<>(0, 1)(rng) < rate; };
  Ddm d;
  bool drifted = false;
  int step = 0;
  for (; step < 1000 && !drifted; ++step) drifted = d.update(bern(0.05)) == DetectorPhase::Drift;
  CHECK_FALSE(drifted);
  for (; step < 2000 && !drifted; ++step) drifted = d.update(bern(0.6)) == DetectorPhase::Drift;
  CHECK(drifted);
  CHECK(step < 1200);

  d.reset();
  CHECK(d.n() == 0);
  CHECK(d.phase() == DetectorPhase::InControl);
  for (int i = 0; i < 200; ++i) CHECK(d.update(0) == DetectorPhase::InControl);

  d.reset();
  d.reset();  // idempotent
  CHECK(d.n() == 0);
  // Minima re-record from fresh data once past the stabilization warm-up.
  for (int i = 0; i < 600; ++i) d.update(i % 2);
  CHECK(d.p_min() > 0.0);
  CHECK(d.p_min() < 1.0);
}

TEST_CASE("detection delay distribution on seeded step streams") {
  // Scaled-down version of the release gate: 20 seeds here.
  int detected_in_time = 0, never_early = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    std::mt19937_64 rng(seed * 7919 + 13);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Ddm d;
    bool early = false;
    int detect_step = -1;
    for (int i = 0; i < 1500; ++i) {
      int e = u(rng) < (i < 1000 ? 0.1 : 0.5) ? 1 : 0;
      if (d.update(e) == DetectorPhase::Drift) {
        if (i < 1000) {
          early = true;
          break;
        }
        detect_step = i;
        break;
      }
    }
    if (!early) ++never_early;
    if (detect_step >= 1000 && detect_step < 1500) ++detected_in_time;
  }
  CHECK(never_early >= 19);
  CHECK(detected_in_time >= 19);
}

TEST_CASE("adwin rejects bad construction and inputs") {
  CHECK_THROWS_AS(Adwin(0.0, 5), Error);
  CHECK_THROWS_AS(Adwin(1.0, 5), Error);
  CHECK_THROWS_AS(Adwin(0.002, 0), Error);
  Adwin a;
  CHECK_THROWS_AS(a.update(-0.1), Error);
  CHECK_THROWS_AS(a.update(1.1), Error);
  CHECK_NOTHROW(a.update(0.0));
  CHECK_NOTHROW(a.update(1.0));
}

TEST_CASE("constant streams keep the whole window") {
  Adwin a;
  for (int i = 0; i < 10000; ++i) {
    CHECK_FALSE(a.update(0.0));
  }
  CHECK(a.width() == 10000);
  CHECK(a.mean() == 0.0);

  Adwin b;
  for (int i = 0; i < 4096; ++i) CHECK_FALSE(b.update(0.7));
  CHECK(b.width() == 4096);
  CHECK(std::abs(b.mean() - 0.7) <= 1e-12);
  CHECK(std::abs(b.total_sum() - 0.7 * 4096) <= 1e-9 * 0.7 * 4096);
}

TEST_CASE("bucket layout matches the reference histogram") {
  for (std::uint64_t n : {32ULL, 256ULL, 1024ULL, 5000ULL}) {
    Adwin a(0.002, 5);
    std::mt19937_64 rng(n);
    std::uniform_real_distribution<double> u(0.45, 0.55);  // too tame to cut
    for (std::uint64_t i = 0; i < n; ++i) a.update(u(rng));
    REQUIRE(a.width() == n);

    auto got = a.levels();
    auto want = histogram_oracle(n, 5);
    REQUIRE(got.size() == want.size());
    for (std::size_t l = 0; l < got.size(); ++l) {
      REQUIRE(got[l].size() == want[l].size());
      for (std::size_t k = 0; k < got[l].size(); ++k) {
        CHECK(got[l][k].count == want[l][k]);
        CHECK(got[l][k].count == (1ULL << l));
      }
    }
  }
}

TEST_CASE("window invariants hold at every step") {
  Adwin a(0.002, 5);
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double shadow_sum = 0.0;
  std::uint64_t shadow_count = 0;
  for (int i = 0; i < 3000; ++i) {
    double v = 0.5 + 0.03 * std::sin(i / 25.0) + 0.02 * (u(rng) - 0.5);
    a.update(v);
    shadow_sum += v;
    ++shadow_count;

    auto levels = a.levels();
    std::uint64_t total = 0;
    double sum = 0.0;
    for (std::size_t l = 0; l < levels.size(); ++l) {
      CHECK(levels[l].size() <= 5);
      for (const auto& b : levels[l]) {
        CHECK(b.count == (1ULL << l));
        total += b.count;
        sum += b.sum;
      }
    }
    CHECK(total == a.width());
    CHECK(total == shadow_count);  // nothing cut in this tame stream
    CHECK(std::abs(sum - a.total_sum()) <= 1e-9 * std::max(1.0, std::abs(sum)));
    CHECK(std::abs(sum - shadow_sum) <= 1e-9 * std::max(1.0, std::abs(sum)));
  }
}

TEST_CASE("a mean step is cut and the window converges to the new level") {
  Adwin a;
  bool detected = false;
  for (int i = 0; i < 1000; ++i) detected |= a.update(0.0);
  CHECK_FALSE(detected);
  for (int i = 0; i < 1000; ++i) detected |= a.update(1.0);
  CHECK(detected);
  CHECK(a.width() < 1100);
  CHECK(std::abs(a.mean() - 1.0) <= 0.05);
}

TEST_CASE("shadow window mean stays exact under synced drops") {
  // The oracle holds every retained element; drops are synced to the
  // production window width, so the means must agree to 1e-9 throughout.
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    Adwin a;
    std::deque<double> shadow;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 0.2);
    for (int i = 0; i < 8000; ++i) {
      double base = (i / 2000) % 2 == 0 ? 0.1 : 0.75;  // alternating regimes
      double v = std::min(1.0, base + u(rng));
      a.update(v);
      shadow.push_back(v);
      while (shadow.size() > a.width()) shadow.pop_front();
      REQUIRE(shadow.size() == a.width());
      double mean = 0.0;
      for (double x : shadow) mean += x;
      mean /= static_cast<double>(shadow.size());
      REQUIRE(std::abs(mean - a.mean()) <= 1e-9);
    }
  }
}

TEST_CASE("reset empties the window and is idempotent") {
  Adwin a;
  for (int i = 0; i < 500; ++i) a.update(0.3);
  a.reset();
  CHECK(a.width() == 0);
  CHECK(a.mean() == 0.0);
  a.reset();
  CHECK(a.width() == 0);
  for (int i = 0; i < 2000; ++i) {
    CHECK_FALSE(a.update(0.4));
  }
  CHECK(a.width() == 2000);
}

TEST_CASE("false positives stay rare on steady Bernoulli streams") {
  // Scaled-down version of the release gate: 40 seeds here.
  int with_detection = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    std::mt19937_64 rng(seed * 104729 + 7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Adwin a;
    bool any = false;
    for (int i = 0; i < 10000; ++i) {
      any |= a.update(u(rng) < 0.3 ? 1.0 : 0.0);
    }
    with_detection += any ? 1 : 0;
  }
  CHECK(with_detection <= 2);  // 5% of 40
}
