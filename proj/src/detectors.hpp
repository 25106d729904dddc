#pragma once

#include <cstdint>
#include <deque>
#include <string>
#include <vector>

#include "errors.hpp"

namespace agewatch {

enum class DetectorPhase { InControl, Warning, Drift };

const char* phase_name(DetectorPhase p);

// Error-rate drift detector: tracks the running error rate p and its
// deviation s = sqrt(p(1-p)/n), records the joint minimum of p+s, and
// signals Warning at p+s > p_min + 2*s_min, Drift at p+s > p_min + 3*s_min.
// Silent until min_num_instances samples have arrived. The minima are only
// recorded once minima_warmup samples have arrived: a running minimum taken
// while p still has cold-start variance locks onto lucky low prefixes and
// then misfires on plain regression to the mean.
class Ddm {
 public:
  explicit Ddm(int min_num_instances = 30, int minima_warmup = 500);

  DetectorPhase update(int error);  // error is the 0/1 misclassification flag
  void reset();

  std::uint64_t n() const { return n_; }
  double p() const { return p_; }
  double s() const { return s_; }
  double p_min() const { return p_min_; }
  double s_min() const { return s_min_; }
  DetectorPhase phase() const { return phase_; }
  int min_num_instances() const { return min_num_instances_; }
  int minima_warmup() const { return minima_warmup_; }

 private:
  int min_num_instances_;
  int minima_warmup_;
  std::uint64_t n_ = 0;
  double p_ = 0.0;
  double s_ = 0.0;
  double p_min_ = 0.0;
  double s_min_ = 0.0;
  bool min_set_ = false;
  DetectorPhase phase_ = DetectorPhase::InControl;
};

// Adaptive sliding window over values in [0,1], kept as an exponential
// histogram: level l buckets aggregate 2^l values; when a level exceeds
// max_buckets_per_level buckets its two oldest merge into the next level.
// After each insert every bucket boundary is tested as a cut point with
// eps = sqrt(ln(4/delta') / (2m)), delta' = delta / #boundaries and
// m = 1/(1/n0 + 1/n1); while any boundary violates the bound the oldest
// bucket is dropped and the update reports a change.
class Adwin {
 public:
  struct Bucket {
    double sum = 0.0;
    double variance = 0.0;  // aggregated within-bucket variance
    std::uint64_t count = 0;
  };

  explicit Adwin(double delta = 0.002, int max_buckets_per_level = 5);

  bool update(double value);
  void reset();

  std::uint64_t width() const { return total_count_; }
  double total_sum() const { return total_sum_; }
  double mean() const { return total_count_ ? total_sum_ / static_cast<double>(total_count_) : 0.0; }
  double variance() const;
  double delta() const { return delta_; }

  // Oldest-first bucket view per level, level 0 first; for inspection and
  // structural tests.
  std::vector<std::vector<Bucket>> levels() const;

 private:
  void insert_value(double value);
  void compress();
  bool try_drop_oldest();

  double delta_;
  int max_buckets_;
  // levels_[l] holds level-l buckets, newest at front, oldest at back.
  std::vector<std::deque<Bucket>> levels_;
  std::uint64_t total_count_ = 0;
  double total_sum_ = 0.0;
  double total_variance_ = 0.0;
};

}  // namespace agewatch
