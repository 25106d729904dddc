#include "detectors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace agewatch {

const char* phase_name(DetectorPhase p) {
  switch (p) {
    case DetectorPhase::InControl: return "InControl";
    case DetectorPhase::Warning: return "Warning";
    case DetectorPhase::Drift: return "Drift";
  }
  return "InControl";
}

Ddm::Ddm(int min_num_instances, int minima_warmup)
    : min_num_instances_(min_num_instances), minima_warmup_(minima_warmup) {
  if (min_num_instances < 1) {
    throw Error(errc::invalid_argument, "min_num_instances must be >= 1");
  }
  if (minima_warmup < 1) {
    throw Error(errc::invalid_argument, "minima_warmup must be >= 1");
  }
  reset();
}

void Ddm::reset() {
  n_ = 0;
  p_ = 0.0;
  s_ = 0.0;
  p_min_ = std::numeric_limits<double>::infinity();
  s_min_ = std::numeric_limits<double>::infinity();
  min_set_ = false;
  phase_ = DetectorPhase::InControl;
}

DetectorPhase Ddm::update(int error) {
  if (error != 0 && error != 1) {
    throw Error(errc::invalid_argument, "error flag must be 0 or 1");
  }
  n_ += 1;
  p_ += (static_cast<double>(error) - p_) / static_cast<double>(n_);
  s_ = std::sqrt(p_ * (1.0 - p_) / static_cast<double>(n_));

  if (n_ < static_cast<std::uint64_t>(min_num_instances_)) {
    phase_ = DetectorPhase::InControl;
    return phase_;
  }
  if (n_ >= static_cast<std::uint64_t>(minima_warmup_) &&
      (!min_set_ || p_ + s_ < p_min_ + s_min_)) {
    p_min_ = p_;
    s_min_ = s_;
    min_set_ = true;
  }
  if (!min_set_) {
    phase_ = DetectorPhase::InControl;
    return phase_;
  }
  if (p_ + s_ > p_min_ + 3.0 * s_min_) {
    phase_ = DetectorPhase::Drift;
  } else if (p_ + s_ > p_min_ + 2.0 * s_min_) {
    phase_ = DetectorPhase::Warning;
  } else {
    phase_ = DetectorPhase::InControl;
  }
  return phase_;
}

Adwin::Adwin(double delta, int max_buckets_per_level)
    : delta_(delta), max_buckets_(max_buckets_per_level) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw Error(errc::invalid_argument, "delta must be in (0,1)");
  }
  if (max_buckets_per_level < 1) {
    throw Error(errc::invalid_argument, "max_buckets_per_level must be >= 1");
  }
}

void Adwin::reset() {
  levels_.clear();
  total_count_ = 0;
  total_sum_ = 0.0;
  total_variance_ = 0.0;
}

double Adwin::variance() const {
  return total_count_ ? total_variance_ / static_cast<double>(total_count_) : 0.0;
}

void Adwin::insert_value(double value) {
  if (levels_.empty()) levels_.emplace_back();
  // Incremental variance contribution of the new element against the
  // current window mean.
  if (total_count_ > 0) {
    double m = mean();
    total_variance_ += static_cast<double>(total_count_) / (static_cast<double>(total_count_) + 1.0) *
                       (value - m) * (value - m);
  }
  levels_[0].push_front(Bucket{value, 0.0, 1});
  total_count_ += 1;
  total_sum_ += value;
}

void Adwin::compress() {
  for (std::size_t l = 0; l < levels_.size(); ++l) {
    if (levels_[l].size() <= static_cast<std::size_t>(max_buckets_)) break;
    if (l + 1 >= levels_.size()) levels_.emplace_back();
    Bucket old1 = levels_[l].back();  // oldest
    levels_[l].pop_back();
    Bucket old2 = levels_[l].back();  // second oldest
    levels_[l].pop_back();
    Bucket merged;
    merged.count = old1.count + old2.count;
    merged.sum = old1.sum + old2.sum;
    double m1 = old1.sum / static_cast<double>(old1.count);
    double m2 = old2.sum / static_cast<double>(old2.count);
    merged.variance = old1.variance + old2.variance +
                      (m1 - m2) * (m1 - m2) * static_cast<double>(old1.count) *
                          static_cast<double>(old2.count) / static_cast<double>(merged.count);
    // The merged data is newer than everything already at the next level.
    levels_[l + 1].push_front(merged);
  }
}

bool Adwin::try_drop_oldest() {
  std::size_t n_buckets = 0;
  for (const auto& lvl : levels_) n_buckets += lvl.size();
  if (n_buckets < 2 || total_count_ < 2) return false;

  double delta_prime = delta_ / static_cast<double>(n_buckets - 1);
  double ln_term = std::log(4.0 / delta_prime);

  // Walk boundaries from the oldest bucket toward the newest, keeping the
  // aggregate of the older side.
  double sum_old = 0.0;
  std::uint64_t count_old = 0;
  std::size_t seen = 0;
  for (std::size_t li = levels_.size(); li-- > 0;) {
    for (std::size_t bi = levels_[li].size(); bi-- > 0;) {
      const Bucket& b = levels_[li][bi];
      sum_old += b.sum;
      count_old += b.count;
      seen += 1;
      if (seen == n_buckets) break;  // no right side remains
      std::uint64_t count_new = total_count_ - count_old;
      double mean_old = sum_old / static_cast<double>(count_old);
      double mean_new = (total_sum_ - sum_old) / static_cast<double>(count_new);
      double m = 1.0 / (1.0 / static_cast<double>(count_old) +
                        1.0 / static_cast<double>(count_new));
      double eps = std::sqrt(ln_term / (2.0 * m));
      if (std::abs(mean_old - mean_new) >= eps) {
        // Drop the oldest bucket of the window.
        std::size_t top = levels_.size();
        while (top > 0 && levels_[top - 1].empty()) --top;
        Bucket& oldest = levels_[top - 1].back();
        total_count_ -= oldest.count;
        total_sum_ -= oldest.sum;
        levels_[top - 1].pop_back();
        while (!levels_.empty() && levels_.back().empty()) levels_.pop_back();
        // Rebuild the variance accumulator from the retained buckets.
        total_variance_ = 0.0;
        if (total_count_ > 0) {
          double wmean = total_sum_ / static_cast<double>(total_count_);
          for (const auto& lvl : levels_) {
            for (const auto& bk : lvl) {
              double bm = bk.sum / static_cast<double>(bk.count);
              total_variance_ +=
                  bk.variance + static_cast<double>(bk.count) * (bm - wmean) * (bm - wmean);
            }
          }
        }
        return true;
      }
    }
  }
  return false;
}

bool Adwin::update(double value) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw Error(errc::value_out_of_range, "adwin input must lie in [0,1]");
  }
  insert_value(value);
  compress();
  bool changed = false;
  while (try_drop_oldest()) changed = true;
  return changed;
}

std::vector<std::vector<Adwin::Bucket>> Adwin::levels() const {
  std::vector<std::vector<Bucket>> out;
  for (const auto& lvl : levels_) {
    std::vector<Bucket> row(lvl.begin(), lvl.end());
    std::reverse(row.begin(), row.end());  // oldest first
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace agewatch
