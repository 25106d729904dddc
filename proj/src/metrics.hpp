#pragma once

#include <cstdint>
#include <vector>

#include "errors.hpp"

namespace agewatch {

// Positive class is Aging = 1.
struct ConfusionMatrix {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fn = 0;

  std::uint64_t total() const { return tp + fp + tn + fn; }
  void add(int prediction, int truth);
};

struct Metrics {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  // Set when the corresponding ratio was 0/0 and defined as 0.
  bool accuracy_degenerate = false;
  bool precision_degenerate = false;
  bool recall_degenerate = false;
  bool f1_degenerate = false;
};

ConfusionMatrix score(const std::vector<int>& predictions, const std::vector<int>& truths);

Metrics derive(const ConfusionMatrix& cm);

}  // namespace agewatch
