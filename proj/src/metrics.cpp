#include "metrics.hpp"

namespace agewatch {

void ConfusionMatrix::add(int prediction, int truth) {
  if ((prediction != 0 && prediction != 1) || (truth != 0 && truth != 1)) {
    throw Error(errc::invalid_argument, "labels must be 0 or 1");
  }
  if (truth == 1) {
    (prediction == 1 ? tp : fn) += 1;
  } else {
    (prediction == 1 ? fp : tn) += 1;
  }
}

ConfusionMatrix score(const std::vector<int>& predictions, const std::vector<int>& truths) {
  if (predictions.size() != truths.size()) {
    throw Error(errc::length_mismatch,
                std::to_string(predictions.size()) + " predictions vs " +
                    std::to_string(truths.size()) + " truths");
  }
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < predictions.size(); ++i) cm.add(predictions[i], truths[i]);
  return cm;
}

Metrics derive(const ConfusionMatrix& cm) {
  Metrics m;
  auto ratio = [](std::uint64_t num, std::uint64_t den, double& out, bool& flag) {
    if (den == 0) {
      out = 0.0;
      flag = true;
    } else {
      out = static_cast<double>(num) / static_cast<double>(den);
    }
  };
  ratio(cm.tp + cm.tn, cm.total(), m.accuracy, m.accuracy_degenerate);
  ratio(cm.tp, cm.tp + cm.fp, m.precision, m.precision_degenerate);
  ratio(cm.tp, cm.tp + cm.fn, m.recall, m.recall_degenerate);
  if (m.precision + m.recall == 0.0) {
    m.f1 = 0.0;
    m.f1_degenerate = true;
  } else {
    m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
  }
  return m;
}

}  // namespace agewatch
