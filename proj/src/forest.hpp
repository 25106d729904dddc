#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "features.hpp"
#include "metrics.hpp"

namespace agewatch {

enum class FeatureSubset { Sqrt, All, Fixed };

struct ForestConfig {
  int n_trees = 100;
  int max_depth = 12;
  int min_samples_leaf = 2;
  FeatureSubset features_per_split = FeatureSubset::Sqrt;
  int fixed_features = 0;  // used when features_per_split == Fixed
  std::uint64_t rng_seed = 0;
};

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  std::uint64_t count0 = 0;  // class distribution of training rows at the node
  std::uint64_t count1 = 0;
};

struct Tree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root
};

struct ForestModel {
  ForestConfig config;
  std::size_t n_features = 0;
  std::vector<int> classes;  // observed at training, ascending
  std::vector<Tree> trees;
};

// Bootstrap resample used for tree t; exposed so tests can reproduce the
// exact training set of any tree without replaying the trainer.
std::vector<std::size_t> bootstrap_indices(std::uint64_t rng_seed, int tree_index,
                                           std::size_t n);

ForestModel train(const std::vector<FeatureRow>& rows, const ForestConfig& cfg);

// Majority vote over trees; ties go to class 1 (Aging).
int predict(const ForestModel& model, const std::vector<double>& features);

std::vector<int> predict_all(const ForestModel& model, const std::vector<FeatureRow>& rows);

struct KfoldResult {
  int k = 0;
  std::vector<std::size_t> fold_sizes;
  ConfusionMatrix pooled;
  Metrics metrics;
  std::vector<Metrics> fold_metrics;
};

// Seeded shuffle, then contiguous blocks; the first (n mod k) folds take the
// extra row. Metrics come from predictions pooled over all folds.
KfoldResult kfold_evaluate(const std::vector<FeatureRow>& rows, const ForestConfig& cfg,
                           int k = 5);

std::string model_to_json(const ForestModel& model);
ForestModel model_from_json(const std::string& text, std::size_t expected_width = 0);
void save_model(const ForestModel& model, const std::string& path);
ForestModel load_model(const std::string& path, std::size_t expected_width = 0);

}  // namespace agewatch
