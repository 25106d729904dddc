#include "forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "rng.hpp"
#include "textio.hpp"

namespace agewatch {

namespace {

constexpr std::uint64_t kBootstrapTag = 0xb00757'4a9ULL;
constexpr std::uint64_t kKfoldShuffleTag = 0x6b666f6c64ULL;

int subset_size(const ForestConfig& cfg, std::size_t n_features) {
  int f = static_cast<int>(n_features);
  switch (cfg.features_per_split) {
    case FeatureSubset::All: return f;
    case FeatureSubset::Fixed: return std::clamp(cfg.fixed_features, 1, f);
    case FeatureSubset::Sqrt:
      return std::max(1, static_cast<int>(std::sqrt(static_cast<double>(f))));
  }
  return 1;
}

double gini(std::uint64_t c0, std::uint64_t c1) {
  double n = static_cast<double>(c0 + c1);
  if (n == 0.0) return 0.0;
  double p0 = static_cast<double>(c0) / n;
  double p1 = static_cast<double>(c1) / n;
  return 1.0 - p0 * p0 - p1 * p1;
}

class TreeBuilder {
 public:
  TreeBuilder(const std::vector<FeatureRow>& rows, const ForestConfig& cfg,
              std::size_t n_features, std::mt19937_64 rng)
      : rows_(rows), cfg_(cfg), n_features_(n_features), mtry_(subset_size(cfg, n_features)),
        rng_(std::move(rng)), feature_ids_(n_features) {
    std::iota(feature_ids_.begin(), feature_ids_.end(), 0);
  }

  Tree build(std::vector<std::size_t> sample) {
    indices_ = std::move(sample);
    tree_.nodes.clear();
    build_node(0, indices_.size(), 0);
    return std::move(tree_);
  }

 private:
  int build_node(std::size_t begin, std::size_t end, int depth) {
    std::uint64_t c0 = 0, c1 = 0;
    for (std::size_t i = begin; i < end; ++i) {
      (rows_[indices_[i]].label == 1 ? c1 : c0) += 1;
    }
    int node_id = static_cast<int>(tree_.nodes.size());
    tree_.nodes.push_back(TreeNode{-1, 0.0, -1, -1, c0, c1});

    std::size_t m = end - begin;
    if (depth >= cfg_.max_depth || c0 == 0 || c1 == 0 ||
        m < 2 * static_cast<std::size_t>(cfg_.min_samples_leaf)) {
      return node_id;
    }

    // Partial Fisher-Yates draw of the feature subset for this node.
    for (int j = 0; j < mtry_; ++j) {
      std::uniform_int_distribution<std::size_t> pick(static_cast<std::size_t>(j),
                                                      n_features_ - 1);
      std::swap(feature_ids_[static_cast<std::size_t>(j)], feature_ids_[pick(rng_)]);
    }

    double parent = gini(c0, c1);
    double best_gain = 1e-12;
    int best_feature = -1;
    double best_threshold = 0.0;

    sorted_.assign(indices_.begin() + static_cast<std::ptrdiff_t>(begin),
                   indices_.begin() + static_cast<std::ptrdiff_t>(end));
    std::size_t min_leaf = static_cast<std::size_t>(cfg_.min_samples_leaf);
    for (int j = 0; j < mtry_; ++j) {
      int f = feature_ids_[static_cast<std::size_t>(j)];
      std::sort(sorted_.begin(), sorted_.end(), [&](std::size_t a, std::size_t b) {
        double va = rows_[a].features[static_cast<std::size_t>(f)];
        double vb = rows_[b].features[static_cast<std::size_t>(f)];
        if (va != vb) return va < vb;
        return a < b;
      });
      std::uint64_t l1 = 0;
      for (std::size_t k = 1; k < m; ++k) {
        l1 += static_cast<std::uint64_t>(rows_[sorted_[k - 1]].label);
        double prev = rows_[sorted_[k - 1]].features[static_cast<std::size_t>(f)];
        double next = rows_[sorted_[k]].features[static_cast<std::size_t>(f)];
        if (prev == next) continue;
        if (k < min_leaf || m - k < min_leaf) continue;
        std::uint64_t nl = k, nr = m - k;
        std::uint64_t l0 = nl - l1;
        std::uint64_t r1 = c1 - l1, r0 = nr - r1;
        double weighted = (static_cast<double>(nl) * gini(l0, l1) +
                           static_cast<double>(nr) * gini(r0, r1)) /
                          static_cast<double>(m);
        double gain = parent - weighted;
        if (gain > best_gain) {
          double thr = 0.5 * (prev + next);
          if (thr >= next) thr = prev;  // adjacent doubles collapse the midpoint
          best_gain = gain;
          best_feature = f;
          best_threshold = thr;
        }
      }
    }

    if (best_feature < 0) return node_id;

    auto mid = std::stable_partition(
        indices_.begin() + static_cast<std::ptrdiff_t>(begin),
        indices_.begin() + static_cast<std::ptrdiff_t>(end), [&](std::size_t idx) {
          return rows_[idx].features[static_cast<std::size_t>(best_feature)] <=
                 best_threshold;
        });
    std::size_t split = static_cast<std::size_t>(mid - indices_.begin());
    if (split == begin || split == end) return node_id;  // numeric edge, keep as leaf

    tree_.nodes[static_cast<std::size_t>(node_id)].feature = best_feature;
    tree_.nodes[static_cast<std::size_t>(node_id)].threshold = best_threshold;
    int left = build_node(begin, split, depth + 1);
    tree_.nodes[static_cast<std::size_t>(node_id)].left = left;
    int right = build_node(split, end, depth + 1);
    tree_.nodes[static_cast<std::size_t>(node_id)].right = right;
    return node_id;
  }

  const std::vector<FeatureRow>& rows_;
  const ForestConfig& cfg_;
  std::size_t n_features_;
  int mtry_;
  std::mt19937_64 rng_;
  std::vector<int> feature_ids_;
  std::vector<std::size_t> indices_;
  std::vector<std::size_t> sorted_;
  Tree tree_;
};

int tree_vote(const Tree& tree, const std::vector<double>& features) {
  int node = 0;
  while (tree.nodes[static_cast<std::size_t>(node)].feature >= 0) {
    const TreeNode& nd = tree.nodes[static_cast<std::size_t>(node)];
    node = features[static_cast<std::size_t>(nd.feature)] <= nd.threshold ? nd.left : nd.right;
  }
  const TreeNode& leaf = tree.nodes[static_cast<std::size_t>(node)];
  return leaf.count1 >= leaf.count0 ? 1 : 0;
}

std::string subset_name(FeatureSubset s) {
  switch (s) {
    case FeatureSubset::Sqrt: return "sqrt";
    case FeatureSubset::All: return "all";
    case FeatureSubset::Fixed: return "fixed";
  }
  return "sqrt";
}

FeatureSubset subset_from_name(const std::string& s) {
  if (s == "sqrt") return FeatureSubset::Sqrt;
  if (s == "all") return FeatureSubset::All;
  if (s == "fixed") return FeatureSubset::Fixed;
  throw Error(errc::parse_error, "unknown feature subset '" + s + "'");
}

}  // namespace

std::vector<std::size_t> bootstrap_indices(std::uint64_t rng_seed, int tree_index,
                                           std::size_t n) {
  auto rng = make_rng(mix_seed(rng_seed ^ kBootstrapTag, static_cast<std::uint64_t>(tree_index)));
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::vector<std::size_t> out(n);
  for (auto& v : out) v = pick(rng);
  return out;
}

ForestModel train(const std::vector<FeatureRow>& rows, const ForestConfig& cfg) {
  if (rows.empty()) throw Error(errc::empty_training_set, "no rows");
  if (cfg.n_trees < 1 || cfg.max_depth < 1 || cfg.min_samples_leaf < 1) {
    throw Error(errc::invalid_argument, "forest hyperparameters must be positive");
  }
  std::size_t width = rows[0].features.size();
  if (width == 0) throw Error(errc::empty_training_set, "zero-width feature rows");
  bool saw0 = false, saw1 = false;
  for (const auto& r : rows) {
    if (r.features.size() != width) {
      throw Error(errc::feature_width_mismatch, "inconsistent row widths");
    }
    (r.label == 1 ? saw1 : saw0) = true;
  }

  ForestModel model;
  model.config = cfg;
  model.n_features = width;
  if (saw0) model.classes.push_back(0);
  if (saw1) model.classes.push_back(1);
  model.trees.reserve(static_cast<std::size_t>(cfg.n_trees));
  for (int t = 0; t < cfg.n_trees; ++t) {
    // Split and bootstrap randomness kept independent so the bootstrap of
    // tree t is reproducible on its own.
    TreeBuilder builder(rows, cfg, width,
                        make_rng(mix_seed(cfg.rng_seed, static_cast<std::uint64_t>(t))));
    model.trees.push_back(builder.build(bootstrap_indices(cfg.rng_seed, t, rows.size())));
  }
  return model;
}

int predict(const ForestModel& model, const std::vector<double>& features) {
  if (features.size() != model.n_features) {
    throw Error(errc::feature_width_mismatch,
                std::to_string(features.size()) + " features, model expects " +
                    std::to_string(model.n_features));
  }
  std::size_t votes1 = 0;
  for (const auto& tree : model.trees) {
    votes1 += static_cast<std::size_t>(tree_vote(tree, features));
  }
  return 2 * votes1 >= model.trees.size() ? 1 : 0;
}

std::vector<int> predict_all(const ForestModel& model, const std::vector<FeatureRow>& rows) {
  std::vector<int> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(predict(model, r.features));
  return out;
}

KfoldResult kfold_evaluate(const std::vector<FeatureRow>& rows, const ForestConfig& cfg,
                           int k) {
  if (k < 2) throw Error(errc::invalid_argument, "k must be >= 2");
  if (rows.size() < static_cast<std::size_t>(k)) {
    throw Error(errc::too_few_rows,
                std::to_string(rows.size()) + " rows for k=" + std::to_string(k));
  }

  std::vector<std::size_t> order(rows.size());
  std::iota(order.begin(), order.end(), 0);
  auto rng = make_rng(mix_seed(cfg.rng_seed, kKfoldShuffleTag));
  std::shuffle(order.begin(), order.end(), rng);

  KfoldResult result;
  result.k = k;
  std::size_t base = rows.size() / static_cast<std::size_t>(k);
  std::size_t extra = rows.size() % static_cast<std::size_t>(k);

  std::vector<int> pooled_pred, pooled_truth;
  std::size_t cursor = 0;
  for (int fold = 0; fold < k; ++fold) {
    std::size_t size = base + (static_cast<std::size_t>(fold) < extra ? 1 : 0);
    result.fold_sizes.push_back(size);
    std::size_t test_begin = cursor, test_end = cursor + size;
    cursor = test_end;

    std::vector<FeatureRow> train_rows;
    train_rows.reserve(rows.size() - size);
    for (std::size_t i = 0; i < order.size(); ++i) {
      if (i < test_begin || i >= test_end) train_rows.push_back(rows[order[i]]);
    }
    ForestModel model = train(train_rows, cfg);

    std::vector<int> preds, truths;
    preds.reserve(size);
    truths.reserve(size);
    for (std::size_t i = test_begin; i < test_end; ++i) {
      preds.push_back(predict(model, rows[order[i]].features));
      truths.push_back(rows[order[i]].label);
    }
    result.fold_metrics.push_back(derive(score(preds, truths)));
    pooled_pred.insert(pooled_pred.end(), preds.begin(), preds.end());
    pooled_truth.insert(pooled_truth.end(), truths.begin(), truths.end());
  }
  result.pooled = score(pooled_pred, pooled_truth);
  result.metrics = derive(result.pooled);
  return result;
}

std::string model_to_json(const ForestModel& model) {
  nlohmann::json j;
  j["format"] = "agewatch-forest";
  j["version"] = 1;
  j["n_features"] = model.n_features;
  j["classes"] = model.classes;
  j["config"] = {
      {"n_trees", model.config.n_trees},
      {"max_depth", model.config.max_depth},
      {"min_samples_leaf", model.config.min_samples_leaf},
      {"features_per_split", subset_name(model.config.features_per_split)},
      {"fixed_features", model.config.fixed_features},
      {"rng_seed", model.config.rng_seed},
  };
  nlohmann::json trees = nlohmann::json::array();
  for (const auto& tree : model.trees) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& n : tree.nodes) {
      nodes.push_back({n.feature, n.threshold, n.left, n.right, n.count0, n.count1});
    }
    trees.push_back({{"nodes", std::move(nodes)}});
  }
  j["trees"] = std::move(trees);
  return j.dump();
}

ForestModel model_from_json(const std::string& text, std::size_t expected_width) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(errc::parse_error, std::string("model JSON: ") + e.what());
  }
  try {
    if (j.value("format", "") != "agewatch-forest") {
      throw Error(errc::parse_error, "not an agewatch-forest file");
    }
    if (j.value("version", -1) != 1) {
      throw Error(errc::parse_error,
                  "unsupported model version " + j["version"].dump());
    }
    ForestModel model;
    model.n_features = j.at("n_features").get<std::size_t>();
    if (expected_width != 0 && model.n_features != expected_width) {
      throw Error(errc::feature_width_mismatch,
                  "model width " + std::to_string(model.n_features) + ", expected " +
                      std::to_string(expected_width));
    }
    model.classes = j.at("classes").get<std::vector<int>>();
    const auto& c = j.at("config");
    model.config.n_trees = c.at("n_trees").get<int>();
    model.config.max_depth = c.at("max_depth").get<int>();
    model.config.min_samples_leaf = c.at("min_samples_leaf").get<int>();
    model.config.features_per_split = subset_from_name(c.at("features_per_split"));
    model.config.fixed_features = c.at("fixed_features").get<int>();
    model.config.rng_seed = c.at("rng_seed").get<std::uint64_t>();
    for (const auto& jt : j.at("trees")) {
      Tree tree;
      for (const auto& jn : jt.at("nodes")) {
        TreeNode n;
        n.feature = jn.at(0).get<int>();
        n.threshold = jn.at(1).get<double>();
        n.left = jn.at(2).get<int>();
        n.right = jn.at(3).get<int>();
        n.count0 = jn.at(4).get<std::uint64_t>();
        n.count1 = jn.at(5).get<std::uint64_t>();
        if (n.feature >= static_cast<int>(model.n_features)) {
          throw Error(errc::parse_error, "node feature index out of range");
        }
        tree.nodes.push_back(n);
      }
      if (tree.nodes.empty()) throw Error(errc::parse_error, "empty tree");
      model.trees.push_back(std::move(tree));
    }
    if (model.trees.empty()) throw Error(errc::parse_error, "model has no trees");
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw Error(errc::parse_error, std::string("model JSON: ") + e.what());
  }
}

void save_model(const ForestModel& model, const std::string& path) {
  write_file(path, model_to_json(model) + "\n");
}

ForestModel load_model(const std::string& path, std::size_t expected_width) {
  return model_from_json(read_file(path), expected_width);
}

}  // namespace agewatch
