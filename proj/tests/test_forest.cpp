#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "forest.hpp"

using namespace agewatch;

namespace {

FeatureRow row_of(std::vector<double> features, int label) {
  FeatureRow r;
  r.features = std::move(features);
  r.label = label;
  return r;
}

// Two Gaussian blobs separated along both axes with a wide margin.
std::vector<FeatureRow> blobs(std::size_t per_class, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> scatter(0.0, 0.4);
  std::vector<FeatureRow> rows;
  for (std::size_t i = 0; i < per_class; ++i) {
    rows.push_back(row_of({scatter(rng), scatter(rng)}, 0));
    rows.push_back(row_of({4.0 + scatter(rng), 4.0 + scatter(rng)}, 1));
  }
  return rows;
}

double gini_ref(std::uint64_t c0, std::uint64_t c1) {
  double n = static_cast<double>(c0 + c1);
  if (n == 0) return 0.0;
  double p0 = c0 / n, p1 = c1 / n;
  return 1.0 - p0 * p0 - p1 * p1;
}

}  // namespace

TEST_CASE("single-class data always predicts that class") {
  std::vector<FeatureRow> rows;
  for (int i = 0; i < 20; ++i) {
    rows.push_back(row_of({static_cast<double>(i), 1.0}, 1));
  }
  ForestConfig cfg;
  cfg.n_trees = 7;
  auto model = train(rows, cfg);
  CHECK(model.classes == std::vector<int>{1});
  CHECK(predict(model, {100.0, -5.0}) == 1);
  CHECK(predict(model, {-3.0, 0.0}) == 1);
}

TEST_CASE("separable blobs are learned exactly") {
  auto rows = blobs(100, 42);
  // Oracle separability first: the margin along axis 0 must be clean.
  double max0 = -1e9, min1 = 1e9;
  for (const auto& r : rows) {
    if (r.label == 0) max0 = std::max(max0, r.features[0]);
    if (r.label == 1) min1 = std::min(min1, r.features[0]);
  }
  REQUIRE(min1 - max0 >= 1.0);

  ForestConfig cfg;
  cfg.rng_seed = 3;
  auto model = train(rows, cfg);
  auto preds = predict_all(model, rows);
  for (std::size_t i = 0; i < rows.size(); ++i) CHECK(preds[i] == rows[i].label);
}

TEST_CASE("training is deterministic in seed and data") {
  auto rows = blobs(60, 9);
  ForestConfig cfg;
  cfg.rng_seed = 1234;
  auto a = train(rows, cfg);
  auto b = train(rows, cfg);
  CHECK(model_to_json(a) == model_to_json(b));
  CHECK(predict_all(a, rows) == predict_all(b, rows));

  cfg.rng_seed = 1235;
  auto c = train(rows, cfg);
  CHECK(model_to_json(a) != model_to_json(c));
}

TEST_CASE("prediction ignores tree order") {
  auto rows = blobs(40, 17);
  ForestConfig cfg;
  cfg.rng_seed = 5;
  cfg.n_trees = 15;
  auto model = train(rows, cfg);
  auto reference = predict_all(model, rows);
  ForestModel shuffled = model;
  std::mt19937_64 rng(2);
  std::shuffle(shuffled.trees.begin(), shuffled.trees.end(), rng);
  CHECK(predict_all(shuffled, rows) == reference);
}

TEST_CASE("vote mechanics on hand-built ensembles") {
  // Leaf-only trees so the vote is fully controlled.
  Tree yes;
  yes.nodes.push_back(TreeNode{-1, 0.0, -1, -1, 1, 5});
  Tree no;
  no.nodes.push_back(TreeNode{-1, 0.0, -1, -1, 5, 1});

  ForestModel single;
  single.n_features = 2;
  single.trees = {yes};
  CHECK(predict(single, {0.0, 0.0}) == 1);
  single.trees = {no};
  CHECK(predict(single, {0.0, 0.0}) == 0);

  ForestModel tied;
  tied.n_features = 2;
  tied.trees = {yes, no};
  CHECK(predict(tied, {0.0, 0.0}) == 1);  // ties go to the aging class

  ForestModel agree;
  agree.n_features = 2;
  agree.trees = {yes, yes, yes};
  CHECK(predict(agree, {0.0, 0.0}) == 1);

  CHECK_THROWS_AS(predict(tied, {0.0, 0.0, 0.0}), Error);
}

TEST_CASE("empty and malformed training input") {
  CHECK_THROWS_AS(train({}, {}), Error);
  std::vector<FeatureRow> rows = {row_of({1.0, 2.0}, 0), row_of({1.0}, 1)};
  CHECK_THROWS_AS(train(rows, {}), Error);
}

TEST_CASE("every chosen split beats all candidates it competed with") {
  auto rows = blobs(30, 31);
  // Blur the blobs so trees need several levels.
  std::mt19937_64 rng(8);
  std::normal_distribution<double> fuzz(0.0, 1.8);
  for (auto& r : rows) {
    r.features[0] += fuzz(rng);
    r.features[1] += fuzz(rng);
  }

  ForestConfig cfg;
  cfg.n_trees = 6;
  cfg.max_depth = 3;
  cfg.min_samples_leaf = 2;
  cfg.features_per_split = FeatureSubset::All;  // audit sees the full candidate set
  cfg.rng_seed = 77;
  auto model = train(rows, cfg);

  for (int t = 0; t < cfg.n_trees; ++t) {
    const Tree& tree = model.trees[static_cast<std::size_t>(t)];
    REQUIRE(tree.nodes.size() <= 100);

    // Reconstruct each node's training multiset by routing the tree's own
    // bootstrap sample from the root.
    auto sample = bootstrap_indices(cfg.rng_seed, t, rows.size());
    std::vector<std::vector<std::size_t>> node_rows(tree.nodes.size());
    node_rows[0] = sample;
    for (std::size_t id = 0; id < tree.nodes.size(); ++id) {
      const TreeNode& node = tree.nodes[id];
      if (node.feature < 0) continue;
      for (std::size_t idx : node_rows[id]) {
        bool goes_left =
            rows[idx].features[static_cast<std::size_t>(node.feature)] <= node.threshold;
        node_rows[static_cast<std::size_t>(goes_left ? node.left : node.right)].push_back(
            idx);
      }
    }

    for (std::size_t id = 0; id < tree.nodes.size(); ++id) {
      const TreeNode& node = tree.nodes[id];
      if (node.feature < 0) continue;
      const auto& members = node_rows[id];
      const TreeNode& l = tree.nodes[static_cast<std::size_t>(node.left)];
      const TreeNode& r = tree.nodes[static_cast<std::size_t>(node.right)];
      CHECK(l.count0 + l.count1 + r.count0 + r.count1 == members.size());

      double parent = gini_ref(node.count0, node.count1);
      double m = static_cast<double>(members.size());
      double realized = parent - (static_cast<double>(l.count0 + l.count1) *
                                      gini_ref(l.count0, l.count1) +
                                  static_cast<double>(r.count0 + r.count1) *
                                      gini_ref(r.count0, r.count1)) /
                                     m;

      // Exhaustive re-scan of every legal candidate on every feature.
      double best = 0.0;
      for (std::size_t f = 0; f < 2; ++f) {
        std::vector<std::size_t> order = members;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
          return rows[a].features[f] < rows[b].features[f];
        });
        std::uint64_t c1 = node.count1;
        std::uint64_t l1 = 0;
        for (std::size_t k = 1; k < order.size(); ++k) {
          l1 += static_cast<std::uint64_t>(rows[order[k - 1]].label);
          if (rows[order[k - 1]].features[f] == rows[order[k]].features[f]) continue;
          if (k < 2 || order.size() - k < 2) continue;  // min_samples_leaf
          std::uint64_t nl = k, nr = order.size() - k;
          std::uint64_t l0 = nl - l1, r1 = c1 - l1, r0 = nr - r1;
          double weighted = (static_cast<double>(nl) * gini_ref(l0, l1) +
                             static_cast<double>(nr) * gini_ref(r0, r1)) /
                            m;
          best = std::max(best, parent - weighted);
        }
      }
      CHECK(realized >= best - 1e-9);
    }
  }
}

TEST_CASE("fold sizes follow the remainder rule") {
  ForestConfig cfg;
  cfg.n_trees = 5;
  cfg.max_depth = 3;

  auto even = blobs(5, 3);  // 10 rows
  auto r10 = kfold_evaluate(even, cfg, 5);
  CHECK(r10.fold_sizes == std::vector<std::size_t>{2, 2, 2, 2, 2});

  auto odd = blobs(5, 3);
  odd.push_back(row_of({0.1, -0.2}, 0));  // 11 rows
  auto r11 = kfold_evaluate(odd, cfg, 5);
  CHECK(r11.fold_sizes == std::vector<std::size_t>{3, 2, 2, 2, 2});
  CHECK(r11.pooled.total() == 11);
  CHECK(r11.fold_metrics.size() == 5);

  CHECK_THROWS_AS(kfold_evaluate(even, cfg, 1), Error);
  CHECK_THROWS_AS(kfold_evaluate(blobs(2, 3), cfg, 5), Error);  // 4 rows, k=5
}

TEST_CASE("memorizable folds score essentially perfectly") {
  auto rows = blobs(60, 12);
  auto copy = rows;
  rows.insert(rows.end(), copy.begin(), copy.end());  // every test row has a twin
  ForestConfig cfg;
  cfg.rng_seed = 21;
  auto result = kfold_evaluate(rows, cfg, 5);
  CHECK(result.metrics.f1 >= 0.99);
}

TEST_CASE("serialization round-trips and rejects mismatches") {
  auto rows = blobs(25, 77);
  ForestConfig cfg;
  cfg.n_trees = 9;
  cfg.rng_seed = 8;
  auto model = train(rows, cfg);

  std::string text = model_to_json(model);
  ForestModel back = model_from_json(text, 2);
  CHECK(model_to_json(back) == text);
  CHECK(predict_all(back, rows) == predict_all(model, rows));

  CHECK_THROWS_AS(model_from_json(text, 7), Error);  // width mismatch
  std::string v2 = text;
  auto pos = v2.find("\"version\":1");
  REQUIRE(pos != std::string::npos);
  v2.replace(pos, 11, "\"version\":2");
  CHECK_THROWS_AS(model_from_json(v2, 2), Error);
  CHECK_THROWS_AS(model_from_json("{\"format\":\"other\"}", 0), Error);
  CHECK_THROWS_AS(model_from_json("not json at all", 0), Error);
}
