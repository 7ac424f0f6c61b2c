#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "smotepipe/dataset.hpp"
#include "smotepipe/linear.hpp"
#include "smotepipe/matrix.hpp"
#include "smotepipe/rng.hpp"

namespace smotepipe {

enum class SplitMode {
  kBest,    // CART: exhaustive over midpoints of consecutive distinct values
  kRandom,  // extra-trees: one uniform threshold per candidate feature
};

std::string to_string(SplitMode mode);
SplitMode parse_split_mode(const std::string& text);

struct TreeParams {
  std::size_t max_depth = 12;
  std::size_t min_samples_leaf = 1;
  SplitMode split_mode = SplitMode::kBest;
  /// Candidate features drawn per node; 0 means all.
  std::size_t max_features = 0;

  friend bool operator==(const TreeParams&, const TreeParams&) = default;
};

/// Preorder node. Rows with x[feature] <= threshold go to `left`, which is
/// always the next node; `right` is stored explicitly.
struct TreeNode {
  bool leaf = true;
  std::size_t feature = 0;
  double threshold = 0.0;
  std::size_t right = 0;
  std::vector<double> proba;  // leaves only

  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

struct TreeModel {
  TreeParams params;
  std::size_t num_classes = 0;
  std::size_t dims = 0;
  std::vector<TreeNode> nodes;

  std::size_t depth() const;
  std::size_t leaf_count() const;

  friend bool operator==(const TreeModel&, const TreeModel&) = default;
};

/// Weighted Gini impurity 1 - sum_c p_c^2 of class weight totals.
double gini(std::span<const double> class_weight_totals);

/// Recursive binary splitting that minimises the sum of child weighted Gini
/// impurities, each child's impurity scaled by its weight total. Equal
/// impurities prefer the smaller threshold, then the smaller feature index.
/// Growth stops at a pure node, at max_depth, or when no split leaves
/// min_samples_leaf rows on both sides. Leaves store weighted class
/// frequencies.
TreeModel fit_tree(const Dataset& train, const ClassWeights& weights, const TreeParams& params,
                   std::uint64_t seed);

/// Fits on the rows listed in `rows` (duplicates allowed), drawing from `rng`.
TreeModel fit_tree_rows(const Dataset& train, std::span<const std::size_t> rows,
                        const ClassWeights& weights, const TreeParams& params, Rng& rng);

std::span<const double> leaf_proba(const TreeModel& tree, std::span<const double> x);
Matrix predict_proba(const TreeModel& tree, const Matrix& x);
std::vector<Label> predict(const TreeModel& tree, const Matrix& x);

enum class ForestKind { kRandomForest, kExtraTrees };

std::string to_string(ForestKind kind);
ForestKind parse_forest_kind(const std::string& text);

struct ForestParams {
  std::size_t n_trees = 100;
  /// Tree settings; split_mode is taken from the forest kind and
  /// max_features == 0 becomes ceil(sqrt(d)).
  TreeParams tree;
  /// Defaults to true for random-forest and false for extra-trees.
  std::optional<bool> bootstrap;
  /// Worker threads; 0 picks hardware concurrency. Results do not depend on it.
  std::size_t threads = 0;
};

struct ForestModel {
  ForestKind kind = ForestKind::kRandomForest;
  bool bootstrap = true;
  std::uint64_t seed = 0;
  std::size_t num_classes = 0;
  std::size_t dims = 0;
  std::vector<TreeModel> trees;

  friend bool operator==(const ForestModel&, const ForestModel&) = default;
};

std::size_t default_features_per_split(std::size_t dims);

/// Tree t is grown from its own generator seeded with seed + t. Random
/// forests draw a bootstrap sample of M rows first; extra-trees use every row.
ForestModel fit_forest(ForestKind kind, const Dataset& train, const ClassWeights& weights,
                       const ForestParams& params, std::uint64_t seed);

/// Mean of the trees' leaf probability vectors.
Matrix predict_proba(const ForestModel& forest, const Matrix& x);
std::vector<Label> predict(const ForestModel& forest, const Matrix& x);

}  // namespace smotepipe
