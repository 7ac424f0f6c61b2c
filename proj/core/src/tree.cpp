#include "smotepipe/tree.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>
#include <utility>

#include "smotepipe/error.hpp"

namespace smotepipe {

std::string to_string(SplitMode mode) { return mode == SplitMode::kBest ? "best" : "random"; }

SplitMode parse_split_mode(const std::string& text) {
  if (text == "best") return SplitMode::kBest;
  if (text == "random") return SplitMode::kRandom;
  throw ConfigError("unknown split mode '" + text + "' (expected best or random)");
}

std::string to_string(ForestKind kind) {
  return kind == ForestKind::kRandomForest ? "random-forest" : "extra-trees";
}

ForestKind parse_forest_kind(const std::string& text) {
  if (text == "random-forest") return ForestKind::kRandomForest;
  if (text == "extra-trees") return ForestKind::kExtraTrees;
  throw ConfigError("unknown forest kind '" + text + "'");
}

double gini(std::span<const double> class_weight_totals) {
  double total = 0.0;
  for (const double v : class_weight_totals) total += v;
  if (total <= 0.0) return 0.0;
  double sq = 0.0;
  for (const double v : class_weight_totals) sq += (v / total) * (v / total);
  return 1.0 - sq;
}

std::size_t TreeModel::depth() const {
  if (nodes.empty()) return 0;
  std::size_t deepest = 0;
  std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 0}};
  while (!stack.empty()) {
    const auto [i, d] = stack.back();
    stack.pop_back();
    deepest = std::max(deepest, d);
    if (!nodes[i].leaf) {
      stack.emplace_back(i + 1, d + 1);
      stack.emplace_back(nodes[i].right, d + 1);
    }
  }
  return deepest;
}

std::size_t TreeModel::leaf_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes.begin(), nodes.end(), [](const TreeNode& n) { return n.leaf; }));
}

namespace {

// W - sum_c T_c^2 / W, i.e. W times the Gini impurity of the totals.
double scaled_gini(std::span<const double> totals) {
  double w = 0.0;
  double sq = 0.0;
  for (const double v : totals) {
    w += v;
    sq += v * v;
  }
  return w > 0.0 ? w - sq / w : 0.0;
}

struct Candidate {
  bool valid = false;
  double impurity = 0.0;
  double threshold = 0.0;
  std::size_t feature = 0;
};

class TreeBuilder {
 public:
  TreeBuilder(const Dataset& ds, const ClassWeights& weights, const TreeParams& params, Rng& rng,
              TreeModel& out)
      : ds_(ds), weights_(weights), params_(params), rng_(rng), out_(out) {
    feature_pool_.resize(ds.dims());
    std::iota(feature_pool_.begin(), feature_pool_.end(), std::size_t{0});
  }

  void grow(std::vector<std::size_t>& rows, std::size_t lo, std::size_t hi, std::size_t depth) {
    const std::size_t num_classes = ds_.num_classes();
    std::vector<double> totals(num_classes, 0.0);
    std::vector<std::size_t> counts(num_classes, 0);
    for (std::size_t k = lo; k < hi; ++k) {
      const Label y = ds_.label(rows[k]);
      totals[y] += weights_.w[y];
      ++counts[y];
    }
    const auto populated =
        std::count_if(counts.begin(), counts.end(), [](std::size_t n) { return n > 0; });
    const std::size_t n = hi - lo;

    Candidate best;
    if (populated > 1 && depth < params_.max_depth && n >= 2 * params_.min_samples_leaf) {
      best = find_split(rows, lo, hi, totals);
    }
    if (!best.valid) {
      TreeNode leaf;
      leaf.leaf = true;
      double w = 0.0;
      for (const double v : totals) w += v;
      leaf.proba.resize(num_classes);
      for (std::size_t c = 0; c < num_classes; ++c) leaf.proba[c] = totals[c] / w;
      out_.nodes.push_back(std::move(leaf));
      return;
    }

    const auto mid_it = std::stable_partition(
        rows.begin() + static_cast<std::ptrdiff_t>(lo), rows.begin() + static_cast<std::ptrdiff_t>(hi),
        [&](std::size_t r) { return ds_.row(r)[best.feature] <= best.threshold; });
    const auto mid = static_cast<std::size_t>(mid_it - rows.begin());

    const std::size_t index = out_.nodes.size();
    TreeNode split;
    split.leaf = false;
    split.feature = best.feature;
    split.threshold = best.threshold;
    out_.nodes.push_back(std::move(split));
    grow(rows, lo, mid, depth + 1);
    out_.nodes[index].right = out_.nodes.size();
    grow(rows, mid, hi, depth + 1);
  }

 private:
  std::vector<std::size_t> candidate_features() {
    const std::size_t d = feature_pool_.size();
    const std::size_t m = params_.max_features == 0 ? d : std::min(params_.max_features, d);
    if (m == d) return feature_pool_;
    // Partial Fisher-Yates over the pool; the pool's order carries over
    // between nodes, which is fine because it only feeds further shuffles.
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t j = i + rng_.uniform_index(d - i);
      std::swap(feature_pool_[i], feature_pool_[j]);
    }
    std::vector<std::size_t> chosen(feature_pool_.begin(), feature_pool_.begin() + static_cast<std::ptrdiff_t>(m));
    std::sort(chosen.begin(), chosen.end());
    return chosen;
  }

  void consider(Candidate& best, double impurity, double threshold, std::size_t feature,
                double eps) {
    if (!best.valid || impurity < best.impurity - eps ||
        (std::abs(impurity - best.impurity) <= eps && threshold < best.threshold)) {
      best = {true, impurity, threshold, feature};
    }
  }

  Candidate find_split(const std::vector<std::size_t>& rows, std::size_t lo, std::size_t hi,
                       const std::vector<double>& totals) {
    const std::size_t num_classes = totals.size();
    const std::size_t n = hi - lo;
    const std::size_t min_leaf = std::max<std::size_t>(params_.min_samples_leaf, 1);
    double node_weight = 0.0;
    for (const double v : totals) node_weight += v;
    const double eps = 1e-12 * node_weight;

    Candidate best;
    std::vector<double> left(num_classes);
    std::vector<double> right(num_classes);
    std::vector<std::pair<double, std::size_t>> sorted(n);

    for (const std::size_t f : candidate_features()) {
      if (params_.split_mode == SplitMode::kBest) {
        for (std::size_t k = 0; k < n; ++k) {
          const std::size_t r = rows[lo + k];
          sorted[k] = {ds_.row(r)[f], r};
        }
        std::sort(sorted.begin(), sorted.end());
        std::fill(left.begin(), left.end(), 0.0);
        for (std::size_t k = 0; k + 1 < n; ++k) {
          const Label y = ds_.label(sorted[k].second);
          left[y] += weights_.w[y];
          const double a = sorted[k].first;
          const double b = sorted[k + 1].first;
          if (!(a < b)) continue;
          const std::size_t n_left = k + 1;
          if (n_left < min_leaf || n - n_left < min_leaf) continue;
          for (std::size_t c = 0; c < num_classes; ++c) right[c] = totals[c] - left[c];
          double threshold = a + (b - a) / 2.0;
          if (!(threshold >= a && threshold < b)) threshold = a;
          consider(best, scaled_gini(left) + scaled_gini(right), threshold, f, eps);
        }
      } else {
        double lo_v = ds_.row(rows[lo])[f];
        double hi_v = lo_v;
        for (std::size_t k = lo; k < hi; ++k) {
          const double v = ds_.row(rows[k])[f];
          lo_v = std::min(lo_v, v);
          hi_v = std::max(hi_v, v);
        }
        if (!(lo_v < hi_v)) continue;
        const double threshold = rng_.uniform(lo_v, hi_v);
        std::fill(left.begin(), left.end(), 0.0);
        std::size_t n_left = 0;
        for (std::size_t k = lo; k < hi; ++k) {
          const std::size_t r = rows[k];
          if (ds_.row(r)[f] <= threshold) {
            const Label y = ds_.label(r);
            left[y] += weights_.w[y];
            ++n_left;
          }
        }
        if (n_left < min_leaf || n - n_left < min_leaf) continue;
        for (std::size_t c = 0; c < num_classes; ++c) right[c] = totals[c] - left[c];
        consider(best, scaled_gini(left) + scaled_gini(right), threshold, f, eps);
      }
    }
    return best;
  }

  const Dataset& ds_;
  const ClassWeights& weights_;
  const TreeParams& params_;
  Rng& rng_;
  TreeModel& out_;
  std::vector<std::size_t> feature_pool_;
};

}  // namespace

TreeModel fit_tree_rows(const Dataset& train, std::span<const std::size_t> rows,
                        const ClassWeights& weights, const TreeParams& params, Rng& rng) {
  if (weights.w.size() != train.num_classes()) throw DataError("class weight count mismatch");
  if (rows.empty()) throw DataError("cannot fit a tree on zero rows");
  TreeModel tree;
  tree.params = params;
  tree.num_classes = train.num_classes();
  tree.dims = train.dims();
  std::vector<std::size_t> work(rows.begin(), rows.end());
  TreeBuilder builder(train, weights, params, rng, tree);
  builder.grow(work, 0, work.size(), 0);
  return tree;
}

TreeModel fit_tree(const Dataset& train, const ClassWeights& weights, const TreeParams& params,
                   std::uint64_t seed) {
  std::vector<std::size_t> rows(train.rows());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  Rng rng(seed);
  return fit_tree_rows(train, rows, weights, params, rng);
}

std::span<const double> leaf_proba(const TreeModel& tree, std::span<const double> x) {
  std::size_t i = 0;
  while (!tree.nodes[i].leaf) {
    const TreeNode& node = tree.nodes[i];
    i = x[node.feature] <= node.threshold ? i + 1 : node.right;
  }
  return tree.nodes[i].proba;
}

namespace {

void check_dims(std::size_t expected, std::size_t actual) {
  if (expected != actual) {
    throw DataError("model expects " + std::to_string(expected) + " features, data has " +
                    std::to_string(actual));
  }
}

}  // namespace

Matrix predict_proba(const TreeModel& tree, const Matrix& x) {
  check_dims(tree.dims, x.cols());
  Matrix out(x.rows(), tree.num_classes);
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const auto p = leaf_proba(tree, x.row(i));
    std::copy(p.begin(), p.end(), out.row(i).begin());
  }
  return out;
}

std::vector<Label> predict(const TreeModel& tree, const Matrix& x) {
  return argmax_rows(predict_proba(tree, x));
}

std::size_t default_features_per_split(std::size_t dims) {
  return static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(dims))));
}

ForestModel fit_forest(ForestKind kind, const Dataset& train, const ClassWeights& weights,
                       const ForestParams& params, std::uint64_t seed) {
  if (params.n_trees == 0) throw ConfigError("forest needs at least one tree");

  ForestModel forest;
  forest.kind = kind;
  forest.bootstrap = params.bootstrap.value_or(kind == ForestKind::kRandomForest);
  forest.seed = seed;
  forest.num_classes = train.num_classes();
  forest.dims = train.dims();
  forest.trees.resize(params.n_trees);

  TreeParams tree_params = params.tree;
  tree_params.split_mode = kind == ForestKind::kRandomForest ? SplitMode::kBest : SplitMode::kRandom;
  if (tree_params.max_features == 0) tree_params.max_features = default_features_per_split(train.dims());

  const auto build = [&](std::size_t t) {
    Rng rng(seed + t);
    std::vector<std::size_t> rows(train.rows());
    if (forest.bootstrap) {
      for (auto& r : rows) r = rng.uniform_index(train.rows());
    } else {
      std::iota(rows.begin(), rows.end(), std::size_t{0});
    }
    forest.trees[t] = fit_tree_rows(train, rows, weights, tree_params, rng);
  };

  std::size_t threads = params.threads;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, params.n_trees);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto worker = [&] {
    for (std::size_t t = next++; t < params.n_trees; t = next++) {
      try {
        build(t);
      } catch (...) {
        const std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  return forest;
}

Matrix predict_proba(const ForestModel& forest, const Matrix& x) {
  check_dims(forest.dims, x.cols());
  Matrix out(x.rows(), forest.num_classes, 0.0);
  for (std::size_t i = 0; i < x.rows(); ++i) {
    auto acc = out.row(i);
    for (const auto& tree : forest.trees) {
      const auto p = leaf_proba(tree, x.row(i));
      for (std::size_t c = 0; c < acc.size(); ++c) acc[c] += p[c];
    }
    for (auto& v : acc) v /= static_cast<double>(forest.trees.size());
  }
  return out;
}

std::vector<Label> predict(const ForestModel& forest, const Matrix& x) {
  return argmax_rows(predict_proba(forest, x));
}

}  // namespace smotepipe
