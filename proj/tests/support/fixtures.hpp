#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "smotepipe/dataset.hpp"
#include "smotepipe/linear.hpp"
#include "smotepipe/matrix.hpp"
#include "smotepipe/metrics.hpp"
#include "smotepipe/rng.hpp"

namespace smotepipe::support {

/// Two Gaussian blobs centred at (0,0) and (10,10), 50 points each, sigma 0.5.
inline Dataset separable_blobs(std::uint64_t seed = 0, std::size_t per_class = 50) {
  Rng rng(seed);
  Matrix x(2 * per_class, 2);
  std::vector<Label> y(2 * per_class);
  for (std::size_t i = 0; i < 2 * per_class; ++i) {
    const Label c = i < per_class ? 0 : 1;
    const double centre = c == 0 ? 0.0 : 10.0;
    x(i, 0) = centre + 0.5 * rng.normal();
    x(i, 1) = centre + 0.5 * rng.normal();
    y[i] = c;
  }
  return Dataset::make(std::move(x), std::move(y), {"a", "b"});
}

/// Random dataset with `num_classes` classes, each with at least `min_per_class` rows.
inline Dataset random_dataset(Rng& rng, std::size_t num_classes, std::size_t dims,
                              std::size_t min_per_class, std::size_t max_per_class) {
  std::vector<Label> y;
  for (Label c = 0; c < num_classes; ++c) {
    const std::size_t n = min_per_class + rng.uniform_index(max_per_class - min_per_class + 1);
    y.insert(y.end(), n, c);
  }
  rng.shuffle(std::span<Label>(y));
  Matrix x(y.size(), dims);
  for (auto& v : x.data()) v = rng.uniform(-5.0, 5.0);
  std::vector<std::string> names;
  for (std::size_t c = 0; c < num_classes; ++c) names.push_back("c" + std::to_string(c));
  return Dataset::make(std::move(x), std::move(y), std::move(names));
}

inline double accuracy(std::span<const Label> truth, std::span<const Label> pred) {
  std::size_t ok = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) ok += truth[i] == pred[i];
  return static_cast<double>(ok) / static_cast<double>(truth.size());
}

// ---------------------------------------------------------------------------
// Oracles. Each one recomputes a quantity by a route independent of the
// library implementation.
// ---------------------------------------------------------------------------

/// Sorts every other class member by (exact squared distance, row index) and
/// takes the first k.
inline std::vector<std::size_t> brute_force_knn(const Matrix& x, const std::vector<std::size_t>& rows,
                                                std::size_t query, std::size_t k) {
  std::vector<std::pair<long double, std::size_t>> all;
  for (const std::size_t r : rows) {
    if (r == query) continue;
    long double d = 0.0L;
    for (std::size_t j = 0; j < x.cols(); ++j) {
      const long double diff = static_cast<long double>(x(r, j)) - x(query, j);
      d += diff * diff;
    }
    all.emplace_back(std::sqrt(d), r);
  }
  std::sort(all.begin(), all.end());
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < std::min(k, all.size()); ++i) out.push_back(all[i].second);
  return out;
}

/// Per-sample tally of one-vs-rest counts, then the metric formulas written
/// out directly.
struct OracleMetrics {
  double accuracy, precision, recall, f1, specificity;
};

inline OracleMetrics brute_force_metrics(const std::vector<Label>& truth,
                                         const std::vector<Label>& pred, std::size_t num_classes,
                                         bool micro) {
  std::vector<double> tp(num_classes), fp(num_classes), fn(num_classes), tn(num_classes);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    correct += truth[i] == pred[i];
    for (std::size_t c = 0; c < num_classes; ++c) {
      const bool actual = truth[i] == c;
      const bool predicted = pred[i] == c;
      if (actual && predicted) tp[c] += 1;
      if (!actual && predicted) fp[c] += 1;
      if (actual && !predicted) fn[c] += 1;
      if (!actual && !predicted) tn[c] += 1;
    }
  }
  const auto safe = [](double a, double b) { return b == 0 ? 0.0 : a / b; };
  OracleMetrics m{};
  m.accuracy = static_cast<double>(correct) / static_cast<double>(truth.size());
  if (micro) {
    double stp = 0, sfp = 0, sfn = 0, stn = 0;
    for (std::size_t c = 0; c < num_classes; ++c) {
      stp += tp[c];
      sfp += fp[c];
      sfn += fn[c];
      stn += tn[c];
    }
    m.precision = safe(stp, stp + sfp);
    m.recall = safe(stp, stp + sfn);
    m.specificity = safe(stn, stn + sfp);
  } else {
    for (std::size_t c = 0; c < num_classes; ++c) {
      m.precision += safe(tp[c], tp[c] + fp[c]) / static_cast<double>(num_classes);
      m.recall += safe(tp[c], tp[c] + fn[c]) / static_cast<double>(num_classes);
      m.specificity += safe(tn[c], tn[c] + fp[c]) / static_cast<double>(num_classes);
    }
  }
  m.f1 = m.precision + m.recall == 0 ? 0.0 : 2 * m.precision * m.recall / (m.precision + m.recall);
  return m;
}

/// Relative error of the analytic gradient against central differences,
/// max over all parameters: |a - n| / max(1, |a|, |n|) with step h on the
/// loss evaluated through loss_and_gradient(...).loss only.
inline double gradient_check_error(const LinearModel& model, const Dataset& ds,
                                   const ClassWeights& weights, double l2, double h = 1e-6) {
  const LossGradient analytic = loss_and_gradient(model, ds, weights, l2);
  const auto loss_at = [&](const LinearModel& m) { return loss_and_gradient(m, ds, weights, l2).loss; };
  double worst = 0.0;
  const auto compare = [&](double a, double n) {
    const double scale = std::max({1.0, std::abs(a), std::abs(n)});
    worst = std::max(worst, std::abs(a - n) / scale);
  };
  for (std::size_t k = 0; k < model.weights.data().size(); ++k) {
    LinearModel plus = model;
    LinearModel minus = model;
    plus.weights.data()[k] += h;
    minus.weights.data()[k] -= h;
    compare(analytic.grad_weights.data()[k], (loss_at(plus) - loss_at(minus)) / (2 * h));
  }
  for (std::size_t c = 0; c < model.bias.size(); ++c) {
    LinearModel plus = model;
    LinearModel minus = model;
    plus.bias[c] += h;
    minus.bias[c] -= h;
    compare(analytic.grad_bias[c], (loss_at(plus) - loss_at(minus)) / (2 * h));
  }
  return worst;
}

/// Random parameter point for a model of the given shape.
inline LinearModel random_model(Rng& rng, LossKind loss, std::size_t num_classes, std::size_t dims) {
  LinearModel m = LinearModel::zeros(LinearKind::kLogistic, loss, num_classes, dims);
  if (loss == LossKind::kHinge) m.kind = LinearKind::kLinearSvm;
  for (auto& v : m.weights.data()) v = rng.uniform(-1.0, 1.0);
  for (auto& v : m.bias) v = rng.uniform(-1.0, 1.0);
  return m;
}

}  // namespace smotepipe::support
