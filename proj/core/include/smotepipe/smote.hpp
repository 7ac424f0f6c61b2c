#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "smotepipe/dataset.hpp"

namespace smotepipe {

struct SmoteTarget {
  enum class Mode { kNotMajority, kToCount };
  Mode mode = Mode::kNotMajority;
  /// Used by kToCount: classes below this count are raised to it; larger
  /// classes are left as they are.
  std::size_t count = 0;

  static SmoteTarget not_majority() { return {}; }
  static SmoteTarget to_count(std::size_t n) { return {Mode::kToCount, n}; }

  /// Accepts "not-majority" or "to-count=N".
  static SmoteTarget parse(const std::string& text);
  std::string to_string() const;
};

struct SmoteParams {
  std::size_t k = 5;
  SmoteTarget target;
  std::uint64_t seed = 0;
};

/// The min(k, |class_rows| - 1) members of `class_rows` nearest to row
/// `query` of `x` in Euclidean distance, nearest first. `query` itself is
/// excluded; equal distances rank the smaller row index first.
std::vector<std::size_t> knn_within_class(const Matrix& x, std::span<const std::size_t> class_rows,
                                          std::size_t query, std::size_t k);

/// Oversamples every class below its target count. The output holds the
/// input rows unchanged and in order, followed by synthetic rows grouped by
/// class. Each synthetic row is x_i + lambda * (x_nn - x_i) with x_i drawn
/// uniformly from the class, x_nn drawn uniformly from its k nearest
/// same-class neighbours, and lambda uniform on [0,1). A class with a single
/// member is duplicated.
Dataset smote(const Dataset& train, const SmoteParams& params);

/// Per-class count table with before, after, and synthetic additions.
std::string resample_counts_report(const ClassDistribution& before, const ClassDistribution& after,
                                   const std::vector<std::string>& class_names = {});

}  // namespace smotepipe
