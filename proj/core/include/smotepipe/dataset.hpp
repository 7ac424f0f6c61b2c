#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "smotepipe/matrix.hpp"

namespace smotepipe {

using Label = std::size_t;

/// Feature matrix plus integer class labels.
///
/// Rows are samples; columns are real-valued features, typically the class
/// probability vector emitted by an upstream image classifier. A Dataset is
/// immutable once built through `make` and safe to share between threads.
class Dataset {
 public:
  Dataset() = default;

  /// Validates and builds a dataset. Throws DataError when a label is out of
  /// range, a feature is non-finite, class names are empty or duplicated,
  /// fewer than two classes are named, or the matrix is empty.
  static Dataset make(Matrix features, std::vector<Label> labels,
                      std::vector<std::string> class_names,
                      std::vector<std::string> feature_names = {});

  const Matrix& features() const noexcept { return features_; }
  std::span<const Label> labels() const noexcept { return labels_; }
  const std::vector<std::string>& class_names() const noexcept { return class_names_; }
  const std::vector<std::string>& feature_names() const noexcept { return feature_names_; }

  std::size_t rows() const noexcept { return features_.rows(); }
  std::size_t dims() const noexcept { return features_.cols(); }
  std::size_t num_classes() const noexcept { return class_names_.size(); }

  std::span<const double> row(std::size_t i) const { return features_.row(i); }
  Label label(std::size_t i) const { return labels_[i]; }

  /// Rows `indices` in the given order, sharing class and feature names.
  Dataset subset(std::span<const std::size_t> indices) const;

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  Matrix features_;
  std::vector<Label> labels_;
  std::vector<std::string> class_names_;
  std::vector<std::string> feature_names_;
};

/// Samples per class, indexed by label.
struct ClassDistribution {
  std::vector<std::size_t> counts;

  std::size_t total() const;
  std::size_t num_classes() const noexcept { return counts.size(); }
  friend bool operator==(const ClassDistribution&, const ClassDistribution&) = default;
};

ClassDistribution class_counts(const Dataset& ds);

struct SplitSpec {
  double train_fraction = 0.75;
  double val_fraction = 0.125;
  double test_fraction = 0.125;
  std::uint64_t seed = 0;
};

struct Split {
  Dataset train;
  Dataset val;
  Dataset test;
};

/// Per-class allocation: train gets floor(n_c * train_fraction), val gets
/// floor(n_c * val_fraction), test gets the remainder. Which rows land where
/// is decided by a seeded shuffle of each class; each output keeps the
/// original relative row order. Throws ConfigError for an invalid SplitSpec
/// and DataError when a class cannot populate every nonzero split.
///
/// An empty validation split (val_fraction == 0) is returned as a
/// default-constructed Dataset.
Split stratified_split(const Dataset& ds, const SplitSpec& spec);

/// Per-class allocation sizes used by stratified_split.
struct SplitSizes {
  std::size_t train = 0;
  std::size_t val = 0;
  std::size_t test = 0;
};
SplitSizes split_sizes(std::size_t class_count, const SplitSpec& spec);

void validate_split_spec(const SplitSpec& spec);

/// Reads a comma-separated file with a header line. The column named
/// `label_column` holds class label strings; all remaining columns are decimal
/// features, kept in header order. Class names are the distinct label strings
/// in lexicographic order. Errors name the offending line.
Dataset load_csv(const std::filesystem::path& path, const std::string& label_column = "label");
Dataset parse_csv(std::string_view content, const std::string& label_column = "label",
                  const std::string& source = "<memory>");

/// Writes the feature columns followed by a `label` column; values carry 17
/// significant digits.
void save_csv(const Dataset& ds, const std::filesystem::path& path,
              const std::string& label_column = "label");
std::string to_csv(const Dataset& ds, const std::string& label_column = "label");

/// Throws DataError unless every row sums to 1 within `tolerance` and has no
/// negative entry.
void require_simplex(const Dataset& ds, double tolerance = 1e-6);

}  // namespace smotepipe
