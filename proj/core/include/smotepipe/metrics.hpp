#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "smotepipe/dataset.hpp"

namespace smotepipe {

/// C x C counts; rows are actual classes, columns predicted classes.
class ConfusionMatrix {
 public:
  ConfusionMatrix() = default;
  explicit ConfusionMatrix(std::size_t num_classes, std::vector<std::string> class_names = {});

  std::size_t num_classes() const noexcept { return num_classes_; }
  const std::vector<std::string>& class_names() const noexcept { return class_names_; }

  std::uint64_t at(std::size_t actual, std::size_t predicted) const {
    return counts_[actual * num_classes_ + predicted];
  }
  std::uint64_t& at(std::size_t actual, std::size_t predicted) {
    return counts_[actual * num_classes_ + predicted];
  }
  std::uint64_t total() const;
  std::uint64_t trace() const;

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;

 private:
  std::size_t num_classes_ = 0;
  std::vector<std::uint64_t> counts_;
  std::vector<std::string> class_names_;
};

/// Throws DataError on empty or unequal-length inputs and on labels >= C.
ConfusionMatrix confusion_matrix(std::span<const Label> y_true, std::span<const Label> y_pred,
                                 std::size_t num_classes, std::vector<std::string> class_names = {});

struct OneVsRest {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;
  friend bool operator==(const OneVsRest&, const OneVsRest&) = default;
};

/// Treats class `c` as positive and every other class as negative.
OneVsRest one_vs_rest_counts(const ConfusionMatrix& cm, std::size_t c);

enum class Averaging { kMicro, kMacro };
std::string to_string(Averaging averaging);
Averaging parse_averaging(const std::string& text);

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double specificity = 0.0;
  std::uint64_t support = 0;
};

struct MetricsReport {
  Averaging averaging = Averaging::kMacro;
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double specificity = 0.0;
  std::vector<ClassMetrics> per_class;
  /// Set when some per-class ratio had a zero denominator and was taken as 0.
  bool zero_division = false;

  /// accuracy, precision, recall, f1, specificity as fractions.
  std::array<double, 5> values() const { return {accuracy, precision, recall, f1, specificity}; }
};

/// Accuracy is trace / total. Dividing the summed true positives by the
/// summed one-vs-rest TP+TN+FP+FN instead would divide by C times the sample
/// count and cap accuracy at 1/C.
///
/// Micro averaging pools TP/FP/FN/TN across classes; macro averaging takes the
/// unweighted mean of per-class precision, recall and specificity. In both
/// cases F1 is the harmonic mean of the averaged precision and recall.
MetricsReport compute_metrics(const ConfusionMatrix& cm, Averaging averaging = Averaging::kMacro);

inline constexpr std::array<const char*, 5> kMetricShortNames = {"Ac", "Pr", "Rc", "F1", "Sp"};

/// Differences in percentage points between two reports. Both sides are
/// rounded to two decimals before subtracting, so values are kept as integer
/// hundredths of a percent.
struct DeltaReport {
  std::array<std::int64_t, 5> baseline{};
  std::array<std::int64_t, 5> improved{};

  std::int64_t delta_hundredths(std::size_t metric) const { return improved[metric] - baseline[metric]; }
  double delta(std::size_t metric) const { return static_cast<double>(delta_hundredths(metric)) / 100.0; }
};

/// Throws ConfigError if the averagings differ.
DeltaReport delta_report(const MetricsReport& baseline, const MetricsReport& improved);
/// Inputs already in percent, ordered Ac, Pr, Rc, F1, Sp.
DeltaReport delta_report_percent(const std::array<double, 5>& baseline,
                                 const std::array<double, 5>& improved);

std::int64_t to_hundredths(double percent);
/// Renders hundredths as a decimal with two places, e.g. -109 -> "-1.09".
std::string format_hundredths(std::int64_t value, bool show_plus = false);

std::string format_delta_report(const DeltaReport& report);

/// Aligned table with columns Model, Ac, Pr, Rc, F1, Sp in percent.
std::string format_metrics_table(const std::vector<std::pair<std::string, MetricsReport>>& rows);
std::string format_per_class_table(const MetricsReport& report,
                                   const std::vector<std::string>& class_names);

/// Single-row summary: model,averaging,accuracy,precision,recall,f1,specificity.
std::string metrics_csv(const std::string& model_name, const MetricsReport& report);
/// Parses metrics_csv output; per-class data is not included.
std::pair<std::string, MetricsReport> parse_metrics_csv(std::string_view content,
                                                        const std::string& source);
std::string per_class_csv(const MetricsReport& report, const std::vector<std::string>& class_names);

std::string confusion_csv(const ConfusionMatrix& cm);
std::string confusion_grid(const ConfusionMatrix& cm);

}  // namespace smotepipe
