#include "smotepipe/metrics.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include "smotepipe/error.hpp"
#include "smotepipe/text.hpp"

namespace smotepipe {

ConfusionMatrix::ConfusionMatrix(std::size_t num_classes, std::vector<std::string> class_names)
    : num_classes_(num_classes), counts_(num_classes * num_classes, 0),
      class_names_(std::move(class_names)) {
  if (class_names_.empty()) {
    for (std::size_t c = 0; c < num_classes; ++c) class_names_.push_back(std::to_string(c));
  }
  if (class_names_.size() != num_classes) throw DataError("class name count does not match C");
}

std::uint64_t ConfusionMatrix::total() const {
  std::uint64_t s = 0;
  for (const auto v : counts_) s += v;
  return s;
}

std::uint64_t ConfusionMatrix::trace() const {
  std::uint64_t s = 0;
  for (std::size_t c = 0; c < num_classes_; ++c) s += at(c, c);
  return s;
}

ConfusionMatrix confusion_matrix(std::span<const Label> y_true, std::span<const Label> y_pred,
                                 std::size_t num_classes, std::vector<std::string> class_names) {
  if (y_true.empty()) throw DataError("confusion matrix needs at least one sample");
  if (y_true.size() != y_pred.size()) {
    throw DataError("label length mismatch: " + std::to_string(y_true.size()) + " actual vs " +
                    std::to_string(y_pred.size()) + " predicted");
  }
  ConfusionMatrix cm(num_classes, std::move(class_names));
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    if (y_true[i] >= num_classes || y_pred[i] >= num_classes) {
      throw DataError("label out of range at position " + std::to_string(i));
    }
    ++cm.at(y_true[i], y_pred[i]);
  }
  return cm;
}

OneVsRest one_vs_rest_counts(const ConfusionMatrix& cm, std::size_t c) {
  OneVsRest out;
  std::uint64_t row = 0;
  std::uint64_t col = 0;
  for (std::size_t k = 0; k < cm.num_classes(); ++k) {
    row += cm.at(c, k);
    col += cm.at(k, c);
  }
  out.tp = cm.at(c, c);
  out.fn = row - out.tp;
  out.fp = col - out.tp;
  out.tn = cm.total() - out.tp - out.fp - out.fn;
  return out;
}

std::string to_string(Averaging averaging) {
  return averaging == Averaging::kMicro ? "micro" : "macro";
}

Averaging parse_averaging(const std::string& text) {
  if (text == "micro") return Averaging::kMicro;
  if (text == "macro") return Averaging::kMacro;
  throw ConfigError("unknown averaging '" + text + "' (expected macro or micro)");
}

namespace {

double ratio(std::uint64_t num, std::uint64_t den, bool& zero_division) {
  if (den == 0) {
    zero_division = true;
    return 0.0;
  }
  return static_cast<double>(num) / static_cast<double>(den);
}

double harmonic(double p, double r) { return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0; }

}  // namespace

MetricsReport compute_metrics(const ConfusionMatrix& cm, Averaging averaging) {
  const std::uint64_t total = cm.total();
  if (cm.num_classes() == 0 || total == 0) throw DataError("confusion matrix is empty");

  MetricsReport report;
  report.averaging = averaging;
  report.accuracy = static_cast<double>(cm.trace()) / static_cast<double>(total);

  OneVsRest pooled;
  double sum_p = 0.0;
  double sum_r = 0.0;
  double sum_sp = 0.0;
  bool zero_division = false;
  for (std::size_t c = 0; c < cm.num_classes(); ++c) {
    const OneVsRest o = one_vs_rest_counts(cm, c);
    pooled.tp += o.tp;
    pooled.fp += o.fp;
    pooled.fn += o.fn;
    pooled.tn += o.tn;

    ClassMetrics m;
    m.precision = ratio(o.tp, o.tp + o.fp, zero_division);
    m.recall = ratio(o.tp, o.tp + o.fn, zero_division);
    m.specificity = ratio(o.tn, o.tn + o.fp, zero_division);
    m.f1 = harmonic(m.precision, m.recall);
    m.support = o.tp + o.fn;
    report.per_class.push_back(m);
    sum_p += m.precision;
    sum_r += m.recall;
    sum_sp += m.specificity;
  }

  if (averaging == Averaging::kMicro) {
    bool pooled_zero = false;
    report.precision = ratio(pooled.tp, pooled.tp + pooled.fp, pooled_zero);
    report.recall = ratio(pooled.tp, pooled.tp + pooled.fn, pooled_zero);
    report.specificity = ratio(pooled.tn, pooled.tn + pooled.fp, pooled_zero);
    report.zero_division = pooled_zero;
  } else {
    const double n = static_cast<double>(cm.num_classes());
    report.precision = sum_p / n;
    report.recall = sum_r / n;
    report.specificity = sum_sp / n;
    report.zero_division = zero_division;
  }
  report.f1 = harmonic(report.precision, report.recall);
  return report;
}

std::int64_t to_hundredths(double percent) {
  return static_cast<std::int64_t>(std::llround(percent * 100.0));
}

std::string format_hundredths(std::int64_t value, bool show_plus) {
  const bool negative = value < 0;
  const std::uint64_t mag = static_cast<std::uint64_t>(negative ? -value : value);
  std::string frac = std::to_string(mag % 100);
  if (frac.size() < 2) frac.insert(0, "0");
  std::string out = std::to_string(mag / 100) + "." + frac;
  if (negative) return "-" + out;
  return show_plus ? "+" + out : out;
}

DeltaReport delta_report_percent(const std::array<double, 5>& baseline,
                                 const std::array<double, 5>& improved) {
  DeltaReport out;
  for (std::size_t k = 0; k < 5; ++k) {
    if (!std::isfinite(baseline[k]) || !std::isfinite(improved[k])) {
      throw DataError("metric values must be finite");
    }
    out.baseline[k] = to_hundredths(baseline[k]);
    out.improved[k] = to_hundredths(improved[k]);
  }
  return out;
}

DeltaReport delta_report(const MetricsReport& baseline, const MetricsReport& improved) {
  if (baseline.averaging != improved.averaging) {
    throw ConfigError("cannot compare " + to_string(baseline.averaging) + " and " +
                      to_string(improved.averaging) + " averaged reports");
  }
  std::array<double, 5> b{};
  std::array<double, 5> i{};
  for (std::size_t k = 0; k < 5; ++k) {
    b[k] = baseline.values()[k] * 100.0;
    i[k] = improved.values()[k] * 100.0;
  }
  return delta_report_percent(b, i);
}

std::string format_delta_report(const DeltaReport& report) {
  std::ostringstream out;
  out << std::left << std::setw(8) << "metric" << std::right << std::setw(10) << "baseline"
      << std::setw(10) << "improved" << std::setw(10) << "delta" << '\n';
  for (std::size_t k = 0; k < 5; ++k) {
    out << std::left << std::setw(8) << kMetricShortNames[k] << std::right << std::setw(10)
        << format_hundredths(report.baseline[k]) << std::setw(10)
        << format_hundredths(report.improved[k]) << std::setw(10)
        << format_hundredths(report.delta_hundredths(k), true) << '\n';
  }
  return out.str();
}

std::string format_metrics_table(const std::vector<std::pair<std::string, MetricsReport>>& rows) {
  std::size_t width = 10;
  for (const auto& [name, _] : rows) width = std::max(width, name.size() + 2);
  std::ostringstream out;
  out << std::left << std::setw(static_cast<int>(width)) << "Model";
  for (const char* m : kMetricShortNames) out << std::right << std::setw(9) << (std::string(m) + " (%)");
  out << '\n';
  for (const auto& [name, report] : rows) {
    out << std::left << std::setw(static_cast<int>(width)) << name;
    for (const double v : report.values()) {
      out << std::right << std::setw(9) << format_hundredths(to_hundredths(v * 100.0));
    }
    out << '\n';
  }
  return out.str();
}

std::string format_per_class_table(const MetricsReport& report,
                                   const std::vector<std::string>& class_names) {
  std::size_t width = 8;
  for (const auto& n : class_names) width = std::max(width, n.size() + 2);
  std::ostringstream out;
  out << std::left << std::setw(static_cast<int>(width)) << "Class" << std::right << std::setw(9)
      << "Pr (%)" << std::setw(9) << "Rc (%)" << std::setw(9) << "F1 (%)" << std::setw(9)
      << "Sp (%)" << std::setw(9) << "Support" << '\n';
  for (std::size_t c = 0; c < report.per_class.size(); ++c) {
    const ClassMetrics& m = report.per_class[c];
    const std::string name = c < class_names.size() ? class_names[c] : std::to_string(c);
    out << std::left << std::setw(static_cast<int>(width)) << name << std::right;
    for (const double v : {m.precision, m.recall, m.f1, m.specificity}) {
      out << std::setw(9) << format_hundredths(to_hundredths(v * 100.0));
    }
    out << std::setw(9) << m.support << '\n';
  }
  return out.str();
}

std::string metrics_csv(const std::string& model_name, const MetricsReport& report) {
  std::string out = "model,averaging,accuracy,precision,recall,f1,specificity\n";
  out += model_name + "," + to_string(report.averaging);
  for (const double v : report.values()) out += "," + text::format_double(v);
  out += '\n';
  return out;
}

std::pair<std::string, MetricsReport> parse_metrics_csv(std::string_view content,
                                                        const std::string& source) {
  const auto lines = text::split(text::trim(content), '\n');
  if (lines.size() < 2) throw DataError(source + ": expected a header and one data row");
  const auto cells = text::split(text::trim(lines[1]), ',');
  if (cells.size() != 7) throw DataError(source + ": expected 7 columns");
  MetricsReport report;
  report.averaging = parse_averaging(std::string(text::trim(cells[1])));
  std::array<double, 5> v{};
  for (std::size_t k = 0; k < 5; ++k) {
    const auto parsed = text::parse_double(cells[k + 2]);
    if (!parsed) throw DataError(source + ": invalid metric value '" + cells[k + 2] + "'");
    v[k] = *parsed;
  }
  report.accuracy = v[0];
  report.precision = v[1];
  report.recall = v[2];
  report.f1 = v[3];
  report.specificity = v[4];
  return {std::string(text::trim(cells[0])), report};
}

std::string per_class_csv(const MetricsReport& report, const std::vector<std::string>& class_names) {
  std::string out = "class,precision,recall,f1,specificity,support\n";
  for (std::size_t c = 0; c < report.per_class.size(); ++c) {
    const ClassMetrics& m = report.per_class[c];
    out += (c < class_names.size() ? class_names[c] : std::to_string(c)) + ",";
    out += text::format_double(m.precision) + "," + text::format_double(m.recall) + "," +
           text::format_double(m.f1) + "," + text::format_double(m.specificity) + "," +
           std::to_string(m.support) + "\n";
  }
  return out;
}

std::string confusion_csv(const ConfusionMatrix& cm) {
  std::string out = "actual\\predicted";
  for (const auto& n : cm.class_names()) out += "," + n;
  out += '\n';
  for (std::size_t a = 0; a < cm.num_classes(); ++a) {
    out += cm.class_names()[a];
    for (std::size_t p = 0; p < cm.num_classes(); ++p) out += "," + std::to_string(cm.at(a, p));
    out += '\n';
  }
  return out;
}

std::string confusion_grid(const ConfusionMatrix& cm) {
  std::size_t name_w = 6;
  std::size_t cell_w = 6;
  for (const auto& n : cm.class_names()) {
    name_w = std::max(name_w, n.size() + 2);
    cell_w = std::max(cell_w, n.size() + 2);
  }
  std::ostringstream out;
  out << std::left << std::setw(static_cast<int>(name_w)) << "actual" << std::right;
  for (const auto& n : cm.class_names()) out << std::setw(static_cast<int>(cell_w)) << n;
  out << '\n';
  for (std::size_t a = 0; a < cm.num_classes(); ++a) {
    out << std::left << std::setw(static_cast<int>(name_w)) << cm.class_names()[a] << std::right;
    for (std::size_t p = 0; p < cm.num_classes(); ++p) {
      out << std::setw(static_cast<int>(cell_w)) << cm.at(a, p);
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace smotepipe
