#include "smotepipe/naive_bayes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "smotepipe/error.hpp"

namespace smotepipe {
namespace {

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
};

Moments moments(std::vector<double>& values) {
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (const double v : values) sum += v;
  const double mean = sum / static_cast<double>(values.size());
  std::vector<double> sq(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double d = values[i] - mean;
    sq[i] = d * d;
  }
  std::sort(sq.begin(), sq.end());
  double ss = 0.0;
  for (const double v : sq) ss += v;
  return {mean, ss / static_cast<double>(values.size())};
}

}  // namespace

GaussianNBModel fit_gaussian_nb(const Dataset& train, double smoothing) {
  if (!(smoothing > 0.0)) throw ConfigError("naive Bayes smoothing must be positive");
  const std::size_t num_classes = train.num_classes();
  const std::size_t dims = train.dims();

  std::vector<std::vector<std::size_t>> by_class(num_classes);
  for (std::size_t i = 0; i < train.rows(); ++i) by_class[train.label(i)].push_back(i);
  for (std::size_t c = 0; c < num_classes; ++c) {
    if (by_class[c].empty()) {
      throw DataError("class '" + train.class_names()[c] + "' has no training samples");
    }
  }

  double max_variance = 0.0;
  std::vector<double> column(train.rows());
  for (std::size_t j = 0; j < dims; ++j) {
    for (std::size_t i = 0; i < train.rows(); ++i) column[i] = train.row(i)[j];
    max_variance = std::max(max_variance, moments(column).variance);
  }
  // A dataset of constant columns still needs a positive floor.
  const double floor = max_variance > 0.0 ? smoothing * max_variance : smoothing;

  GaussianNBModel model;
  model.means = Matrix(num_classes, dims);
  model.variances = Matrix(num_classes, dims);
  model.priors.resize(num_classes);
  model.variance_floor = floor;
  std::vector<double> values;
  for (std::size_t c = 0; c < num_classes; ++c) {
    const auto& rows = by_class[c];
    values.resize(rows.size());
    for (std::size_t j = 0; j < dims; ++j) {
      for (std::size_t k = 0; k < rows.size(); ++k) values[k] = train.row(rows[k])[j];
      const Moments m = moments(values);
      model.means(c, j) = m.mean;
      model.variances(c, j) = std::max(m.variance, floor);
    }
    model.priors[c] = static_cast<double>(rows.size()) / static_cast<double>(train.rows());
  }
  return model;
}

Matrix joint_log_likelihood(const GaussianNBModel& model, const Matrix& x) {
  if (x.cols() != model.dims()) {
    throw DataError("model expects " + std::to_string(model.dims()) + " features, data has " +
                    std::to_string(x.cols()));
  }
  const double log_two_pi = std::log(2.0 * std::numbers::pi);
  Matrix out(x.rows(), model.num_classes());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const auto row = x.row(i);
    for (std::size_t c = 0; c < model.num_classes(); ++c) {
      double ll = std::log(model.priors[c]);
      for (std::size_t j = 0; j < row.size(); ++j) {
        const double var = model.variances(c, j);
        const double d = row[j] - model.means(c, j);
        ll -= 0.5 * (log_two_pi + std::log(var) + d * d / var);
      }
      out(i, c) = ll;
    }
  }
  return out;
}

Matrix predict_proba(const GaussianNBModel& model, const Matrix& x) {
  return softmax_rows(joint_log_likelihood(model, x));
}

std::vector<Label> predict(const GaussianNBModel& model, const Matrix& x) {
  return argmax_rows(joint_log_likelihood(model, x));
}

}  // namespace smotepipe
