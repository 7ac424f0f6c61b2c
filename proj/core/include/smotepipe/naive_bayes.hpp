#pragma once

#include <vector>

#include "smotepipe/dataset.hpp"
#include "smotepipe/matrix.hpp"

namespace smotepipe {

struct GaussianNBModel {
  Matrix means;      // C x d
  Matrix variances;  // C x d, each >= variance_floor
  std::vector<double> priors;
  double variance_floor = 0.0;

  std::size_t num_classes() const noexcept { return means.rows(); }
  std::size_t dims() const noexcept { return means.cols(); }

  friend bool operator==(const GaussianNBModel&, const GaussianNBModel&) = default;
};

/// Per-class mean and population variance of every feature. Variances are
/// floored at smoothing times the largest per-feature variance of the whole
/// dataset. Sums are taken over sorted values, so the fit does not depend on
/// row order.
GaussianNBModel fit_gaussian_nb(const Dataset& train, double smoothing = 1e-9);

/// log P(c) + sum_j log N(x_j; mean_cj, var_cj), per row and class.
Matrix joint_log_likelihood(const GaussianNBModel& model, const Matrix& x);
Matrix predict_proba(const GaussianNBModel& model, const Matrix& x);
std::vector<Label> predict(const GaussianNBModel& model, const Matrix& x);

}  // namespace smotepipe
