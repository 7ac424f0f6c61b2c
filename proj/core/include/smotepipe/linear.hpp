#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "smotepipe/dataset.hpp"
#include "smotepipe/matrix.hpp"

namespace smotepipe {

enum class ClassWeighting { kNone, kBalanced };

/// Positive per-class multipliers applied to each sample's loss term.
struct ClassWeights {
  std::vector<double> w;
  friend bool operator==(const ClassWeights&, const ClassWeights&) = default;
};

/// w_c = M / (C * M_c), so every class contributes the same total weight.
ClassWeights balanced_class_weights(const ClassDistribution& dist);
ClassWeights uniform_class_weights(std::size_t num_classes);
ClassWeights make_class_weights(ClassWeighting weighting, const ClassDistribution& dist);

std::string to_string(ClassWeighting weighting);
ClassWeighting parse_class_weighting(const std::string& text);

enum class LinearKind { kLogistic, kLinearSvm, kSgd };
enum class LossKind { kSoftmaxCrossEntropy, kHinge };

std::string to_string(LinearKind kind);
std::string to_string(LossKind kind);
LinearKind parse_linear_kind(const std::string& text);
LossKind parse_loss_kind(const std::string& text);

/// Decision function score(x) = W x + b with one row of W per class.
struct LinearModel {
  LinearKind kind = LinearKind::kLogistic;
  LossKind loss = LossKind::kSoftmaxCrossEntropy;
  Matrix weights;  // C x d
  std::vector<double> bias;
  bool trained = false;

  std::size_t num_classes() const noexcept { return weights.rows(); }
  std::size_t dims() const noexcept { return weights.cols(); }

  static LinearModel zeros(LinearKind kind, LossKind loss, std::size_t num_classes, std::size_t dims);

  friend bool operator==(const LinearModel&, const LinearModel&) = default;
};

struct TrainConfig {
  double learning_rate = 0.1;
  std::size_t epochs = 500;
  double l2 = 1e-4;
  std::uint64_t seed = 0;
  ClassWeighting class_weighting = ClassWeighting::kBalanced;
  /// Training stops once consecutive epoch losses differ by less than this.
  double tolerance = 1e-8;
  /// Overrides the kind's default loss (hinge for linear-svm and sgd).
  std::optional<LossKind> loss;
  /// Called with (epoch, loss) once per epoch. The loss is measured before
  /// that epoch's update for batch training and after it for sgd.
  std::function<void(std::size_t, double)> on_epoch;
};

void validate(const TrainConfig& cfg);
LossKind default_loss(LinearKind kind);

struct LossGradient {
  double loss = 0.0;
  Matrix grad_weights;
  std::vector<double> grad_bias;
};

/// Class-weighted mean loss plus (l2 / 2) * ||W||^2, with its exact
/// (sub)gradient. Cross-entropy uses softmax(score); hinge is one-vs-rest,
/// sum over classes of max(0, 1 - s_c * score_c) with s_c = +1 for the true
/// class and -1 otherwise. The bias is not regularised.
LossGradient loss_and_gradient(const LinearModel& model, const Dataset& ds,
                               const ClassWeights& weights, double l2);

/// Logistic and linear-svm run full-batch gradient descent, halving the step
/// whenever an update would increase the loss (that update is skipped); sgd makes
/// per-sample updates in a seeded shuffled order with step
/// learning_rate / (1 + learning_rate * l2 * t). Weights start at zero.
/// Throws NumericError if the loss becomes non-finite.
LinearModel fit_linear(LinearKind kind, const Dataset& train, const TrainConfig& cfg);
LinearModel fit_linear(LinearKind kind, const Dataset& train, const TrainConfig& cfg,
                       const ClassWeights& weights);

Matrix decision_scores(const LinearModel& model, const Matrix& x);
Matrix predict_proba(const LinearModel& model, const Matrix& x);
std::vector<Label> predict(const LinearModel& model, const Matrix& x);

}  // namespace smotepipe
