#include "smotepipe/linear.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "smotepipe/error.hpp"
#include "smotepipe/rng.hpp"

namespace smotepipe {

ClassWeights balanced_class_weights(const ClassDistribution& dist) {
  const std::size_t num_classes = dist.num_classes();
  const double total = static_cast<double>(dist.total());
  ClassWeights out;
  out.w.reserve(num_classes);
  for (std::size_t c = 0; c < num_classes; ++c) {
    if (dist.counts[c] == 0) {
      throw DataError("class " + std::to_string(c) + " has no samples; balanced weight undefined");
    }
    out.w.push_back(total / (static_cast<double>(num_classes) * static_cast<double>(dist.counts[c])));
  }
  return out;
}

ClassWeights uniform_class_weights(std::size_t num_classes) {
  return ClassWeights{std::vector<double>(num_classes, 1.0)};
}

ClassWeights make_class_weights(ClassWeighting weighting, const ClassDistribution& dist) {
  return weighting == ClassWeighting::kBalanced ? balanced_class_weights(dist)
                                                : uniform_class_weights(dist.num_classes());
}

std::string to_string(ClassWeighting weighting) {
  return weighting == ClassWeighting::kBalanced ? "balanced" : "none";
}

ClassWeighting parse_class_weighting(const std::string& text) {
  if (text == "balanced") return ClassWeighting::kBalanced;
  if (text == "none") return ClassWeighting::kNone;
  throw ConfigError("unknown class weighting '" + text + "' (expected balanced or none)");
}

std::string to_string(LinearKind kind) {
  switch (kind) {
    case LinearKind::kLogistic: return "logistic";
    case LinearKind::kLinearSvm: return "linear-svm";
    case LinearKind::kSgd: return "sgd";
  }
  return "?";
}

std::string to_string(LossKind kind) {
  return kind == LossKind::kHinge ? "hinge" : "softmax-cross-entropy";
}

LinearKind parse_linear_kind(const std::string& text) {
  if (text == "logistic") return LinearKind::kLogistic;
  if (text == "linear-svm") return LinearKind::kLinearSvm;
  if (text == "sgd") return LinearKind::kSgd;
  throw ConfigError("unknown linear model kind '" + text + "'");
}

LossKind parse_loss_kind(const std::string& text) {
  if (text == "hinge") return LossKind::kHinge;
  if (text == "softmax-cross-entropy" || text == "log") return LossKind::kSoftmaxCrossEntropy;
  throw ConfigError("unknown loss '" + text + "' (expected hinge or log)");
}

LinearModel LinearModel::zeros(LinearKind kind, LossKind loss, std::size_t num_classes,
                               std::size_t dims) {
  LinearModel m;
  m.kind = kind;
  m.loss = loss;
  m.weights = Matrix(num_classes, dims, 0.0);
  m.bias.assign(num_classes, 0.0);
  return m;
}

void validate(const TrainConfig& cfg) {
  if (!(cfg.learning_rate > 0.0) || !std::isfinite(cfg.learning_rate)) {
    throw ConfigError("learning_rate must be positive");
  }
  if (cfg.epochs == 0) throw ConfigError("epochs must be positive");
  if (!(cfg.l2 >= 0.0) || !std::isfinite(cfg.l2)) throw ConfigError("l2 must be non-negative");
  if (!(cfg.tolerance >= 0.0)) throw ConfigError("tolerance must be non-negative");
}

LossKind default_loss(LinearKind kind) {
  return kind == LinearKind::kLogistic ? LossKind::kSoftmaxCrossEntropy : LossKind::kHinge;
}

namespace {

void check_dims(const LinearModel& model, std::size_t dims) {
  if (model.dims() != dims) {
    throw DataError("model expects " + std::to_string(model.dims()) + " features, data has " +
                    std::to_string(dims));
  }
}

void scores_for_row(const LinearModel& model, std::span<const double> x, std::span<double> out) {
  for (std::size_t c = 0; c < model.num_classes(); ++c) {
    const auto w = model.weights.row(c);
    double s = model.bias[c];
    for (std::size_t j = 0; j < x.size(); ++j) s += w[j] * x[j];
    out[c] = s;
  }
}

// Loss of one sample and d(loss)/d(score), both scaled by `weight`.
double sample_loss(LossKind loss, std::span<const double> scores, Label y, double weight,
                   std::span<double> grad_scores) {
  if (loss == LossKind::kSoftmaxCrossEntropy) {
    const double top = *std::max_element(scores.begin(), scores.end());
    double sum = 0.0;
    for (std::size_t c = 0; c < scores.size(); ++c) {
      grad_scores[c] = std::exp(scores[c] - top);
      sum += grad_scores[c];
    }
    for (std::size_t c = 0; c < scores.size(); ++c) {
      grad_scores[c] = weight * (grad_scores[c] / sum - (c == y ? 1.0 : 0.0));
    }
    return weight * (top + std::log(sum) - scores[y]);
  }
  double total = 0.0;
  for (std::size_t c = 0; c < scores.size(); ++c) {
    const double sign = c == y ? 1.0 : -1.0;
    const double margin = 1.0 - sign * scores[c];
    if (margin > 0.0) {
      total += margin;
      grad_scores[c] = -weight * sign;
    } else {
      grad_scores[c] = 0.0;
    }
  }
  return weight * total;
}

double squared_norm(const Matrix& m) {
  double s = 0.0;
  for (const double v : m.data()) s += v * v;
  return s;
}

bool all_finite(const LinearModel& m) {
  const auto finite = [](double v) { return std::isfinite(v); };
  return std::all_of(m.weights.data().begin(), m.weights.data().end(), finite) &&
         std::all_of(m.bias.begin(), m.bias.end(), finite);
}

}  // namespace

LossGradient loss_and_gradient(const LinearModel& model, const Dataset& ds,
                               const ClassWeights& weights, double l2) {
  check_dims(model, ds.dims());
  if (model.num_classes() != ds.num_classes() || weights.w.size() != ds.num_classes()) {
    throw DataError("class count mismatch between model, weights and data");
  }

  const std::size_t num_classes = model.num_classes();
  const std::size_t dims = model.dims();
  LossGradient out;
  out.grad_weights = Matrix(num_classes, dims, 0.0);
  out.grad_bias.assign(num_classes, 0.0);

  std::vector<double> scores(num_classes);
  std::vector<double> grad_scores(num_classes);
  double loss = 0.0;
  for (std::size_t i = 0; i < ds.rows(); ++i) {
    const auto x = ds.row(i);
    const Label y = ds.label(i);
    scores_for_row(model, x, scores);
    loss += sample_loss(model.loss, scores, y, weights.w[y], grad_scores);
    for (std::size_t c = 0; c < num_classes; ++c) {
      const double g = grad_scores[c];
      if (g == 0.0) continue;
      auto gw = out.grad_weights.row(c);
      for (std::size_t j = 0; j < dims; ++j) gw[j] += g * x[j];
      out.grad_bias[c] += g;
    }
  }

  const double inv_m = 1.0 / static_cast<double>(ds.rows());
  out.loss = loss * inv_m + 0.5 * l2 * squared_norm(model.weights);
  for (std::size_t c = 0; c < num_classes; ++c) {
    auto gw = out.grad_weights.row(c);
    const auto w = model.weights.row(c);
    for (std::size_t j = 0; j < dims; ++j) gw[j] = gw[j] * inv_m + l2 * w[j];
    out.grad_bias[c] *= inv_m;
  }
  return out;
}

namespace {

// A step that would raise the loss is discarded and the step size halved
// for the rest of training. Hinge subgradients are not always descent
// directions, so without this the batch loss can creep upwards near the
// optimum.
void fit_batch(LinearModel& model, const Dataset& train, const TrainConfig& cfg,
               const ClassWeights& weights) {
  double step = cfg.learning_rate;
  LossGradient current = loss_and_gradient(model, train, weights, cfg.l2);
  if (!std::isfinite(current.loss)) throw NumericError("initial loss is non-finite");
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    if (cfg.on_epoch) cfg.on_epoch(epoch, current.loss);

    LinearModel candidate = model;
    auto& w = candidate.weights.data();
    const auto& gw = current.grad_weights.data();
    for (std::size_t k = 0; k < w.size(); ++k) w[k] -= step * gw[k];
    for (std::size_t c = 0; c < candidate.bias.size(); ++c) {
      candidate.bias[c] -= step * current.grad_bias[c];
    }
    LossGradient next = loss_and_gradient(candidate, train, weights, cfg.l2);
    if (!std::isfinite(next.loss) || !all_finite(candidate)) {
      throw NumericError("loss became non-finite at epoch " + std::to_string(epoch) +
                         "; learning rate too large?");
    }
    if (next.loss > current.loss) {
      step *= 0.5;
      continue;
    }
    const double change = current.loss - next.loss;
    model = std::move(candidate);
    current = std::move(next);
    if (change < cfg.tolerance) break;
  }
}

void fit_sgd(LinearModel& model, const Dataset& train, const TrainConfig& cfg,
             const ClassWeights& weights) {
  const std::size_t num_classes = model.num_classes();
  const std::size_t dims = model.dims();
  std::vector<std::size_t> order(train.rows());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> scores(num_classes);
  std::vector<double> grad_scores(num_classes);

  Rng rng(cfg.seed);
  double previous = 0.0;
  std::size_t step = 0;
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    for (const std::size_t i : order) {
      const double eta =
          cfg.learning_rate / (1.0 + cfg.learning_rate * cfg.l2 * static_cast<double>(step));
      ++step;
      const auto x = train.row(i);
      const Label y = train.label(i);
      scores_for_row(model, x, scores);
      sample_loss(model.loss, scores, y, weights.w[y], grad_scores);
      const double shrink = 1.0 - eta * cfg.l2;
      for (std::size_t c = 0; c < num_classes; ++c) {
        auto w = model.weights.row(c);
        const double g = grad_scores[c];
        for (std::size_t j = 0; j < dims; ++j) w[j] = shrink * w[j] - eta * g * x[j];
        model.bias[c] -= eta * g;
      }
    }
    const double loss = loss_and_gradient(model, train, weights, cfg.l2).loss;
    if (!std::isfinite(loss) || !all_finite(model)) {
      throw NumericError("sgd diverged at epoch " + std::to_string(epoch) +
                         "; learning rate too large?");
    }
    if (cfg.on_epoch) cfg.on_epoch(epoch, loss);
    if (epoch > 0 && std::abs(previous - loss) < cfg.tolerance) break;
    previous = loss;
  }
}

}  // namespace

namespace {

void require_two_classes(const ClassDistribution& dist) {
  const auto present = std::count_if(dist.counts.begin(), dist.counts.end(),
                                     [](std::size_t n) { return n > 0; });
  if (present < 2) throw DataError("training data has fewer than 2 classes");
}

}  // namespace

LinearModel fit_linear(LinearKind kind, const Dataset& train, const TrainConfig& cfg) {
  const ClassDistribution dist = class_counts(train);
  require_two_classes(dist);
  return fit_linear(kind, train, cfg, make_class_weights(cfg.class_weighting, dist));
}

LinearModel fit_linear(LinearKind kind, const Dataset& train, const TrainConfig& cfg,
                       const ClassWeights& weights) {
  validate(cfg);
  require_two_classes(class_counts(train));
  if (weights.w.size() != train.num_classes()) throw DataError("class weight count mismatch");

  LinearModel model = LinearModel::zeros(kind, cfg.loss.value_or(default_loss(kind)),
                                         train.num_classes(), train.dims());
  if (kind == LinearKind::kSgd) {
    fit_sgd(model, train, cfg, weights);
  } else {
    fit_batch(model, train, cfg, weights);
  }
  if (!all_finite(model)) throw NumericError("training produced non-finite weights");
  model.trained = true;
  return model;
}

Matrix decision_scores(const LinearModel& model, const Matrix& x) {
  check_dims(model, x.cols());
  Matrix out(x.rows(), model.num_classes());
  for (std::size_t i = 0; i < x.rows(); ++i) scores_for_row(model, x.row(i), out.row(i));
  return out;
}

Matrix predict_proba(const LinearModel& model, const Matrix& x) {
  return softmax_rows(decision_scores(model, x));
}

std::vector<Label> predict(const LinearModel& model, const Matrix& x) {
  return argmax_rows(decision_scores(model, x));
}

}  // namespace smotepipe
