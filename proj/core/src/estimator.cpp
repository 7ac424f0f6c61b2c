#include "smotepipe/estimator.hpp"

#include "smotepipe/error.hpp"

namespace smotepipe {

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::kLogistic: return "logistic";
    case ModelKind::kLinearSvm: return "linear-svm";
    case ModelKind::kSgd: return "sgd";
    case ModelKind::kNaiveBayes: return "naive-bayes";
    case ModelKind::kDecisionTree: return "decision-tree";
    case ModelKind::kRandomForest: return "random-forest";
    case ModelKind::kExtraTrees: return "extra-trees";
    case ModelKind::kVoting: return "voting";
  }
  return "?";
}

std::vector<ModelKind> all_model_kinds() {
  return {ModelKind::kLogistic,     ModelKind::kLinearSvm,    ModelKind::kSgd,
          ModelKind::kNaiveBayes,   ModelKind::kDecisionTree, ModelKind::kRandomForest,
          ModelKind::kExtraTrees,   ModelKind::kVoting};
}

ModelKind parse_model_kind(const std::string& text) {
  for (const ModelKind kind : all_model_kinds()) {
    if (to_string(kind) == text) return kind;
  }
  throw ConfigError("unknown model kind '" + text + "'");
}

std::string to_string(VoteMode mode) { return mode == VoteMode::kHard ? "hard" : "soft"; }

VoteMode parse_vote_mode(const std::string& text) {
  if (text == "hard") return VoteMode::kHard;
  if (text == "soft") return VoteMode::kSoft;
  throw ConfigError("unknown voting mode '" + text + "' (expected hard or soft)");
}

ModelSpec default_spec(ModelKind kind, const std::string& name) {
  ModelSpec spec;
  spec.kind = kind;
  spec.name = name.empty() ? to_string(kind) : name;
  return spec;
}

namespace {

LinearKind linear_kind(ModelKind kind) {
  switch (kind) {
    case ModelKind::kLogistic: return LinearKind::kLogistic;
    case ModelKind::kLinearSvm: return LinearKind::kLinearSvm;
    case ModelKind::kSgd: return LinearKind::kSgd;
    default: throw ConfigError("not a linear model kind: " + to_string(kind));
  }
}

bool is_linear(ModelKind kind) {
  return kind == ModelKind::kLogistic || kind == ModelKind::kLinearSvm || kind == ModelKind::kSgd;
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

bool spec_has_proba(const ModelSpec& spec) {
  if (spec.kind == ModelKind::kVoting) return spec.vote_mode == VoteMode::kSoft;
  if (is_linear(spec.kind)) {
    return spec.linear.loss.value_or(default_loss(linear_kind(spec.kind))) ==
           LossKind::kSoftmaxCrossEntropy;
  }
  return true;
}

Estimator fit_estimator(const ModelSpec& spec, const Dataset& train) {
  const auto weights = [&] { return make_class_weights(spec.class_weighting, class_counts(train)); };
  switch (spec.kind) {
    case ModelKind::kLogistic:
    case ModelKind::kLinearSvm:
    case ModelKind::kSgd: {
      TrainConfig cfg = spec.linear;
      cfg.seed = spec.seed;
      cfg.class_weighting = spec.class_weighting;
      return fit_linear(linear_kind(spec.kind), train, cfg, weights());
    }
    case ModelKind::kNaiveBayes:
      return fit_gaussian_nb(train, spec.nb_smoothing);
    case ModelKind::kDecisionTree:
      return fit_tree(train, weights(), spec.tree, spec.seed);
    case ModelKind::kRandomForest:
    case ModelKind::kExtraTrees: {
      ForestParams params = spec.forest;
      params.tree = spec.tree;
      const ForestKind kind =
          spec.kind == ModelKind::kRandomForest ? ForestKind::kRandomForest : ForestKind::kExtraTrees;
      return fit_forest(kind, train, weights(), params, spec.seed);
    }
    case ModelKind::kVoting:
      break;
  }
  throw ConfigError("voting ensembles cannot be ensemble members");
}

ModelKind estimator_kind(const Estimator& model) {
  return std::visit(Overloaded{
                        [](const LinearModel& m) {
                          switch (m.kind) {
                            case LinearKind::kLogistic: return ModelKind::kLogistic;
                            case LinearKind::kLinearSvm: return ModelKind::kLinearSvm;
                            case LinearKind::kSgd: return ModelKind::kSgd;
                          }
                          return ModelKind::kLogistic;
                        },
                        [](const GaussianNBModel&) { return ModelKind::kNaiveBayes; },
                        [](const TreeModel&) { return ModelKind::kDecisionTree; },
                        [](const ForestModel& m) {
                          return m.kind == ForestKind::kRandomForest ? ModelKind::kRandomForest
                                                                     : ModelKind::kExtraTrees;
                        },
                    },
                    model);
}

bool has_proba(const Estimator& model) {
  if (const auto* linear = std::get_if<LinearModel>(&model)) {
    return linear->loss == LossKind::kSoftmaxCrossEntropy;
  }
  return true;
}

std::size_t num_classes(const Estimator& model) {
  return std::visit(Overloaded{
                        [](const LinearModel& m) { return m.num_classes(); },
                        [](const GaussianNBModel& m) { return m.num_classes(); },
                        [](const TreeModel& m) { return m.num_classes; },
                        [](const ForestModel& m) { return m.num_classes; },
                    },
                    model);
}

std::size_t num_dims(const Estimator& model) {
  return std::visit(Overloaded{
                        [](const LinearModel& m) { return m.dims(); },
                        [](const GaussianNBModel& m) { return m.dims(); },
                        [](const TreeModel& m) { return m.dims; },
                        [](const ForestModel& m) { return m.dims; },
                    },
                    model);
}

Matrix estimator_scores(const Estimator& model, const Matrix& x) {
  return std::visit(Overloaded{
                        [&](const LinearModel& m) { return decision_scores(m, x); },
                        [&](const auto& m) { return predict_proba(m, x); },
                    },
                    model);
}

Matrix estimator_proba(const Estimator& model, const Matrix& x) {
  if (!has_proba(model)) {
    throw ConfigError(to_string(estimator_kind(model)) + " with hinge loss has no probabilities");
  }
  return std::visit([&](const auto& m) { return predict_proba(m, x); }, model);
}

std::vector<Label> estimator_predict(const Estimator& model, const Matrix& x) {
  return std::visit([&](const auto& m) { return predict(m, x); }, model);
}

}  // namespace smotepipe
