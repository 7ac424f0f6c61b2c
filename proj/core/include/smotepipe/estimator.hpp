#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "smotepipe/dataset.hpp"
#include "smotepipe/linear.hpp"
#include "smotepipe/naive_bayes.hpp"
#include "smotepipe/tree.hpp"

namespace smotepipe {

enum class ModelKind {
  kLogistic,
  kLinearSvm,
  kSgd,
  kNaiveBayes,
  kDecisionTree,
  kRandomForest,
  kExtraTrees,
  kVoting,
};

std::string to_string(ModelKind kind);
ModelKind parse_model_kind(const std::string& text);
std::vector<ModelKind> all_model_kinds();

enum class VoteMode { kHard, kSoft };
std::string to_string(VoteMode mode);
VoteMode parse_vote_mode(const std::string& text);

/// Everything needed to train one model. Fields that do not apply to `kind`
/// are ignored.
struct ModelSpec {
  std::string name;
  ModelKind kind = ModelKind::kLogistic;
  std::uint64_t seed = 0;
  ClassWeighting class_weighting = ClassWeighting::kBalanced;
  TrainConfig linear;
  TreeParams tree;
  ForestParams forest;
  double nb_smoothing = 1e-9;
  VoteMode vote_mode = VoteMode::kHard;
  std::vector<ModelSpec> members;  // voting only; empty means the default set
};

ModelSpec default_spec(ModelKind kind, const std::string& name = {});

/// Whether a model built from `spec` exposes class probabilities. Hinge-loss
/// linear models do not; their scores are uncalibrated margins.
bool spec_has_proba(const ModelSpec& spec);

using Estimator = std::variant<LinearModel, GaussianNBModel, TreeModel, ForestModel>;

/// Trains any non-voting kind. Balanced weights come from the class counts of
/// `train`; naive Bayes has no weighting.
Estimator fit_estimator(const ModelSpec& spec, const Dataset& train);

ModelKind estimator_kind(const Estimator& model);
bool has_proba(const Estimator& model);
std::size_t num_classes(const Estimator& model);
std::size_t num_dims(const Estimator& model);

/// Raw decision scores for linear models, probabilities for the rest.
Matrix estimator_scores(const Estimator& model, const Matrix& x);
/// Throws ConfigError for models without probabilities.
Matrix estimator_proba(const Estimator& model, const Matrix& x);
std::vector<Label> estimator_predict(const Estimator& model, const Matrix& x);

}  // namespace smotepipe
