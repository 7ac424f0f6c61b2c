#pragma once

#include <string>
#include <variant>
#include <vector>

#include "smotepipe/ensemble.hpp"
#include "smotepipe/estimator.hpp"

namespace smotepipe {

/// Any trained model the pipeline can evaluate or serialise.
using Model = std::variant<LinearModel, GaussianNBModel, TreeModel, ForestModel, VotingModel>;

Model fit_model(const ModelSpec& spec, const Dataset& train);

ModelKind model_kind(const Model& model);
std::size_t model_classes(const Model& model);
std::size_t model_dims(const Model& model);
std::vector<Label> predict(const Model& model, const Matrix& x);

}  // namespace smotepipe
