#include "smotepipe/model.hpp"

#include <type_traits>

namespace smotepipe {
namespace {

template <typename T>
constexpr bool kIsVoting = std::is_same_v<std::decay_t<T>, VotingModel>;

// Applies `on_voting` to a VotingModel and `on_member` to an Estimator view of
// any other alternative.
template <typename OnVoting, typename OnMember>
auto dispatch(const Model& model, OnVoting on_voting, OnMember on_member) {
  return std::visit(
      [&](const auto& m) {
        if constexpr (kIsVoting<decltype(m)>) {
          return on_voting(m);
        } else {
          return on_member(m);
        }
      },
      model);
}

}  // namespace

Model fit_model(const ModelSpec& spec, const Dataset& train) {
  if (spec.kind == ModelKind::kVoting) {
    const auto members = spec.members.empty() ? default_voting_members() : spec.members;
    return fit_voting(train, members, spec.vote_mode, spec.seed);
  }
  return std::visit([](auto&& m) -> Model { return std::move(m); }, fit_estimator(spec, train));
}

ModelKind model_kind(const Model& model) {
  return dispatch(
      model, [](const VotingModel&) { return ModelKind::kVoting; },
      [](const auto& m) {
        if constexpr (std::is_same_v<std::decay_t<decltype(m)>, LinearModel>) {
          switch (m.kind) {
            case LinearKind::kLinearSvm: return ModelKind::kLinearSvm;
            case LinearKind::kSgd: return ModelKind::kSgd;
            default: return ModelKind::kLogistic;
          }
        } else if constexpr (std::is_same_v<std::decay_t<decltype(m)>, GaussianNBModel>) {
          return ModelKind::kNaiveBayes;
        } else if constexpr (std::is_same_v<std::decay_t<decltype(m)>, TreeModel>) {
          return ModelKind::kDecisionTree;
        } else {
          return m.kind == ForestKind::kRandomForest ? ModelKind::kRandomForest
                                                     : ModelKind::kExtraTrees;
        }
      });
}

std::size_t model_classes(const Model& model) {
  return dispatch(
      model, [](const VotingModel& v) { return v.num_classes(); },
      [](const auto& m) -> std::size_t {
        if constexpr (std::is_same_v<std::decay_t<decltype(m)>, LinearModel> ||
                      std::is_same_v<std::decay_t<decltype(m)>, GaussianNBModel>) {
          return m.num_classes();
        } else {
          return m.num_classes;
        }
      });
}

std::size_t model_dims(const Model& model) {
  return dispatch(
      model, [](const VotingModel& v) { return v.dims(); },
      [](const auto& m) -> std::size_t {
        if constexpr (std::is_same_v<std::decay_t<decltype(m)>, LinearModel> ||
                      std::is_same_v<std::decay_t<decltype(m)>, GaussianNBModel>) {
          return m.dims();
        } else {
          return m.dims;
        }
      });
}

std::vector<Label> predict(const Model& model, const Matrix& x) {
  return dispatch(
      model, [&](const VotingModel& v) { return predict_voting(v, x); },
      [&](const auto& m) { return predict(m, x); });
}

}  // namespace smotepipe
