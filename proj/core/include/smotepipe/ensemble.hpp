#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "smotepipe/estimator.hpp"

namespace smotepipe {

struct VotingModel {
  VoteMode mode = VoteMode::kHard;
  std::vector<std::string> member_names;
  std::vector<Estimator> members;

  std::size_t num_classes() const;
  std::size_t dims() const;

  friend bool operator==(const VotingModel&, const VotingModel&) = default;
};

/// Throws ConfigError unless there are at least two members sharing class
/// and feature counts and, in soft mode, every member has probabilities.
void validate(const VotingModel& model);

/// logistic, linear-svm, sgd, extra-trees, random-forest, in that order.
std::vector<ModelSpec> default_voting_members();

/// Trains each member independently on `train`; member j uses seed + j.
/// A member failure is rethrown with the member name prefixed.
VotingModel fit_voting(const Dataset& train, const std::vector<ModelSpec>& members, VoteMode mode,
                       std::uint64_t seed);

/// Adds `scores` to `acc` after standardising them across classes to zero
/// mean and unit variance. Constant scores contribute nothing.
void accumulate_normalized_scores(std::span<const double> scores, std::span<double> acc);

/// Majority vote. Classes tied on votes are separated by `score_sums`, then
/// by the lower class index.
Label hard_vote(std::span<const Label> votes, std::span<const double> score_sums);

/// Hard mode: one vote per member; soft mode: argmax of the mean member
/// probability vector.
std::vector<Label> predict_voting(const VotingModel& model, const Matrix& x);

/// Mean of member probability vectors; soft mode only.
Matrix predict_proba_voting(const VotingModel& model, const Matrix& x);

}  // namespace smotepipe
