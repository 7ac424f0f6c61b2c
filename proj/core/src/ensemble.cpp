#include "smotepipe/ensemble.hpp"

#include <cmath>
#include <set>

#include "smotepipe/error.hpp"

namespace smotepipe {

std::size_t VotingModel::num_classes() const {
  return members.empty() ? 0 : smotepipe::num_classes(members.front());
}

std::size_t VotingModel::dims() const {
  return members.empty() ? 0 : num_dims(members.front());
}

void validate(const VotingModel& model) {
  if (model.members.size() < 2) throw ConfigError("voting ensemble needs at least 2 members");
  if (model.member_names.size() != model.members.size()) {
    throw ConfigError("voting ensemble member names do not match members");
  }
  const std::size_t c = model.num_classes();
  const std::size_t d = model.dims();
  for (std::size_t j = 0; j < model.members.size(); ++j) {
    if (num_classes(model.members[j]) != c || num_dims(model.members[j]) != d) {
      throw ConfigError("member '" + model.member_names[j] + "' disagrees on class or feature count");
    }
    if (model.mode == VoteMode::kSoft && !has_proba(model.members[j])) {
      throw ConfigError("soft voting requires probabilities, but member '" + model.member_names[j] +
                        "' has none");
    }
  }
}

std::vector<ModelSpec> default_voting_members() {
  return {default_spec(ModelKind::kLogistic), default_spec(ModelKind::kLinearSvm),
          default_spec(ModelKind::kSgd), default_spec(ModelKind::kExtraTrees),
          default_spec(ModelKind::kRandomForest)};
}

VotingModel fit_voting(const Dataset& train, const std::vector<ModelSpec>& members, VoteMode mode,
                       std::uint64_t seed) {
  if (members.size() < 2) throw ConfigError("voting ensemble needs at least 2 members");
  std::set<std::string> names;
  for (const auto& spec : members) {
    if (spec.kind == ModelKind::kVoting) {
      throw ConfigError("member '" + spec.name + "': voting ensembles cannot be nested");
    }
    if (!names.insert(spec.name).second) {
      throw ConfigError("duplicate voting member name '" + spec.name + "'");
    }
    if (mode == VoteMode::kSoft && !spec_has_proba(spec)) {
      throw ConfigError("soft voting requires probabilities, but member '" + spec.name +
                        "' has none");
    }
  }

  VotingModel model;
  model.mode = mode;
  for (std::size_t j = 0; j < members.size(); ++j) {
    ModelSpec spec = members[j];
    spec.seed = seed + j;
    try {
      model.members.push_back(fit_estimator(spec, train));
    } catch (const Error& e) {
      throw_error(e.kind(), "member '" + spec.name + "': " + e.what());
    }
    model.member_names.push_back(spec.name);
  }
  validate(model);
  return model;
}

void accumulate_normalized_scores(std::span<const double> scores, std::span<double> acc) {
  const double n = static_cast<double>(scores.size());
  double mean = 0.0;
  for (const double s : scores) mean += s;
  mean /= n;
  double var = 0.0;
  for (const double s : scores) var += (s - mean) * (s - mean);
  var /= n;
  if (!(var > 0.0)) return;
  const double sd = std::sqrt(var);
  for (std::size_t c = 0; c < scores.size(); ++c) acc[c] += (scores[c] - mean) / sd;
}

Label hard_vote(std::span<const Label> votes, std::span<const double> score_sums) {
  std::vector<std::size_t> tally(score_sums.size(), 0);
  for (const Label v : votes) ++tally[v];
  Label best = 0;
  for (Label c = 1; c < tally.size(); ++c) {
    if (tally[c] > tally[best] || (tally[c] == tally[best] && score_sums[c] > score_sums[best])) {
      best = c;
    }
  }
  return best;
}

std::vector<Label> predict_voting(const VotingModel& model, const Matrix& x) {
  validate(model);
  if (x.cols() != model.dims()) {
    throw DataError("model expects " + std::to_string(model.dims()) + " features, data has " +
                    std::to_string(x.cols()));
  }
  if (model.mode == VoteMode::kSoft) return argmax_rows(predict_proba_voting(model, x));

  const std::size_t m = model.members.size();
  const std::size_t num_classes = model.num_classes();
  std::vector<std::vector<Label>> votes;
  std::vector<Matrix> scores;
  for (const auto& member : model.members) {
    scores.push_back(estimator_scores(member, x));
    votes.push_back(argmax_rows(scores.back()));
  }

  std::vector<Label> out(x.rows());
  std::vector<Label> row_votes(m);
  std::vector<double> sums(num_classes);
  for (std::size_t i = 0; i < x.rows(); ++i) {
    std::fill(sums.begin(), sums.end(), 0.0);
    for (std::size_t j = 0; j < m; ++j) {
      row_votes[j] = votes[j][i];
      accumulate_normalized_scores(scores[j].row(i), sums);
    }
    out[i] = hard_vote(row_votes, sums);
  }
  return out;
}

Matrix predict_proba_voting(const VotingModel& model, const Matrix& x) {
  if (model.mode != VoteMode::kSoft) {
    throw ConfigError("probabilities are only defined for soft voting");
  }
  validate(model);
  Matrix out(x.rows(), model.num_classes(), 0.0);
  for (const auto& member : model.members) {
    const Matrix p = estimator_proba(member, x);
    for (std::size_t k = 0; k < out.data().size(); ++k) out.data()[k] += p.data()[k];
  }
  for (auto& v : out.data()) v /= static_cast<double>(model.members.size());
  return out;
}

}  // namespace smotepipe
