#include "smotepipe/smote.hpp"

#include <algorithm>
#include <sstream>
#include <iomanip>
#include <utility>

#include "smotepipe/error.hpp"
#include "smotepipe/rng.hpp"
#include "smotepipe/text.hpp"

namespace smotepipe {

SmoteTarget SmoteTarget::parse(const std::string& value) {
  const std::string v(text::trim(value));
  if (v == "not-majority") return not_majority();
  constexpr std::string_view prefix = "to-count=";
  if (v.rfind(prefix, 0) == 0) {
    const auto n = text::parse_u64(std::string_view(v).substr(prefix.size()));
    if (!n || *n == 0) throw ConfigError("invalid SMOTE target count in '" + v + "'");
    return to_count(static_cast<std::size_t>(*n));
  }
  throw ConfigError("unknown SMOTE target '" + v + "' (expected not-majority or to-count=N)");
}

std::string SmoteTarget::to_string() const {
  return mode == Mode::kNotMajority ? "not-majority" : "to-count=" + std::to_string(count);
}

namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double d = a[j] - b[j];
    s += d * d;
  }
  return s;
}

}  // namespace

std::vector<std::size_t> knn_within_class(const Matrix& x, std::span<const std::size_t> class_rows,
                                          std::size_t query, std::size_t k) {
  if (class_rows.size() < 2) throw DataError("class too small for neighbor search");
  if (k == 0) throw ConfigError("neighbor count k must be at least 1");
  if (std::find(class_rows.begin(), class_rows.end(), query) == class_rows.end()) {
    throw DataError("query row is not a member of the class");
  }

  const auto q = x.row(query);
  std::vector<std::pair<double, std::size_t>> candidates;
  candidates.reserve(class_rows.size() - 1);
  for (const std::size_t r : class_rows) {
    if (r == query) continue;
    candidates.emplace_back(squared_distance(q, x.row(r)), r);
  }
  const std::size_t take = std::min(k, candidates.size());
  std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(take),
                    candidates.end());

  std::vector<std::size_t> out(take);
  for (std::size_t i = 0; i < take; ++i) out[i] = candidates[i].second;
  return out;
}

Dataset smote(const Dataset& train, const SmoteParams& params) {
  if (params.k == 0) throw ConfigError("SMOTE k must be at least 1");
  if (train.num_classes() < 2) throw DataError("SMOTE needs at least 2 classes");

  const ClassDistribution dist = class_counts(train);
  for (std::size_t c = 0; c < dist.counts.size(); ++c) {
    if (dist.counts[c] == 0) {
      throw DataError("class '" + train.class_names()[c] + "' has no samples to oversample");
    }
  }

  const std::size_t majority = *std::max_element(dist.counts.begin(), dist.counts.end());
  const auto target_for = [&](std::size_t count) {
    const std::size_t target =
        params.target.mode == SmoteTarget::Mode::kNotMajority ? majority : params.target.count;
    return std::max(target, count);
  };

  std::vector<std::vector<std::size_t>> by_class(train.num_classes());
  for (std::size_t i = 0; i < train.rows(); ++i) by_class[train.label(i)].push_back(i);

  std::size_t extra = 0;
  for (std::size_t c = 0; c < dist.counts.size(); ++c) extra += target_for(dist.counts[c]) - dist.counts[c];

  Matrix x = train.features();
  std::vector<Label> y(train.labels().begin(), train.labels().end());
  x.reserve_rows(train.rows() + extra);
  y.reserve(train.rows() + extra);

  Rng rng(params.seed);
  const Matrix& src = train.features();
  std::vector<double> synthetic(train.dims());

  for (std::size_t c = 0; c < by_class.size(); ++c) {
    const auto& members = by_class[c];
    const std::size_t needed = target_for(members.size()) - members.size();
    if (needed == 0) continue;

    if (members.size() == 1) {
      const auto lone = src.row(members.front());
      for (std::size_t n = 0; n < needed; ++n) {
        x.append_row(lone);
        y.push_back(c);
      }
      continue;
    }

    // Neighbour lists are computed on first use of each source row.
    std::vector<std::vector<std::size_t>> neighbours(members.size());
    for (std::size_t n = 0; n < needed; ++n) {
      const std::size_t pick = rng.uniform_index(members.size());
      auto& nn = neighbours[pick];
      if (nn.empty()) nn = knn_within_class(src, members, members[pick], params.k);
      const std::size_t partner = nn[rng.uniform_index(nn.size())];
      const double lambda = rng.uniform01();

      const auto base = src.row(members[pick]);
      const auto other = src.row(partner);
      for (std::size_t j = 0; j < synthetic.size(); ++j) {
        const double v = base[j] + lambda * (other[j] - base[j]);
        // Exact arithmetic keeps v between the endpoints; the clamp removes
        // rounding excursions past them.
        synthetic[j] = std::clamp(v, std::min(base[j], other[j]), std::max(base[j], other[j]));
      }
      x.append_row(synthetic);
      y.push_back(c);
    }
  }

  return Dataset::make(std::move(x), std::move(y), train.class_names(), train.feature_names());
}

std::string resample_counts_report(const ClassDistribution& before, const ClassDistribution& after,
                                   const std::vector<std::string>& class_names) {
  if (before.num_classes() != after.num_classes()) {
    throw DataError("class count mismatch between distributions");
  }
  if (!class_names.empty() && class_names.size() != before.num_classes()) {
    throw DataError("class name count does not match distributions");
  }

  std::vector<std::string> names = class_names;
  if (names.empty()) {
    for (std::size_t c = 0; c < before.num_classes(); ++c) names.push_back(std::to_string(c));
  }
  std::size_t width = 5;
  for (const auto& n : names) width = std::max(width, n.size());

  const auto signed_delta = [](std::size_t b, std::size_t a) {
    const long long d = static_cast<long long>(a) - static_cast<long long>(b);
    return (d >= 0 ? "+" : "") + std::to_string(d);
  };

  std::ostringstream out;
  out << std::left << std::setw(static_cast<int>(width)) << "class" << std::right << std::setw(10)
      << "before" << std::setw(10) << "after" << std::setw(12) << "synthetic" << '\n';
  for (std::size_t c = 0; c < before.num_classes(); ++c) {
    out << std::left << std::setw(static_cast<int>(width)) << names[c] << std::right
        << std::setw(10) << before.counts[c] << std::setw(10) << after.counts[c] << std::setw(12)
        << signed_delta(before.counts[c], after.counts[c]) << '\n';
  }
  out << std::left << std::setw(static_cast<int>(width)) << "total" << std::right << std::setw(10)
      << before.total() << std::setw(10) << after.total() << std::setw(12)
      << signed_delta(before.total(), after.total()) << '\n';
  return out.str();
}

}  // namespace smotepipe
