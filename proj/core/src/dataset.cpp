#include "smotepipe/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "smotepipe/error.hpp"
#include "smotepipe/rng.hpp"
#include "smotepipe/text.hpp"

namespace smotepipe {

Dataset Dataset::make(Matrix features, std::vector<Label> labels,
                      std::vector<std::string> class_names,
                      std::vector<std::string> feature_names) {
  if (features.rows() == 0) throw DataError("dataset has no rows");
  if (features.cols() == 0) throw DataError("dataset has no feature columns");
  if (labels.size() != features.rows()) {
    throw DataError("label count " + std::to_string(labels.size()) + " does not match row count " +
                    std::to_string(features.rows()));
  }
  if (class_names.size() < 2) throw DataError("fewer than 2 classes");
  std::set<std::string> seen;
  for (const auto& name : class_names) {
    if (name.empty()) throw DataError("empty class name");
    if (!seen.insert(name).second) throw DataError("duplicate class name '" + name + "'");
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] >= class_names.size()) {
      throw DataError("label " + std::to_string(labels[i]) + " at row " + std::to_string(i) +
                      " is out of range");
    }
  }
  for (const double v : features.data()) {
    if (!std::isfinite(v)) throw DataError("non-finite feature value");
  }
  if (feature_names.empty()) {
    for (std::size_t j = 0; j < features.cols(); ++j) feature_names.push_back("f" + std::to_string(j));
  } else if (feature_names.size() != features.cols()) {
    throw DataError("feature name count does not match column count");
  }

  Dataset ds;
  ds.features_ = std::move(features);
  ds.labels_ = std::move(labels);
  ds.class_names_ = std::move(class_names);
  ds.feature_names_ = std::move(feature_names);
  return ds;
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  Matrix x(indices.size(), dims());
  std::vector<Label> y(indices.size());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const auto src = row(indices[i]);
    std::copy(src.begin(), src.end(), x.row(i).begin());
    y[i] = labels_[indices[i]];
  }
  Dataset out;
  out.features_ = std::move(x);
  out.labels_ = std::move(y);
  out.class_names_ = class_names_;
  out.feature_names_ = feature_names_;
  return out;
}

std::size_t ClassDistribution::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::size_t{0});
}

ClassDistribution class_counts(const Dataset& ds) {
  ClassDistribution dist;
  dist.counts.assign(ds.num_classes(), 0);
  for (const Label y : ds.labels()) ++dist.counts[y];
  return dist;
}

void validate_split_spec(const SplitSpec& spec) {
  const auto in_unit = [](double f) { return f >= 0.0 && f < 1.0; };
  if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0)) {
    throw ConfigError("train fraction must lie in (0,1)");
  }
  if (!in_unit(spec.val_fraction)) throw ConfigError("validation fraction must lie in [0,1)");
  if (!(spec.test_fraction > 0.0 && spec.test_fraction < 1.0)) {
    throw ConfigError("test fraction must lie in (0,1)");
  }
  const double sum = spec.train_fraction + spec.val_fraction + spec.test_fraction;
  if (std::abs(sum - 1.0) > 1e-9) throw ConfigError("split fractions must sum to 1");
}

SplitSizes split_sizes(std::size_t class_count, const SplitSpec& spec) {
  // The small epsilon keeps exact products such as 0.29 * 100 from flooring
  // one below their decimal value.
  const auto floor_share = [&](double fraction) {
    return static_cast<std::size_t>(std::floor(static_cast<double>(class_count) * fraction + 1e-9));
  };
  SplitSizes sizes;
  sizes.train = floor_share(spec.train_fraction);
  sizes.val = floor_share(spec.val_fraction);
  sizes.test = class_count - sizes.train - sizes.val;
  return sizes;
}

Split stratified_split(const Dataset& ds, const SplitSpec& spec) {
  validate_split_spec(spec);

  std::vector<std::vector<std::size_t>> by_class(ds.num_classes());
  for (std::size_t i = 0; i < ds.rows(); ++i) by_class[ds.label(i)].push_back(i);

  Rng rng(spec.seed);
  std::vector<std::size_t> train_idx;
  std::vector<std::size_t> val_idx;
  std::vector<std::size_t> test_idx;
  for (std::size_t c = 0; c < by_class.size(); ++c) {
    auto& members = by_class[c];
    const SplitSizes sizes = split_sizes(members.size(), spec);
    if (sizes.train == 0 || (spec.val_fraction > 0.0 && sizes.val == 0) || sizes.test == 0) {
      throw DataError("class '" + ds.class_names()[c] + "' has " + std::to_string(members.size()) +
                      " samples, too few to populate every split");
    }
    rng.shuffle(std::span<std::size_t>(members));
    const auto first = members.begin();
    train_idx.insert(train_idx.end(), first, first + sizes.train);
    val_idx.insert(val_idx.end(), first + sizes.train, first + sizes.train + sizes.val);
    test_idx.insert(test_idx.end(), first + sizes.train + sizes.val, members.end());
  }
  std::sort(train_idx.begin(), train_idx.end());
  std::sort(val_idx.begin(), val_idx.end());
  std::sort(test_idx.begin(), test_idx.end());

  Split out;
  out.train = ds.subset(train_idx);
  if (!val_idx.empty()) out.val = ds.subset(val_idx);
  out.test = ds.subset(test_idx);
  return out;
}

Dataset parse_csv(std::string_view content, const std::string& label_column,
                  const std::string& source) {
  const auto where = [&](std::size_t line) { return source + ":" + std::to_string(line) + ": "; };

  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < content.size()) {
    std::size_t end = content.find('\n', start);
    if (end == std::string_view::npos) end = content.size();
    lines.push_back(content.substr(start, end - start));
    start = end + 1;
  }
  // Skip a UTF-8 byte order mark.
  if (!lines.empty() && lines[0].substr(0, 3) == "\xEF\xBB\xBF") lines[0].remove_prefix(3);
  if (lines.empty() || text::trim(lines[0]).empty()) throw DataError(where(1) + "missing header");

  const auto header = text::split(text::trim(lines[0]), ',');
  std::size_t label_pos = header.size();
  std::vector<std::string> feature_names;
  for (std::size_t j = 0; j < header.size(); ++j) {
    const std::string name(text::trim(header[j]));
    if (name == label_column) {
      if (label_pos != header.size()) {
        throw DataError(where(1) + "duplicate label column '" + label_column + "'");
      }
      label_pos = j;
    } else {
      feature_names.push_back(name);
    }
  }
  if (label_pos == header.size()) {
    throw DataError(where(1) + "label column '" + label_column + "' not found");
  }
  if (feature_names.empty()) throw DataError(where(1) + "no feature columns");

  std::vector<double> values;
  std::vector<std::string> raw_labels;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const auto line = text::trim(lines[li]);
    if (line.empty()) continue;
    const auto cells = text::split(line, ',');
    if (cells.size() != header.size()) {
      throw DataError(where(li + 1) + "expected " + std::to_string(header.size()) +
                      " columns, found " + std::to_string(cells.size()));
    }
    for (std::size_t j = 0; j < cells.size(); ++j) {
      if (j == label_pos) {
        const std::string label(text::trim(cells[j]));
        if (label.empty()) throw DataError(where(li + 1) + "empty label");
        raw_labels.push_back(label);
        continue;
      }
      const auto v = text::parse_double(cells[j]);
      if (!v) {
        throw DataError(where(li + 1) + "cannot parse '" + std::string(text::trim(cells[j])) +
                        "' as a number");
      }
      if (!std::isfinite(*v)) throw DataError(where(li + 1) + "non-finite value");
      values.push_back(*v);
    }
  }
  if (raw_labels.empty()) throw DataError(source + ": no data rows");

  std::map<std::string, Label> index;
  for (const auto& l : raw_labels) index.emplace(l, 0);
  std::vector<std::string> class_names;
  for (auto& [name, id] : index) {
    id = class_names.size();
    class_names.push_back(name);
  }
  if (class_names.size() < 2) throw DataError(source + ": fewer than 2 classes");

  std::vector<Label> labels;
  labels.reserve(raw_labels.size());
  for (const auto& l : raw_labels) labels.push_back(index.at(l));

  Matrix x(raw_labels.size(), feature_names.size());
  x.data() = std::move(values);
  return Dataset::make(std::move(x), std::move(labels), std::move(class_names),
                       std::move(feature_names));
}

Dataset load_csv(const std::filesystem::path& path, const std::string& label_column) {
  if (!std::filesystem::exists(path)) throw DataError("file not found: " + path.string());
  return parse_csv(text::read_file(path), label_column, path.string());
}

std::string to_csv(const Dataset& ds, const std::string& label_column) {
  std::string out;
  for (const auto& name : ds.feature_names()) {
    out += name;
    out += ',';
  }
  out += label_column;
  out += '\n';
  for (std::size_t i = 0; i < ds.rows(); ++i) {
    out += text::join_doubles(ds.row(i));
    out += ',';
    out += ds.class_names()[ds.label(i)];
    out += '\n';
  }
  return out;
}

void save_csv(const Dataset& ds, const std::filesystem::path& path, const std::string& label_column) {
  text::write_file(path, to_csv(ds, label_column));
}

void require_simplex(const Dataset& ds, double tolerance) {
  for (std::size_t i = 0; i < ds.rows(); ++i) {
    double sum = 0.0;
    for (const double v : ds.row(i)) {
      if (v < 0.0) throw DataError("row " + std::to_string(i) + " has a negative entry");
      sum += v;
    }
    if (std::abs(sum - 1.0) > tolerance) {
      throw DataError("row " + std::to_string(i) + " sums to " + text::format_double(sum) +
                      ", not 1");
    }
  }
}

}  // namespace smotepipe
