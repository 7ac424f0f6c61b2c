#include "smotepipe/model_io.hpp"

#include <sstream>

#include "smotepipe/error.hpp"
#include "smotepipe/text.hpp"

namespace smotepipe {
namespace {

constexpr const char* kFormatName = "smotepipe-model";

class Writer {
 public:
  void put(const std::string& key, const std::string& value) {
    out_ += key;
    out_ += " = ";
    out_ += value;
    out_ += '\n';
  }
  void put(const std::string& key, std::size_t value) { put(key, std::to_string(value)); }
  void put(const std::string& key, std::span<const double> values) {
    put(key, text::join_doubles(values));
  }
  void header(const std::string& type) {
    put("format", std::string(kFormatName));
    put("version", std::to_string(kModelFormatVersion));
    put("type", type);
  }
  std::string str() && { return std::move(out_); }

 private:
  std::string out_;
};

// Sequential reader over key/value entries; keys must appear in the order
// the writer emits them.
class Reader {
 public:
  Reader(std::string_view content, std::string source)
      : entries_(entries_of(content, source)), source_(std::move(source)) {}

  const std::string& get(const std::string& key) {
    if (pos_ >= entries_.size()) fail("expected '" + key + "' but reached end of file");
    const auto& kv = entries_[pos_];
    if (kv.key != key) fail("line " + std::to_string(kv.line) + ": expected '" + key + "', found '" + kv.key + "'");
    ++pos_;
    return kv.value;
  }
  std::size_t get_size(const std::string& key) {
    const auto v = text::parse_u64(get(key));
    if (!v) fail("'" + key + "' must be a non-negative integer");
    return static_cast<std::size_t>(*v);
  }
  double get_double(const std::string& key) {
    const auto v = text::parse_double(get(key));
    if (!v) fail("'" + key + "' must be a number");
    return *v;
  }
  bool get_bool(const std::string& key) {
    const auto& v = get(key);
    if (v == "true") return true;
    if (v == "false") return false;
    fail("'" + key + "' must be true or false");
  }
  std::vector<double> get_doubles(const std::string& key, std::size_t expected) {
    std::vector<double> v;
    try {
      v = text::parse_doubles(get(key));
    } catch (const DataError& e) {
      fail("'" + key + "': " + e.what());
    }
    if (v.size() != expected) {
      fail("'" + key + "' has " + std::to_string(v.size()) + " values, expected " +
           std::to_string(expected));
    }
    return v;
  }
  void header(std::string& type) {
    if (get("format") != kFormatName) fail("not a smotepipe model file");
    const auto version = text::parse_int(get("version"));
    if (!version || *version != kModelFormatVersion) fail("unsupported model format version");
    type = get("type");
  }
  bool done() const { return pos_ == entries_.size(); }
  [[noreturn]] void fail(const std::string& what) const { throw DataError(source_ + ": " + what); }

  // A malformed model file is bad data, not bad configuration.
  static std::vector<text::KeyValue> entries_of(std::string_view content, const std::string& source) {
    try {
      return text::parse_key_values(content, source);
    } catch (const ConfigError& e) {
      throw DataError(e.what());
    }
  }

 private:
  std::vector<text::KeyValue> entries_;
  std::string source_;
  std::size_t pos_ = 0;
};

Matrix to_matrix(std::vector<double> values, std::size_t rows, std::size_t cols) {
  Matrix m(rows, cols);
  m.data() = std::move(values);
  return m;
}

void write_tree_body(Writer& w, const TreeModel& tree) {
  w.put("max_depth", tree.params.max_depth);
  w.put("min_samples_leaf", tree.params.min_samples_leaf);
  w.put("split_mode", to_string(tree.params.split_mode));
  w.put("max_features", tree.params.max_features);
  w.put("nodes", tree.nodes.size());
  for (const auto& node : tree.nodes) {
    if (node.leaf) {
      w.put("node", "leaf " + text::join_doubles(node.proba));
    } else {
      w.put("node", "split " + std::to_string(node.feature) + " " +
                        text::format_double(node.threshold) + " " + std::to_string(node.right));
    }
  }
}

TreeModel read_tree_body(Reader& r, std::size_t num_classes, std::size_t dims) {
  TreeModel tree;
  tree.num_classes = num_classes;
  tree.dims = dims;
  tree.params.max_depth = r.get_size("max_depth");
  tree.params.min_samples_leaf = r.get_size("min_samples_leaf");
  tree.params.split_mode = parse_split_mode(r.get("split_mode"));
  tree.params.max_features = r.get_size("max_features");
  const std::size_t n = r.get_size("nodes");
  if (n == 0) r.fail("tree has no nodes");
  tree.nodes.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::string& value = r.get("node");
    TreeNode node;
    if (value.rfind("leaf ", 0) == 0) {
      node.leaf = true;
      try {
        node.proba = text::parse_doubles(std::string_view(value).substr(5));
      } catch (const DataError& e) {
        r.fail(std::string("bad leaf: ") + e.what());
      }
      if (node.proba.size() != num_classes) r.fail("leaf probability length mismatch");
    } else if (value.rfind("split ", 0) == 0) {
      const auto parts = text::split(text::trim(std::string_view(value).substr(6)), ' ');
      if (parts.size() != 3) r.fail("split node needs feature, threshold and right index");
      const auto f = text::parse_u64(parts[0]);
      const auto t = text::parse_double(parts[1]);
      const auto right = text::parse_u64(parts[2]);
      if (!f || !t || !right || *f >= dims || *right <= i + 1 || *right >= n) {
        r.fail("invalid split node " + std::to_string(i));
      }
      node.leaf = false;
      node.feature = static_cast<std::size_t>(*f);
      node.threshold = *t;
      node.right = static_cast<std::size_t>(*right);
    } else {
      r.fail("unknown node type in '" + value + "'");
    }
    tree.nodes.push_back(std::move(node));
  }
  if (tree.nodes.back().leaf == false) r.fail("last preorder node must be a leaf");
  return tree;
}

std::string serialize(const LinearModel& m) {
  Writer w;
  w.header("linear");
  w.put("kind", to_string(m.kind));
  w.put("loss", to_string(m.loss));
  w.put("classes", m.num_classes());
  w.put("features", m.dims());
  w.put("weights", m.weights.data());
  w.put("bias", m.bias);
  return std::move(w).str();
}

std::string serialize(const GaussianNBModel& m) {
  Writer w;
  w.header("naive-bayes");
  w.put("classes", m.num_classes());
  w.put("features", m.dims());
  w.put("variance_floor", text::format_double(m.variance_floor));
  w.put("priors", m.priors);
  w.put("means", m.means.data());
  w.put("variances", m.variances.data());
  return std::move(w).str();
}

std::string serialize(const TreeModel& m) {
  Writer w;
  w.header("decision-tree");
  w.put("classes", m.num_classes);
  w.put("features", m.dims);
  write_tree_body(w, m);
  return std::move(w).str();
}

std::string serialize(const ForestModel& m) {
  Writer w;
  w.header("forest");
  w.put("kind", to_string(m.kind));
  w.put("bootstrap", std::string(m.bootstrap ? "true" : "false"));
  w.put("seed", std::to_string(m.seed));
  w.put("classes", m.num_classes);
  w.put("features", m.dims);
  w.put("trees", m.trees.size());
  for (std::size_t t = 0; t < m.trees.size(); ++t) {
    w.put("tree", t);
    write_tree_body(w, m.trees[t]);
  }
  return std::move(w).str();
}

Estimator parse_body(Reader& r, const std::string& type) {
  if (type == "linear") {
    LinearModel m;
    m.kind = parse_linear_kind(r.get("kind"));
    m.loss = parse_loss_kind(r.get("loss"));
    const std::size_t c = r.get_size("classes");
    const std::size_t d = r.get_size("features");
    m.weights = to_matrix(r.get_doubles("weights", c * d), c, d);
    m.bias = r.get_doubles("bias", c);
    m.trained = true;
    return m;
  }
  if (type == "naive-bayes") {
    GaussianNBModel m;
    const std::size_t c = r.get_size("classes");
    const std::size_t d = r.get_size("features");
    m.variance_floor = r.get_double("variance_floor");
    m.priors = r.get_doubles("priors", c);
    m.means = to_matrix(r.get_doubles("means", c * d), c, d);
    m.variances = to_matrix(r.get_doubles("variances", c * d), c, d);
    return m;
  }
  if (type == "decision-tree") {
    const std::size_t c = r.get_size("classes");
    const std::size_t d = r.get_size("features");
    return read_tree_body(r, c, d);
  }
  if (type == "forest") {
    ForestModel m;
    m.kind = parse_forest_kind(r.get("kind"));
    m.bootstrap = r.get_bool("bootstrap");
    const auto seed = text::parse_u64(r.get("seed"));
    if (!seed) r.fail("invalid seed");
    m.seed = *seed;
    m.num_classes = r.get_size("classes");
    m.dims = r.get_size("features");
    const std::size_t n = r.get_size("trees");
    for (std::size_t t = 0; t < n; ++t) {
      if (r.get_size("tree") != t) r.fail("trees out of order");
      m.trees.push_back(read_tree_body(r, m.num_classes, m.dims));
    }
    return m;
  }
  r.fail("unknown model type '" + type + "'");
}

}  // namespace

std::string serialize_estimator(const Estimator& model) {
  return std::visit([](const auto& m) { return serialize(m); }, model);
}

Estimator parse_estimator(std::string_view content, const std::string& source) {
  Reader r(content, source);
  std::string type;
  r.header(type);
  Estimator out = parse_body(r, type);
  if (!r.done()) r.fail("unexpected trailing entries");
  return out;
}

void save_model(const Model& model, const std::filesystem::path& path) {
  if (const auto* voting = std::get_if<VotingModel>(&model)) {
    validate(*voting);
    Writer w;
    w.header("voting");
    w.put("mode", to_string(voting->mode));
    w.put("members", voting->members.size());
    const std::string stem = path.stem().string();
    for (std::size_t j = 0; j < voting->members.size(); ++j) {
      const std::string file =
          stem + ".member" + std::to_string(j) + "." + voting->member_names[j] + ".txt";
      text::write_file(path.parent_path() / file, serialize_estimator(voting->members[j]));
      w.put("member." + std::to_string(j) + ".name", voting->member_names[j]);
      w.put("member." + std::to_string(j) + ".file", file);
    }
    text::write_file(path, std::move(w).str());
    return;
  }
  const std::string content = std::visit(
      [](const auto& m) -> std::string {
        if constexpr (std::is_same_v<std::decay_t<decltype(m)>, VotingModel>) {
          return {};
        } else {
          return serialize(m);
        }
      },
      model);
  text::write_file(path, content);
}

Model load_model(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw DataError("model file not found: " + path.string());
  const std::string content = text::read_file(path);
  Reader r(content, path.string());
  std::string type;
  r.header(type);
  if (type == "voting") {
    VotingModel voting;
    voting.mode = parse_vote_mode(r.get("mode"));
    const std::size_t n = r.get_size("members");
    for (std::size_t j = 0; j < n; ++j) {
      voting.member_names.push_back(r.get("member." + std::to_string(j) + ".name"));
      const auto member_path = path.parent_path() / r.get("member." + std::to_string(j) + ".file");
      if (!std::filesystem::exists(member_path)) {
        r.fail("member file not found: " + member_path.string());
      }
      voting.members.push_back(
          parse_estimator(text::read_file(member_path), member_path.string()));
    }
    if (!r.done()) r.fail("unexpected trailing entries");
    validate(voting);
    return voting;
  }
  Estimator e = parse_body(r, type);
  if (!r.done()) r.fail("unexpected trailing entries");
  return std::visit([](auto&& m) -> Model { return std::move(m); }, std::move(e));
}

}  // namespace smotepipe
