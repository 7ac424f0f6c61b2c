#include "smotepipe/config.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "smotepipe/ensemble.hpp"
#include "smotepipe/error.hpp"
#include "smotepipe/text.hpp"

namespace smotepipe {
namespace {

struct Entry {
  std::string value;
  int line = 0;
  bool used = false;
};

class Entries {
 public:
  Entries(std::string_view content, std::string source) : source_(std::move(source)) {
    for (auto& kv : text::parse_key_values(content, source_)) {
      if (kv.key.rfind("manifest.", 0) == 0) continue;
      if (map_.count(kv.key) != 0) fail(kv.line, "duplicate key '" + kv.key + "'");
      map_[kv.key] = Entry{std::move(kv.value), kv.line, false};
    }
  }

  const Entry* find(const std::string& key) {
    const auto it = map_.find(key);
    if (it == map_.end()) return nullptr;
    it->second.used = true;
    return &it->second;
  }

  std::vector<std::pair<std::string, Entry*>> with_prefix(const std::string& prefix) {
    std::vector<std::pair<std::string, Entry*>> out;
    for (auto& [k, e] : map_) {
      if (k.rfind(prefix, 0) == 0) out.emplace_back(k.substr(prefix.size()), &e);
    }
    return out;
  }

  void check_all_used() const {
    for (const auto& [k, e] : map_) {
      if (!e.used) fail(e.line, "unknown key '" + k + "'");
    }
  }

  [[noreturn]] void fail(int line, const std::string& what) const {
    throw ConfigError(source_ + ":" + std::to_string(line) + ": " + what);
  }

 private:
  std::map<std::string, Entry> map_;
  std::string source_;
};

template <typename T, typename Parse>
T parse_or_fail(const Entries& entries, const Entry& e, const std::string& key, Parse parse) {
  try {
    return parse(e.value);
  } catch (const Error& err) {
    entries.fail(e.line, key + ": " + err.what());
  }
}

std::uint64_t as_u64(const Entries& en, const Entry& e, const std::string& key) {
  const auto v = text::parse_u64(e.value);
  if (!v) en.fail(e.line, key + " must be a non-negative integer");
  return *v;
}

double as_double(const Entries& en, const Entry& e, const std::string& key) {
  const auto v = text::parse_double(e.value);
  if (!v) en.fail(e.line, key + " must be a number");
  return *v;
}

bool as_bool(const Entries& en, const Entry& e, const std::string& key) {
  if (e.value == "true") return true;
  if (e.value == "false") return false;
  en.fail(e.line, key + " must be true or false");
}

bool is_linear(ModelKind k) {
  return k == ModelKind::kLogistic || k == ModelKind::kLinearSvm || k == ModelKind::kSgd;
}
bool is_forest(ModelKind k) { return k == ModelKind::kRandomForest || k == ModelKind::kExtraTrees; }

std::string bool_text(bool b) { return b ? "true" : "false"; }

// "name" or "name:kind".
std::vector<ModelSpec> parse_model_list(const Entries& en, const Entry& e, const std::string& key) {
  std::vector<ModelSpec> out;
  std::set<std::string> names;
  for (const auto& raw : text::split(e.value, ',')) {
    const std::string item(text::trim(raw));
    if (item.empty()) en.fail(e.line, key + " has an empty entry");
    const auto colon = item.find(':');
    const std::string name = item.substr(0, colon);
    const std::string kind = colon == std::string::npos ? name : item.substr(colon + 1);
    if (name.empty() || name.find('.') != std::string::npos) {
      en.fail(e.line, "invalid model name '" + name + "'");
    }
    if (!names.insert(name).second) en.fail(e.line, "duplicate model name '" + name + "'");
    const ModelKind k = parse_or_fail<ModelKind>(
        en, e, key, [&](const std::string&) { return parse_model_kind(kind); });
    out.push_back(default_spec(k, name));
  }
  return out;
}

void apply_param(const Entries& en, ModelSpec& spec, const std::string& param, const Entry& e,
                 const std::string& key) {
  const ModelKind k = spec.kind;
  const bool weighted = k != ModelKind::kNaiveBayes && k != ModelKind::kVoting;
  const bool treeish = k == ModelKind::kDecisionTree || is_forest(k);

  if (param == "seed") {
    spec.seed = as_u64(en, e, key);
  } else if (param == "class_weight" && weighted) {
    spec.class_weighting = parse_or_fail<ClassWeighting>(en, e, key, parse_class_weighting);
  } else if (is_linear(k) && param == "learning_rate") {
    spec.linear.learning_rate = as_double(en, e, key);
  } else if (is_linear(k) && param == "epochs") {
    spec.linear.epochs = as_u64(en, e, key);
  } else if (is_linear(k) && param == "l2") {
    spec.linear.l2 = as_double(en, e, key);
  } else if (is_linear(k) && param == "tolerance") {
    spec.linear.tolerance = as_double(en, e, key);
  } else if (is_linear(k) && param == "loss") {
    spec.linear.loss = parse_or_fail<LossKind>(en, e, key, parse_loss_kind);
  } else if (k == ModelKind::kNaiveBayes && param == "smoothing") {
    spec.nb_smoothing = as_double(en, e, key);
  } else if (treeish && param == "max_depth") {
    spec.tree.max_depth = as_u64(en, e, key);
  } else if (treeish && param == "min_samples_leaf") {
    spec.tree.min_samples_leaf = as_u64(en, e, key);
  } else if (treeish && param == "max_features") {
    spec.tree.max_features = as_u64(en, e, key);
  } else if (k == ModelKind::kDecisionTree && param == "split_mode") {
    spec.tree.split_mode = parse_or_fail<SplitMode>(en, e, key, parse_split_mode);
  } else if (is_forest(k) && param == "n_trees") {
    spec.forest.n_trees = as_u64(en, e, key);
  } else if (is_forest(k) && param == "bootstrap") {
    spec.forest.bootstrap = as_bool(en, e, key);
  } else if (k == ModelKind::kVoting && param == "mode") {
    spec.vote_mode = parse_or_fail<VoteMode>(en, e, key, parse_vote_mode);
  } else {
    en.fail(e.line, "unknown parameter '" + param + "' for model kind " + to_string(k));
  }
}

void emit_params(std::string& out, const std::string& prefix, const ModelSpec& spec,
                 bool with_seed) {
  const auto put = [&](const std::string& k, const std::string& v) {
    out += prefix + k + " = " + v + "\n";
  };
  const ModelKind k = spec.kind;
  if (with_seed) put("seed", std::to_string(spec.seed));
  if (k != ModelKind::kNaiveBayes && k != ModelKind::kVoting) {
    put("class_weight", to_string(spec.class_weighting));
  }
  if (is_linear(k)) {
    put("learning_rate", text::format_double(spec.linear.learning_rate));
    put("epochs", std::to_string(spec.linear.epochs));
    put("l2", text::format_double(spec.linear.l2));
    put("tolerance", text::format_double(spec.linear.tolerance));
    if (spec.linear.loss) put("loss", *spec.linear.loss == LossKind::kHinge ? "hinge" : "log");
  }
  if (k == ModelKind::kNaiveBayes) put("smoothing", text::format_double(spec.nb_smoothing));
  if (k == ModelKind::kDecisionTree || is_forest(k)) {
    put("max_depth", std::to_string(spec.tree.max_depth));
    put("min_samples_leaf", std::to_string(spec.tree.min_samples_leaf));
    put("max_features", std::to_string(spec.tree.max_features));
  }
  if (k == ModelKind::kDecisionTree) put("split_mode", to_string(spec.tree.split_mode));
  if (is_forest(k)) {
    put("n_trees", std::to_string(spec.forest.n_trees));
    if (spec.forest.bootstrap) put("bootstrap", bool_text(*spec.forest.bootstrap));
  }
}

std::string model_list_text(const std::vector<ModelSpec>& specs) {
  std::string out;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    if (i > 0) out += ", ";
    out += specs[i].name;
    if (specs[i].name != to_string(specs[i].kind)) out += ":" + to_string(specs[i].kind);
  }
  return out;
}

}  // namespace

PipelineConfig parse_config(std::string_view content, const std::string& source) {
  Entries en(content, source);
  PipelineConfig cfg;

  if (const auto* e = en.find("seed")) cfg.seed = as_u64(en, *e, "seed");
  if (const auto* e = en.find("output_dir")) cfg.output_dir = e->value;

  InputSpec& in = cfg.input;
  in.seed = cfg.seed + 2;
  if (const auto* e = en.find("input.preset")) in.preset = e->value;
  if (const auto* e = en.find("input.path")) in.path = e->value;
  if (const auto* e = en.find("input.counts")) {
    for (const auto& part : text::split(e->value, ',')) {
      const auto n = text::parse_u64(part);
      if (!n) en.fail(e->line, "input.counts must be a comma-separated list of integers");
      in.counts.push_back(static_cast<std::size_t>(*n));
    }
  }
  if (const auto* e = en.find("input.label_column")) in.label_column = e->value;
  if (const auto* e = en.find("input.confusion_scale")) {
    in.confusion_scale = as_double(en, *e, "input.confusion_scale");
  }
  if (const auto* e = en.find("input.seed")) in.seed = as_u64(en, *e, "input.seed");
  if (const auto* e = en.find("input.require_simplex")) {
    in.require_simplex = as_bool(en, *e, "input.require_simplex");
  }
  const int sources = (!in.preset.empty()) + (!in.path.empty()) + (!in.counts.empty());
  if (sources != 1) {
    throw ConfigError(source + ": exactly one of input.preset, input.path, input.counts is required");
  }

  cfg.split.seed = cfg.seed;
  if (const auto* e = en.find("split.train")) cfg.split.train_fraction = as_double(en, *e, "split.train");
  if (const auto* e = en.find("split.val")) cfg.split.val_fraction = as_double(en, *e, "split.val");
  if (const auto* e = en.find("split.test")) cfg.split.test_fraction = as_double(en, *e, "split.test");
  if (const auto* e = en.find("split.seed")) cfg.split.seed = as_u64(en, *e, "split.seed");

  cfg.smote.seed = cfg.seed + 1;
  if (const auto* e = en.find("smote.enabled")) cfg.smote_enabled = as_bool(en, *e, "smote.enabled");
  if (const auto* e = en.find("smote.k")) cfg.smote.k = as_u64(en, *e, "smote.k");
  if (const auto* e = en.find("smote.target")) {
    cfg.smote.target = parse_or_fail<SmoteTarget>(en, *e, "smote.target", SmoteTarget::parse);
  }
  if (const auto* e = en.find("smote.seed")) cfg.smote.seed = as_u64(en, *e, "smote.seed");

  if (const auto* e = en.find("metrics.averaging")) {
    cfg.averaging = parse_or_fail<Averaging>(en, *e, "metrics.averaging", parse_averaging);
  }

  const auto* models = en.find("models");
  if (!models) throw ConfigError(source + ": 'models' is required");
  cfg.models = parse_model_list(en, *models, "models");
  for (std::size_t i = 0; i < cfg.models.size(); ++i) {
    ModelSpec& spec = cfg.models[i];
    spec.seed = cfg.seed + 1000 * (i + 1);
    const std::string prefix = "model." + spec.name + ".";

    if (spec.kind == ModelKind::kVoting) {
      if (const auto* e = en.find(prefix + "members")) {
        spec.members = parse_model_list(en, *e, prefix + "members");
      } else {
        spec.members = default_voting_members();
      }
    }
    for (auto& [rest, entry] : en.with_prefix(prefix)) {
      if (rest == "members") continue;
      const auto dot = rest.find('.');
      if (dot == std::string::npos) {
        entry->used = true;
        apply_param(en, spec, rest, *entry, prefix + rest);
        continue;
      }
      if (spec.kind != ModelKind::kVoting) continue;  // reported as unknown below
      const std::string member = rest.substr(0, dot);
      const std::string param = rest.substr(dot + 1);
      auto it = std::find_if(spec.members.begin(), spec.members.end(),
                             [&](const ModelSpec& m) { return m.name == member; });
      if (it == spec.members.end() || param == "seed" || param.find('.') != std::string::npos) {
        continue;
      }
      entry->used = true;
      apply_param(en, *it, param, *entry, prefix + rest);
    }
  }

  en.check_all_used();
  validate(cfg);
  return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw ConfigError("config file not found: " + path.string());
  return parse_config(text::read_file(path), path.string());
}

void validate(const PipelineConfig& cfg) {
  validate_split_spec(cfg.split);
  if (cfg.models.empty()) throw ConfigError("at least one model is required");
  if (cfg.smote.k == 0) throw ConfigError("smote.k must be at least 1");
  for (const auto& spec : cfg.models) {
    if (is_linear(spec.kind)) validate(spec.linear);
    if (spec.kind == ModelKind::kVoting) {
      if (spec.members.size() < 2) {
        throw ConfigError("model '" + spec.name + "': voting ensemble needs at least 2 members");
      }
      for (const auto& m : spec.members) {
        if (m.kind == ModelKind::kVoting) {
          throw ConfigError("model '" + spec.name + "': voting ensembles cannot be nested");
        }
        if (is_linear(m.kind)) validate(m.linear);
        if (spec.vote_mode == VoteMode::kSoft && !spec_has_proba(m)) {
          throw ConfigError("model '" + spec.name + "': soft voting member '" + m.name +
                            "' has no probabilities");
        }
      }
    }
    if (is_forest(spec.kind) && spec.forest.n_trees == 0) {
      throw ConfigError("model '" + spec.name + "': n_trees must be positive");
    }
  }
}

std::string to_config_text(const PipelineConfig& cfg) {
  std::string out;
  const auto put = [&](const std::string& k, const std::string& v) { out += k + " = " + v + "\n"; };
  put("seed", std::to_string(cfg.seed));
  if (!cfg.output_dir.empty()) put("output_dir", cfg.output_dir.string());
  if (!cfg.input.preset.empty()) put("input.preset", cfg.input.preset);
  if (!cfg.input.path.empty()) put("input.path", cfg.input.path.string());
  if (!cfg.input.counts.empty()) {
    std::string counts;
    for (std::size_t i = 0; i < cfg.input.counts.size(); ++i) {
      if (i > 0) counts += ",";
      counts += std::to_string(cfg.input.counts[i]);
    }
    put("input.counts", counts);
  }
  put("input.label_column", cfg.input.label_column);
  put("input.confusion_scale", text::format_double(cfg.input.confusion_scale));
  put("input.seed", std::to_string(cfg.input.seed));
  put("input.require_simplex", bool_text(cfg.input.require_simplex));
  put("split.train", text::format_double(cfg.split.train_fraction));
  put("split.val", text::format_double(cfg.split.val_fraction));
  put("split.test", text::format_double(cfg.split.test_fraction));
  put("split.seed", std::to_string(cfg.split.seed));
  put("smote.enabled", bool_text(cfg.smote_enabled));
  put("smote.k", std::to_string(cfg.smote.k));
  put("smote.target", cfg.smote.target.to_string());
  put("smote.seed", std::to_string(cfg.smote.seed));
  put("metrics.averaging", to_string(cfg.averaging));
  put("models", model_list_text(cfg.models));
  for (const auto& spec : cfg.models) {
    const std::string prefix = "model." + spec.name + ".";
    emit_params(out, prefix, spec, true);
    if (spec.kind == ModelKind::kVoting) {
      put(prefix + "mode", to_string(spec.vote_mode));
      put(prefix + "members", model_list_text(spec.members));
      for (const auto& m : spec.members) emit_params(out, prefix + m.name + ".", m, false);
    }
  }
  return out;
}

}  // namespace smotepipe
