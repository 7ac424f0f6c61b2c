#include "smotepipe/pipeline.hpp"

#include <chrono>
#include <optional>

#include "smotepipe/error.hpp"
#include "smotepipe/model_io.hpp"
#include "smotepipe/smote.hpp"
#include "smotepipe/synth.hpp"
#include "smotepipe/text.hpp"

namespace smotepipe {

Dataset load_input(const InputSpec& input) {
  Dataset ds;
  if (!input.path.empty()) {
    ds = load_csv(input.path, input.label_column);
  } else {
    synth::GeneratorSpec spec;
    if (!input.preset.empty()) {
      spec = synth::preset(input.preset);
    } else {
      spec.counts = input.counts;
    }
    spec.confusion_scale = input.confusion_scale;
    spec.seed = input.seed;
    ds = synth::generate(spec);
  }
  if (input.require_simplex) require_simplex(ds);
  return ds;
}

Evaluation evaluate_model(const Model& model, const Dataset& data, Averaging averaging) {
  if (model_dims(model) != data.dims()) {
    throw DataError("model expects " + std::to_string(model_dims(model)) + " features, data has " +
                    std::to_string(data.dims()));
  }
  if (model_classes(model) != data.num_classes()) {
    throw DataError("model has " + std::to_string(model_classes(model)) + " classes, data has " +
                    std::to_string(data.num_classes()));
  }
  const auto predicted = predict(model, data.features());
  Evaluation out;
  out.confusion = confusion_matrix(data.labels(), predicted, data.num_classes(), data.class_names());
  out.report = compute_metrics(out.confusion, averaging);
  return out;
}

std::string dataset_digest(const Dataset& ds) { return text::hex_digest(to_csv(ds)); }

namespace {

std::string counts_text(const ClassDistribution& d) {
  std::string out;
  for (std::size_t c = 0; c < d.counts.size(); ++c) {
    if (c > 0) out += ",";
    out += std::to_string(d.counts[c]);
  }
  return out;
}

class Manifest {
 public:
  void put(const std::string& key, const std::string& value) {
    entries_ += "manifest." + key + " = " + value + "\n";
  }
  void time(const std::string& stage, std::chrono::steady_clock::duration d) {
    const auto ms = std::chrono::duration<double, std::milli>(d).count();
    put("time." + stage + "_ms", text::format_fixed(ms, 3));
  }
  void write(const std::filesystem::path& dir, const PipelineConfig& cfg, bool complete,
             const std::string& failed_stage, const std::string& error) const {
    std::string out = "# smotepipe experiment manifest; feed back with `run -c` to reproduce\n";
    out += "manifest.format = smotepipe-manifest\n";
    out += "manifest.version = 1\n";
    out += std::string("manifest.status = ") + (complete ? "complete" : "incomplete") + "\n";
    if (!complete) {
      out += "manifest.failed_stage = " + failed_stage + "\n";
      std::string flat = error;
      for (auto& ch : flat) {
        if (ch == '\n' || ch == '#') ch = ' ';
      }
      out += "manifest.error = " + flat + "\n";
    }
    out += entries_;
    out += "\n# resolved configuration\n";
    out += to_config_text(cfg);
    text::write_file(dir / "manifest.txt", out);
  }

 private:
  std::string entries_;
};

std::string metrics_text(const std::string& name, const Evaluation& eval) {
  std::string out = "model: " + name + "\n";
  out += "averaging: " + to_string(eval.report.averaging) + "\n\n";
  out += format_metrics_table({{name, eval.report}});
  out += "\n";
  out += format_per_class_table(eval.report, eval.confusion.class_names());
  out += "\nconfusion matrix (rows actual, columns predicted)\n";
  out += confusion_grid(eval.confusion);
  if (eval.report.zero_division) {
    out += "\nwarning: some per-class ratios had a zero denominator and were set to 0\n";
  }
  return out;
}

}  // namespace

ExperimentResult run_experiment(const PipelineConfig& cfg) {
  validate(cfg);
  if (cfg.output_dir.empty()) throw ConfigError("output_dir is required");
  std::filesystem::create_directories(cfg.output_dir);

  using Clock = std::chrono::steady_clock;
  Manifest manifest;
  ExperimentResult result;
  result.dir = cfg.output_dir;
  std::string current = "setup";

  const auto run_stage = [&](const std::string& name, auto&& body) {
    current = name;
    const auto start = Clock::now();
    body();
    manifest.time(name, Clock::now() - start);
  };

  try {
    Dataset data;
    run_stage("load", [&] { data = load_input(cfg.input); });
    manifest.put("data.rows", std::to_string(data.rows()));
    manifest.put("data.class_counts", counts_text(class_counts(data)));
    manifest.put("digest.data", dataset_digest(data));

    Split split;
    run_stage("split", [&] { split = stratified_split(data, cfg.split); });
    result.train_before = class_counts(split.train);
    result.test_digest = dataset_digest(split.test);
    manifest.put("digest.train", dataset_digest(split.train));
    manifest.put("digest.val", split.val.rows() > 0 ? dataset_digest(split.val) : "empty");
    manifest.put("digest.test", result.test_digest);
    manifest.put("split.train_counts", counts_text(result.train_before));
    if (split.val.rows() > 0) manifest.put("split.val_counts", counts_text(class_counts(split.val)));
    manifest.put("split.test_counts", counts_text(class_counts(split.test)));

    Dataset train = split.train;
    if (cfg.smote_enabled) {
      run_stage("smote", [&] { train = smote(split.train, cfg.smote); });
    }
    result.train_after = class_counts(train);
    manifest.put("smote.train_counts", counts_text(result.train_after));
    manifest.put("digest.train_resampled", dataset_digest(train));

    std::vector<std::pair<std::string, MetricsReport>> summary;
    for (const auto& spec : cfg.models) {
      const std::filesystem::path model_dir = cfg.output_dir / spec.name;
      std::filesystem::create_directories(model_dir);
      std::optional<Model> model;
      run_stage("fit." + spec.name, [&] { model.emplace(fit_model(spec, train)); });
      manifest.put("seed.model." + spec.name, std::to_string(spec.seed));
      if (spec.kind == ModelKind::kVoting) {
        const auto& members = spec.members.empty() ? default_voting_members() : spec.members;
        for (std::size_t j = 0; j < members.size(); ++j) {
          manifest.put("seed.model." + spec.name + ".member." + members[j].name,
                       std::to_string(spec.seed + j));
        }
      }

      Evaluation eval;
      run_stage("evaluate." + spec.name, [&] {
        eval = evaluate_model(*model, split.test, cfg.averaging);
        save_model(*model, model_dir / "model.txt");
        text::write_file(model_dir / "metrics.txt", metrics_text(spec.name, eval));
        text::write_file(model_dir / "metrics.csv", metrics_csv(spec.name, eval.report));
        text::write_file(model_dir / "per_class.csv",
                         per_class_csv(eval.report, eval.confusion.class_names()));
        text::write_file(model_dir / "confusion.csv", confusion_csv(eval.confusion));
      });
      summary.emplace_back(spec.name, eval.report);
      result.models.push_back({spec.name, std::move(eval)});
    }
    current = "report";
    text::write_file(cfg.output_dir / "summary.txt", format_metrics_table(summary));
    manifest.write(cfg.output_dir, cfg, true, {}, {});
  } catch (const Error& e) {
    manifest.write(cfg.output_dir, cfg, false, current, e.what());
    throw_error(e.kind(), "stage '" + current + "': " + e.what());
  } catch (const std::exception& e) {
    manifest.write(cfg.output_dir, cfg, false, current, e.what());
    throw;
  }
  return result;
}

DeltaReport compare_runs(const std::filesystem::path& run_a, const std::filesystem::path& run_b,
                         const std::string& model_a, const std::string& model_b) {
  const auto read = [](const std::filesystem::path& run, const std::string& model) {
    const auto path = run / model / "metrics.csv";
    if (!std::filesystem::exists(path)) {
      throw DataError("model '" + model + "' not found in run " + run.string());
    }
    return parse_metrics_csv(text::read_file(path), path.string()).second;
  };
  return delta_report(read(run_a, model_a), read(run_b, model_b));
}

}  // namespace smotepipe
