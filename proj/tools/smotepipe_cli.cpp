// Command-line front end: generate, resample, run, evaluate, compare,
// report-delta. Exit codes: 0 ok, 1 unexpected failure, 2 config error,
// 3 data error, 4 numeric failure.

#include <array>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "smotepipe/config.hpp"
#include "smotepipe/dataset.hpp"
#include "smotepipe/error.hpp"
#include "smotepipe/metrics.hpp"
#include "smotepipe/model_io.hpp"
#include "smotepipe/pipeline.hpp"
#include "smotepipe/smote.hpp"
#include "smotepipe/synth.hpp"
#include "smotepipe/text.hpp"

namespace sp = smotepipe;

namespace {

std::array<double, 5> parse_five(const std::string& flag, const std::string& value) {
  std::vector<double> v;
  try {
    v = sp::text::parse_doubles(value);
  } catch (const sp::DataError&) {
    throw sp::ConfigError(flag + " expects five comma-separated numbers");
  }
  if (v.size() != 5) throw sp::ConfigError(flag + " expects exactly five values (ac,pr,rc,f1,sp)");
  return {v[0], v[1], v[2], v[3], v[4]};
}

std::vector<std::size_t> parse_counts(const std::string& value) {
  std::vector<std::size_t> out;
  for (const auto& part : sp::text::split(value, ',')) {
    const auto n = sp::text::parse_u64(part);
    if (!n) throw sp::ConfigError("--counts expects comma-separated integers");
    out.push_back(static_cast<std::size_t>(*n));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Imbalanced multiclass pipeline: synthetic probability features, SMOTE, "
               "class-weighted classifiers, and multiclass metrics"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Write a synthetic probability-feature dataset");
  std::string gen_preset;
  std::string gen_counts;
  std::optional<double> gen_scale;
  std::optional<std::uint64_t> gen_seed;
  std::string gen_out;
  auto* preset_opt = gen->add_option("--preset", gen_preset, "dr-like or bt-like");
  auto* counts_opt = gen->add_option("--counts", gen_counts, "Per-class counts, e.g. 100,20,5");
  preset_opt->excludes(counts_opt);
  gen->add_option("--confusion-scale", gen_scale, "Logit noise standard deviation (default 2.0)");
  gen->add_option("--seed", gen_seed, "Generator seed (default 0)");
  gen->add_option("-o,--output", gen_out, "Output CSV")->required();

  // resample
  auto* res = app.add_subcommand("resample", "SMOTE-oversample a CSV dataset");
  std::string res_in;
  std::string res_out;
  std::size_t res_k = 5;
  std::uint64_t res_seed = 0;
  std::string res_target = "not-majority";
  std::string res_label = "label";
  bool res_simplex = false;
  res->add_option("-i,--input", res_in, "Input CSV")->required();
  res->add_option("-o,--output", res_out, "Output CSV")->required();
  res->add_option("--k", res_k, "Nearest neighbours per source sample")->capture_default_str();
  res->add_option("--seed", res_seed, "Sampling seed")->capture_default_str();
  res->add_option("--target", res_target, "not-majority or to-count=N")->capture_default_str();
  res->add_option("--label-column", res_label, "Label column name")->capture_default_str();
  res->add_flag("--require-simplex", res_simplex, "Reject rows that are not probability vectors");

  // run
  auto* run = app.add_subcommand("run", "Run an experiment from a config file");
  std::string run_config;
  std::string run_output;
  run->add_option("-c,--config", run_config, "Config file (key = value)")->required();
  run->add_option("--output", run_output, "Override output_dir");

  // evaluate
  auto* eval = app.add_subcommand("evaluate", "Evaluate a saved model on a CSV dataset");
  std::string eval_model;
  std::string eval_data;
  std::string eval_avg = "macro";
  std::string eval_label = "label";
  eval->add_option("--model", eval_model, "Model file")->required();
  eval->add_option("--data", eval_data, "CSV dataset")->required();
  eval->add_option("--averaging", eval_avg, "macro or micro")->capture_default_str();
  eval->add_option("--label-column", eval_label, "Label column name")->capture_default_str();

  // compare
  auto* cmp = app.add_subcommand("compare", "Metric deltas between two experiment runs");
  std::string cmp_a;
  std::string cmp_b;
  std::string cmp_model;
  std::string cmp_model_b;
  cmp->add_option("RUN_A", cmp_a, "Baseline run directory")->required();
  cmp->add_option("RUN_B", cmp_b, "Improved run directory")->required();
  cmp->add_option("--model", cmp_model, "Model name in RUN_A (and RUN_B)")->required();
  cmp->add_option("--model-b", cmp_model_b, "Model name in RUN_B if it differs");

  // report-delta
  auto* delta = app.add_subcommand("report-delta", "Percentage-point deltas between two metric rows");
  std::string delta_base;
  std::string delta_improved;
  delta->add_option("--baseline", delta_base, "ac,pr,rc,f1,sp in percent")->required();
  delta->add_option("--improved", delta_improved, "ac,pr,rc,f1,sp in percent")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : static_cast<int>(sp::ErrorKind::kConfig);
  }

  try {
    if (*gen) {
      sp::synth::GeneratorSpec spec;
      if (!gen_preset.empty()) {
        spec = sp::synth::preset(gen_preset);
      } else if (!gen_counts.empty()) {
        spec.counts = parse_counts(gen_counts);
      } else {
        throw sp::ConfigError("generate needs --preset or --counts");
      }
      if (gen_scale) spec.confusion_scale = *gen_scale;
      if (gen_seed) spec.seed = *gen_seed;
      const sp::Dataset ds = sp::synth::generate(spec);
      sp::save_csv(ds, gen_out);
      std::cout << "wrote " << ds.rows() << " rows, " << ds.num_classes() << " classes to "
                << gen_out << "\n";
    } else if (*res) {
      const sp::Dataset in = sp::load_csv(res_in, res_label);
      if (res_simplex) sp::require_simplex(in);
      sp::SmoteParams params;
      params.k = res_k;
      params.seed = res_seed;
      params.target = sp::SmoteTarget::parse(res_target);
      const sp::Dataset out = sp::smote(in, params);
      sp::save_csv(out, res_out, res_label);
      std::cout << sp::resample_counts_report(sp::class_counts(in), sp::class_counts(out),
                                              in.class_names());
    } else if (*run) {
      sp::PipelineConfig cfg = sp::load_config(run_config);
      if (!run_output.empty()) cfg.output_dir = run_output;
      const auto result = sp::run_experiment(cfg);
      std::vector<std::pair<std::string, sp::MetricsReport>> rows;
      for (const auto& m : result.models) rows.emplace_back(m.name, m.evaluation.report);
      std::cout << sp::format_metrics_table(rows);
      std::cout << "results in " << result.dir.string() << "\n";
    } else if (*eval) {
      const sp::Model model = sp::load_model(eval_model);
      const sp::Dataset data = sp::load_csv(eval_data, eval_label);
      const auto e = sp::evaluate_model(model, data, sp::parse_averaging(eval_avg));
      std::cout << sp::format_metrics_table({{sp::to_string(sp::model_kind(model)), e.report}})
                << "\n"
                << sp::confusion_grid(e.confusion);
    } else if (*cmp) {
      const auto report =
          sp::compare_runs(cmp_a, cmp_b, cmp_model, cmp_model_b.empty() ? cmp_model : cmp_model_b);
      std::cout << sp::format_delta_report(report);
    } else if (*delta) {
      const auto report = sp::delta_report_percent(parse_five("--baseline", delta_base),
                                                   parse_five("--improved", delta_improved));
      std::cout << sp::format_delta_report(report);
    }
  } catch (const sp::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
