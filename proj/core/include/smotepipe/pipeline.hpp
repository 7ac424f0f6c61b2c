#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "smotepipe/config.hpp"
#include "smotepipe/metrics.hpp"
#include "smotepipe/model.hpp"

namespace smotepipe {

/// Builds the experiment's dataset from a preset, generator counts, or CSV.
Dataset load_input(const InputSpec& input);

struct Evaluation {
  ConfusionMatrix confusion;
  MetricsReport report;
};

Evaluation evaluate_model(const Model& model, const Dataset& data,
                          Averaging averaging = Averaging::kMacro);

struct ModelResult {
  std::string name;
  Evaluation evaluation;
};

struct ExperimentResult {
  std::filesystem::path dir;
  std::vector<ModelResult> models;
  ClassDistribution train_before;
  ClassDistribution train_after;
  std::string test_digest;
};

/// Runs load -> stratified split -> SMOTE on the training split (if enabled)
/// -> fit each model -> evaluate on the untouched test split. Writes, under
/// cfg.output_dir:
///
///   manifest.txt              resolved config, digests, timings, status
///   summary.txt               metrics table of every model
///   <model>/model.txt         serialised model (voting adds member files)
///   <model>/metrics.txt       table, per-class breakdown, confusion grid
///   <model>/metrics.csv       machine-readable summary
///   <model>/per_class.csv
///   <model>/confusion.csv
///
/// Everything except manifest timings is a pure function of the config. A
/// failing stage rethrows with the stage name; the manifest is still written
/// and marked incomplete.
ExperimentResult run_experiment(const PipelineConfig& cfg);

/// Reads <run>/<model>/metrics.csv from both runs and subtracts a from b.
DeltaReport compare_runs(const std::filesystem::path& run_a, const std::filesystem::path& run_b,
                         const std::string& model_a, const std::string& model_b);

/// Hex digest of a dataset's canonical CSV form.
std::string dataset_digest(const Dataset& ds);

}  // namespace smotepipe
