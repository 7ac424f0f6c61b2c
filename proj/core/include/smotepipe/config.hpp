#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "smotepipe/dataset.hpp"
#include "smotepipe/estimator.hpp"
#include "smotepipe/metrics.hpp"
#include "smotepipe/smote.hpp"

namespace smotepipe {

/// Where the experiment's dataset comes from: a generator preset, explicit
/// generator counts, or a CSV file. Exactly one must be set.
struct InputSpec {
  std::string preset;
  std::vector<std::size_t> counts;
  std::filesystem::path path;
  std::string label_column = "label";
  double confusion_scale = 2.0;
  std::uint64_t seed = 0;
  bool require_simplex = false;
};

struct PipelineConfig {
  std::uint64_t seed = 0;
  InputSpec input;
  SplitSpec split;
  bool smote_enabled = true;
  SmoteParams smote;
  std::vector<ModelSpec> models;
  Averaging averaging = Averaging::kMacro;
  std::filesystem::path output_dir;
};

/// Parses `key = value` lines. Seeds that are not given explicitly derive
/// from the top-level `seed`: split uses seed, SMOTE seed + 1, the generator
/// seed + 2, and model i seed + 1000 * (i + 1). Keys under `manifest.` are
/// ignored so a run manifest can be fed back in. Throws ConfigError naming
/// the line for unknown keys and bad values.
PipelineConfig parse_config(std::string_view content, const std::string& source = "<memory>");
PipelineConfig load_config(const std::filesystem::path& path);

/// Canonical form with every seed and hyperparameter spelled out.
std::string to_config_text(const PipelineConfig& cfg);

void validate(const PipelineConfig& cfg);

}  // namespace smotepipe
