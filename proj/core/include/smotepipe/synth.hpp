#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "smotepipe/dataset.hpp"

namespace smotepipe::synth {

/// Logit assigned to the true class before noise is added.
inline constexpr double kClassLogit = 4.0;

struct GeneratorSpec {
  std::vector<std::size_t> counts;
  /// Standard deviation of the Gaussian noise added to every logit.
  double confusion_scale = 2.0;
  std::uint64_t seed = 0;
  /// Optional; defaults to zero-padded "class_<i>" names that sort in index
  /// order, so a CSV round trip keeps label indices.
  std::vector<std::string> class_names;
};

/// Emits counts[c] rows per class, class by class. Each row is
/// softmax(kClassLogit * e_c + noise), so rows lie on the probability simplex.
Dataset generate(const GeneratorSpec& spec);

/// Named class distributions: "dr-like" (5 classes, 3662 rows) and "bt-like"
/// (4 classes, 7023 rows); confusion_scale 2.0, seed 0.
GeneratorSpec preset(const std::string& name);

std::vector<std::string> preset_names();

}  // namespace smotepipe::synth
