#include "smotepipe/synth.hpp"

#include <algorithm>
#include <cmath>

#include "smotepipe/error.hpp"
#include "smotepipe/rng.hpp"

namespace smotepipe::synth {
namespace {

std::vector<std::string> default_names(std::size_t n) {
  const std::size_t width = std::to_string(n - 1).size();
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) {
    std::string digits = std::to_string(i);
    digits.insert(0, width - digits.size(), '0');
    names.push_back("class_" + digits);
  }
  return names;
}

}  // namespace

Dataset generate(const GeneratorSpec& spec) {
  const std::size_t num_classes = spec.counts.size();
  if (num_classes < 2) throw ConfigError("generator needs at least 2 classes");
  if (std::any_of(spec.counts.begin(), spec.counts.end(), [](std::size_t n) { return n == 0; })) {
    throw ConfigError("generator class counts must be positive");
  }
  if (!(spec.confusion_scale >= 0.0) || !std::isfinite(spec.confusion_scale)) {
    throw ConfigError("confusion scale must be a non-negative finite number");
  }
  std::vector<std::string> names = spec.class_names;
  if (names.empty()) names = default_names(num_classes);
  if (names.size() != num_classes) throw ConfigError("class name count does not match counts");

  std::size_t total = 0;
  for (const auto n : spec.counts) total += n;

  Rng rng(spec.seed);
  Matrix x(total, num_classes);
  std::vector<Label> y(total);
  std::vector<double> logits(num_classes);
  std::size_t r = 0;
  for (std::size_t c = 0; c < num_classes; ++c) {
    for (std::size_t n = 0; n < spec.counts[c]; ++n, ++r) {
      for (std::size_t j = 0; j < num_classes; ++j) {
        const double noise = spec.confusion_scale > 0.0 ? spec.confusion_scale * rng.normal() : 0.0;
        logits[j] = (j == c ? kClassLogit : 0.0) + noise;
      }
      const double top = *std::max_element(logits.begin(), logits.end());
      double sum = 0.0;
      auto out = x.row(r);
      for (std::size_t j = 0; j < num_classes; ++j) {
        out[j] = std::exp(logits[j] - top);
        sum += out[j];
      }
      for (auto& v : out) v /= sum;
      y[r] = c;
    }
  }

  std::vector<std::string> feature_names;
  for (std::size_t j = 0; j < num_classes; ++j) feature_names.push_back("p" + std::to_string(j));
  return Dataset::make(std::move(x), std::move(y), std::move(names), std::move(feature_names));
}

GeneratorSpec preset(const std::string& name) {
  GeneratorSpec spec;
  spec.confusion_scale = 2.0;
  spec.seed = 0;
  if (name == "dr-like") {
    spec.counts = {1805, 370, 999, 193, 295};
    spec.class_names = {"0_No_DR", "1_Mild", "2_Moderate", "3_Severe", "4_Proliferative_DR"};
  } else if (name == "bt-like") {
    spec.counts = {1621, 1645, 2000, 1757};
    spec.class_names = {"0_Glioma", "1_Meningioma", "2_No_Tumor", "3_Pituitary"};
  } else {
    throw ConfigError("unknown preset '" + name + "'");
  }
  return spec;
}

std::vector<std::string> preset_names() { return {"dr-like", "bt-like"}; }

}  // namespace smotepipe::synth
