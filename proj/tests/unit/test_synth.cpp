#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "smotepipe/error.hpp"
#include "smotepipe/matrix.hpp"
#include "smotepipe/synth.hpp"

using namespace smotepipe;

namespace {

double argmax_accuracy(const Dataset& ds) {
  std::size_t ok = 0;
  for (std::size_t i = 0; i < ds.rows(); ++i) ok += argmax(ds.row(i)) == ds.label(i);
  return static_cast<double>(ok) / static_cast<double>(ds.rows());
}

}  // namespace

TEST(Synth, ZeroNoiseRowsAreClosedFormSoftmax) {
  const Dataset ds = synth::generate({{2, 2}, 0.0, 123, {}});
  const double e = std::exp(4.0);
  const double p0 = e / (e + 1.0);
  EXPECT_NEAR(p0, 0.98201, 1e-5);
  for (std::size_t i = 0; i < ds.rows(); ++i) {
    const std::size_t c = ds.label(i);
    EXPECT_DOUBLE_EQ(ds.features()(i, c), p0);
    EXPECT_DOUBLE_EQ(ds.features()(i, 1 - c), 1.0 - p0);
  }
  EXPECT_EQ(synth::generate({{2, 2}, 0.0, 1, {}}), synth::generate({{2, 2}, 0.0, 2, {}}));
}

TEST(Synth, Presets) {
  const auto dr = synth::preset("dr-like");
  EXPECT_EQ(dr.counts, (std::vector<std::size_t>{1805, 370, 999, 193, 295}));
  EXPECT_EQ(dr.confusion_scale, 2.0);
  EXPECT_EQ(dr.seed, 0u);
  const auto bt = synth::preset("bt-like");
  EXPECT_EQ(bt.counts, (std::vector<std::size_t>{1621, 1645, 2000, 1757}));
  EXPECT_EQ(synth::generate(dr).num_classes(), 5u);
  EXPECT_THROW(synth::preset("mnist-like"), ConfigError);
}

TEST(Synth, InvalidSpecs) {
  EXPECT_THROW(synth::generate({{3, 0}, 1.0, 0, {}}), ConfigError);
  EXPECT_THROW(synth::generate({{3, 3}, -1.0, 0, {}}), ConfigError);
  EXPECT_THROW(synth::generate({{3}, 1.0, 0, {}}), ConfigError);
}

TEST(Synth, DeterministicGivenSeed) {
  const synth::GeneratorSpec spec{{50, 20, 5}, 2.0, 77, {}};
  EXPECT_EQ(synth::generate(spec), synth::generate(spec));
  auto other = spec;
  other.seed = 78;
  EXPECT_FALSE(synth::generate(spec) == synth::generate(other));
}

TEST(Synth, ClassNamesSortInIndexOrder) {
  const Dataset ds = synth::generate({std::vector<std::size_t>(12, 1), 1.0, 0, {}});
  auto names = ds.class_names();
  EXPECT_TRUE(std::is_sorted(names.begin(), names.end()));
  const auto dr = synth::generate(synth::preset("dr-like")).class_names();
  EXPECT_TRUE(std::is_sorted(dr.begin(), dr.end()));
}

TEST(SynthProperty, RowsOnOpenSimplex) {
  for (const double scale : {0.0, 1.0, 2.0, 4.0}) {
    const Dataset ds = synth::generate({{300, 100, 50}, scale, 4, {}});
    for (std::size_t i = 0; i < ds.rows(); ++i) {
      double sum = 0.0;
      for (const double v : ds.row(i)) {
        EXPECT_GT(v, 0.0);
        EXPECT_LT(v, 1.0);
        sum += v;
      }
      EXPECT_NEAR(sum, 1.0, 1e-12);
    }
  }
}

TEST(SynthProperty, ZeroNoiseArgmaxIsPerfect) {
  EXPECT_EQ(argmax_accuracy(synth::generate({{10, 20, 30, 40}, 0.0, 0, {}})), 1.0);
}

TEST(SynthProperty, DifficultyIsMonotoneInConfusionScale) {
  double previous = 2.0;
  for (const double scale : {0.0, 1.0, 2.0, 4.0}) {
    double mean = 0.0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      auto spec = synth::preset("dr-like");
      spec.confusion_scale = scale;
      spec.seed = seed;
      mean += argmax_accuracy(synth::generate(spec)) / 5.0;
    }
    EXPECT_LE(mean, previous + 0.005) << "scale " << scale;
    previous = mean;
  }
}
