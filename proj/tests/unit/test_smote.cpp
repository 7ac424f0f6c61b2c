#include <gtest/gtest.h>

#include <algorithm>
#include <bit>
#include <numeric>

#include "fixtures.hpp"
#include "smotepipe/error.hpp"
#include "smotepipe/smote.hpp"
#include "smotepipe/synth.hpp"

using namespace smotepipe;

namespace {

Matrix points(std::initializer_list<std::pair<double, double>> pts) {
  Matrix m(pts.size(), 2);
  std::size_t i = 0;
  for (const auto& [a, b] : pts) {
    m(i, 0) = a;
    m(i, 1) = b;
    ++i;
  }
  return m;
}

std::vector<std::size_t> rows_of(const Dataset& ds, Label c) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < ds.rows(); ++i) {
    if (ds.label(i) == c) out.push_back(i);
  }
  return out;
}

}  // namespace

TEST(Knn, NearestFirst) {
  const Matrix x = points({{0, 0}, {1, 0}, {3, 0}, {0.5, 0}});
  const std::vector<std::size_t> rows{0, 1, 2, 3};
  EXPECT_EQ(knn_within_class(x, rows, 0, 2), (std::vector<std::size_t>{3, 1}));
}

TEST(Knn, TiesGoToLowerIndex) {
  const Matrix x = points({{0, 0}, {1, 0}, {-1, 0}, {0, 5}});
  const std::vector<std::size_t> rows{0, 1, 2, 3};
  EXPECT_EQ(knn_within_class(x, rows, 0, 1), (std::vector<std::size_t>{1}));
  EXPECT_EQ(knn_within_class(x, rows, 0, 2), (std::vector<std::size_t>{1, 2}));
}

TEST(Knn, KIsCapped) {
  const Matrix x = points({{0, 0}, {1, 0}, {2, 0}, {3, 0}});
  const std::vector<std::size_t> rows{0, 1, 2, 3};
  EXPECT_EQ(knn_within_class(x, rows, 0, 10), (std::vector<std::size_t>{1, 2, 3}));
}

TEST(Knn, TooSmallClassIsError) {
  const Matrix x = points({{0, 0}});
  const std::vector<std::size_t> rows{0};
  try {
    knn_within_class(x, rows, 0, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("class too small for neighbor search"), std::string::npos);
  }
}

TEST(Knn, MatchesBruteForceOracle) {
  Rng rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t m = 2 + rng.uniform_index(199);
    const std::size_t d = 1 + rng.uniform_index(10);
    Matrix x(m, d);
    // Half the instances use a coarse grid, which produces exact distance ties.
    const bool grid = trial % 2 == 0;
    for (auto& v : x.data()) v = grid ? static_cast<double>(rng.uniform_index(5)) : rng.uniform01();
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < m; ++i) {
      if (rng.uniform01() < 0.7 || rows.size() < 2) rows.push_back(i);
    }
    const std::size_t k = 1 + rng.uniform_index(8);
    for (const std::size_t q : rows) {
      ASSERT_EQ(knn_within_class(x, rows, q, k), support::brute_force_knn(x, rows, q, k))
          << "trial " << trial << " query " << q;
    }
  }
}

TEST(Smote, TrainSplitOfDrCountsIsBalanced) {
  const Dataset full = synth::generate(synth::preset("dr-like"));
  const Split split = stratified_split(full, SplitSpec{});
  EXPECT_EQ(class_counts(split.train).counts, (std::vector<std::size_t>{1353, 277, 749, 144, 221}));
  const Dataset out = smote(split.train, SmoteParams{});
  EXPECT_EQ(class_counts(out).counts, std::vector<std::size_t>(5, 1353));
}

TEST(Smote, MidpointOfTwoPointClass) {
  // Two points per minority class, so lambda is the only free quantity and
  // every synthetic row must lie on the segment.
  Matrix x = points({{0, 0}, {1, 2}, {5, 5}, {5, 6}, {6, 5}, {6, 6}});
  const Dataset ds = Dataset::make(x, {0, 0, 1, 1, 1, 1}, {"a", "b"});
  const Dataset out = smote(ds, SmoteParams{5, {}, 3});
  ASSERT_EQ(out.rows(), 8u);
  for (std::size_t i = 6; i < 8; ++i) {
    EXPECT_EQ(out.label(i), 0u);
    EXPECT_DOUBLE_EQ(out.features()(i, 1), 2.0 * out.features()(i, 0));
  }
}

TEST(Smote, IdenticalRowsGiveIdenticalSynthetics) {
  Matrix x = points({{0.3, 0.7}, {0.3, 0.7}, {0.3, 0.7}, {1, 1}, {2, 2}, {3, 3}, {4, 4}, {5, 5}});
  const Dataset ds = Dataset::make(x, {0, 0, 0, 1, 1, 1, 1, 1}, {"a", "b"});
  const Dataset out = smote(ds, SmoteParams{});
  for (std::size_t i = ds.rows(); i < out.rows(); ++i) {
    EXPECT_EQ(out.features()(i, 0), 0.3);
    EXPECT_EQ(out.features()(i, 1), 0.7);
  }
}

TEST(Smote, SingletonClassIsDuplicated) {
  Matrix x = points({{0.1, 0.9}, {1, 1}, {2, 2}, {3, 3}});
  const Dataset ds = Dataset::make(x, {0, 1, 1, 1}, {"a", "b"});
  const Dataset out = smote(ds, SmoteParams{});
  ASSERT_EQ(class_counts(out).counts, (std::vector<std::size_t>{3, 3}));
  for (std::size_t i = 4; i < 6; ++i) {
    EXPECT_EQ(out.features()(i, 0), 0.1);
    EXPECT_EQ(out.features()(i, 1), 0.9);
  }
}

TEST(Smote, EmptyClassIsError) {
  const Dataset ds = Dataset::make(points({{0, 0}, {1, 1}}), {0, 0}, {"a", "b"});
  EXPECT_THROW(smote(ds, SmoteParams{}), DataError);
}

TEST(Smote, ToCountNeverRemovesRows) {
  Rng rng(1);
  const Dataset ds = support::random_dataset(rng, 3, 2, 5, 40);
  const auto before = class_counts(ds).counts;
  const Dataset out = smote(ds, SmoteParams{5, SmoteTarget::to_count(20), 4});
  const auto after = class_counts(out).counts;
  for (std::size_t c = 0; c < before.size(); ++c) EXPECT_EQ(after[c], std::max<std::size_t>(before[c], 20));
}

TEST(Smote, TargetParsing) {
  EXPECT_EQ(SmoteTarget::parse("not-majority").mode, SmoteTarget::Mode::kNotMajority);
  const auto t = SmoteTarget::parse("to-count=250");
  EXPECT_EQ(t.mode, SmoteTarget::Mode::kToCount);
  EXPECT_EQ(t.count, 250u);
  EXPECT_EQ(t.to_string(), "to-count=250");
  EXPECT_THROW(SmoteTarget::parse("to-count=x"), ConfigError);
  EXPECT_THROW(SmoteTarget::parse("minority"), ConfigError);
  const Dataset ds = Dataset::make(points({{0, 0}, {1, 1}, {2, 2}}), {0, 0, 1}, {"a", "b"});
  EXPECT_THROW(smote(ds, SmoteParams{0, {}, 0}), ConfigError);
}

TEST(Smote, CountsReport) {
  const std::string r = resample_counts_report({{2, 4}}, {{4, 4}});
  EXPECT_NE(r.find("+2"), std::string::npos) << r;
  EXPECT_NE(r.find("+0"), std::string::npos) << r;
  const std::string r3 = resample_counts_report({{1, 4}}, {{4, 4}});
  EXPECT_NE(r3.find("+3"), std::string::npos) << r3;
  const std::string same = resample_counts_report({{3, 3}}, {{3, 3}});
  EXPECT_EQ(same.find("+1"), std::string::npos);
  EXPECT_THROW(resample_counts_report({{1, 2}}, {{1, 2, 3}}), DataError);
}

TEST(SmoteProperty, BalanceBoxSimplexAndOriginals) {
  Rng rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t classes = 2 + rng.uniform_index(4);
    std::vector<std::size_t> counts;
    for (std::size_t c = 0; c < classes; ++c) counts.push_back(1 + rng.uniform_index(60));
    const Dataset ds = synth::generate({counts, rng.uniform(0.0, 4.0), rng.next_u64(), {}});
    const SmoteParams params{1 + rng.uniform_index(7), {}, rng.next_u64()};
    const Dataset out = smote(ds, params);

    const auto after = class_counts(out).counts;
    ASSERT_EQ(*std::max_element(after.begin(), after.end()), *std::min_element(after.begin(), after.end()));

    for (std::size_t i = 0; i < ds.rows(); ++i) {
      ASSERT_EQ(out.label(i), ds.label(i));
      for (std::size_t j = 0; j < ds.dims(); ++j) {
        ASSERT_EQ(std::bit_cast<std::uint64_t>(out.features()(i, j)),
                  std::bit_cast<std::uint64_t>(ds.features()(i, j)));
      }
    }

    for (std::size_t i = ds.rows(); i < out.rows(); ++i) {
      const auto r = out.row(i);
      double sum = 0.0;
      for (const double v : r) {
        ASSERT_GE(v, 0.0);
        sum += v;
      }
      ASSERT_NEAR(sum, 1.0, 1e-9);

      // Some pair (x_i, x_nn) of same-class originals must bound the row.
      const auto members = rows_of(ds, out.label(i));
      bool bounded = false;
      for (std::size_t a = 0; a < members.size() && !bounded; ++a) {
        const auto neighbours = members.size() == 1
                                    ? std::vector<std::size_t>{members[a]}
                                    : knn_within_class(ds.features(), members, members[a], params.k);
        for (const std::size_t b : neighbours) {
          bool inside = true;
          for (std::size_t j = 0; j < r.size() && inside; ++j) {
            const double lo = std::min(ds.features()(members[a], j), ds.features()(b, j));
            const double hi = std::max(ds.features()(members[a], j), ds.features()(b, j));
            inside = r[j] >= lo && r[j] <= hi;
          }
          if (inside) {
            bounded = true;
            break;
          }
        }
      }
      ASSERT_TRUE(bounded) << "trial " << trial << " row " << i;
    }
  }
}

TEST(SmoteProperty, Deterministic) {
  const Dataset ds = synth::generate({{80, 20, 7}, 2.0, 8, {}});
  EXPECT_EQ(smote(ds, SmoteParams{5, {}, 11}), smote(ds, SmoteParams{5, {}, 11}));
  EXPECT_FALSE(smote(ds, SmoteParams{5, {}, 11}) == smote(ds, SmoteParams{5, {}, 12}));
}
