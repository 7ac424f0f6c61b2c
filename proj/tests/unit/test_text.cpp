#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "smotepipe/error.hpp"
#include "smotepipe/text.hpp"

namespace st = smotepipe::text;

TEST(Text, TrimAndSplit) {
  EXPECT_EQ(st::trim("  a b \t\r"), "a b");
  EXPECT_EQ(st::trim(""), "");
  const auto parts = st::split("a,,b", ',');
  ASSERT_EQ(parts.size(), 3u);
  EXPECT_EQ(parts[1], "");
}

TEST(Text, ParseDoubleRejectsPartialTokens) {
  EXPECT_EQ(st::parse_double("0.25"), 0.25);
  EXPECT_EQ(st::parse_double(" -1e3 "), -1000.0);
  EXPECT_FALSE(st::parse_double("0.x9"));
  EXPECT_FALSE(st::parse_double("1.0abc"));
  EXPECT_FALSE(st::parse_double(""));
  EXPECT_FALSE(st::parse_u64("-3"));
  EXPECT_EQ(st::parse_int("-3"), -3);
}

TEST(Text, FormatDoubleRoundTripsExactly) {
  for (const double v : {0.1, 1.0 / 3.0, -2.5e-300, 123456789.123456789,
                         std::numeric_limits<double>::denorm_min(),
                         std::numeric_limits<double>::max()}) {
    EXPECT_EQ(st::parse_double(st::format_double(v)), v) << st::format_double(v);
  }
}

TEST(Text, FormatFixedHasNoNegativeZero) {
  EXPECT_EQ(st::format_fixed(-0.001, 2), "0.00");
  EXPECT_EQ(st::format_fixed(1.975, 2).size(), 4u);
  EXPECT_EQ(st::format_fixed(83.52, 2), "83.52");
}

TEST(Text, KeyValuesKeepOrderAndLines) {
  const auto kv = st::parse_key_values("# c\n a = 1 \n\nb=x y # tail\n", "t");
  ASSERT_EQ(kv.size(), 2u);
  EXPECT_EQ(kv[0].key, "a");
  EXPECT_EQ(kv[0].value, "1");
  EXPECT_EQ(kv[0].line, 2);
  EXPECT_EQ(kv[1].key, "b");
  EXPECT_EQ(kv[1].line, 4);
}

TEST(Text, KeyValueWithoutEqualsIsConfigError) {
  EXPECT_THROW(st::parse_key_values("just words\n", "t"), smotepipe::ConfigError);
}

TEST(Text, Fnv1aKnownVectors) {
  EXPECT_EQ(st::fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(st::fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(st::hex_digest("a"), "af63dc4c8601ec8c");
}
