// Copyright 2026 The CountQA Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "countqa/quantity.h"

#include <random>
#include <sstream>

#include "gtest/gtest.h"

#include "common/quantity_cases.h"

namespace countqa {
namespace {

TEST(ParseQuantityTest, SurfaceForms) {
  for (const auto &c : testing::kQuantityCases) {
    SCOPED_TRACE(std::string(c.text));
    auto q = ParseQuantity(c.text);
    ASSERT_TRUE(q.has_value());
    EXPECT_EQ(q->value, Count(c.num, c.den));
    EXPECT_EQ(q->modifier, c.modifier);
    // The surface is a verbatim substring of the input.
    EXPECT_NE(std::string_view(c.text).find(q->surface), std::string_view::npos);
  }
}

TEST(ParseQuantityTest, Absent) {
  for (std::string_view text : testing::kNoQuantityCases) {
    SCOPED_TRACE(std::string(text));
    EXPECT_FALSE(ParseQuantity(text).has_value());
  }
}

TEST(ParseQuantityTest, RangeBounds) {
  auto q = ParseQuantity("150 to 180 songs");
  ASSERT_TRUE(q);
  ASSERT_TRUE(q->range_bounds);
  EXPECT_EQ(q->range_bounds->first, Count(150));
  EXPECT_EQ(q->range_bounds->second, Count(180));
  EXPECT_EQ(q->surface, "150 to 180");

  auto aligned = ParseQuantity("between 9 and 10 million speakers");
  ASSERT_TRUE(aligned && aligned->range_bounds);
  EXPECT_EQ(aligned->range_bounds->first, Count(9000000));
}

TEST(ParseQuantityTest, FirstQuantityWins) {
  auto q = ParseQuantity("84.55 of 209 songs");
  ASSERT_TRUE(q);
  EXPECT_EQ(q->value, Count(1691, 20));
}

TEST(ParseQuantityTest, SkipsMeasurementsAndKeepsScanning) {
  auto q = ParseQuantity("A 6,650 km river with 11 countries");
  ASSERT_TRUE(q);
  EXPECT_EQ(q->value, Count(11));
}

TEST(ParseQuantityTest, ReversedRangeIsNotARange) {
  auto q = ParseQuantity("30 to 20 items");
  ASSERT_TRUE(q);
  EXPECT_EQ(q->modifier, Modifier::kExact);
  EXPECT_EQ(q->value, Count(30));
}

TEST(ParseQuantityTest, DigitRoundTrip) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::int64_t> dist(0, 999999999999LL);
  for (int i = 0; i < 2000; ++i) {
    std::int64_t n = i < 1000 ? i : dist(rng);
    auto q = ParseQuantity(std::to_string(n));
    ASSERT_TRUE(q) << n;
    EXPECT_EQ(q->value, Count(n));
    EXPECT_EQ(q->modifier, Modifier::kExact);
  }
}

TEST(ParseQuantityTest, ThousandsSeparatorRoundTrip) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::int64_t> dist(1000, 999999999999LL);
  for (int i = 0; i < 500; ++i) {
    std::int64_t n = dist(rng);
    std::string digits = std::to_string(n);
    std::string grouped;
    for (std::size_t k = 0; k < digits.size(); ++k) {
      if (k > 0 && (digits.size() - k) % 3 == 0) grouped += ',';
      grouped += digits[k];
    }
    auto q = ParseQuantity(grouped);
    ASSERT_TRUE(q) << grouped;
    EXPECT_EQ(q->value, Count(n)) << grouped;
  }
}

TEST(ParseQuantityTest, ScaleConsistency) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::int64_t> dist(0, 999999);
  for (int i = 0; i < 500; ++i) {
    std::string n = std::to_string(dist(rng));
    auto base = ParseQuantity(n);
    auto scaled = ParseQuantity(n + " million");
    ASSERT_TRUE(base && scaled) << n;
    EXPECT_EQ(scaled->value, *base->value.Times(Count(1000000))) << n;
  }
}

TEST(ParseQuantityTest, Deterministic) {
  for (const auto &c : testing::kQuantityCases) {
    EXPECT_EQ(ParseQuantity(c.text), ParseQuantity(c.text));
  }
}

TEST(QuantityParserTest, FindAllLeftToRight) {
  QuantityParser parser;
  auto all = parser.FindAll("In 1965 they had 5 albums, over 20 songs and 3 km of tape.");
  ASSERT_EQ(all.size(), 2u);
  EXPECT_EQ(all[0].quantity.value, Count(5));
  EXPECT_EQ(all[1].quantity.value, Count(20));
  EXPECT_EQ(all[1].quantity.modifier, Modifier::kAtLeast);
}

TEST(UnitStoplistTest, CustomList) {
  std::istringstream in("# units\nwidgets\n\n  gizmos  # trailing\n");
  UnitStoplist units = UnitStoplist::FromStream(in);
  EXPECT_TRUE(units.Contains("widgets"));
  EXPECT_TRUE(units.Contains("gizmos"));
  EXPECT_FALSE(units.Contains("km"));
  EXPECT_FALSE(ParseQuantity("12 widgets", units).has_value());
  EXPECT_TRUE(ParseQuantity("12 km", units).has_value());
  EXPECT_TRUE(units.MentionedIn("How many widgets are there"));
}

TEST(UnitStoplistTest, BundledFileMatchesDefault) {
  UnitStoplist file = UnitStoplist::FromFile(COUNTQA_TEST_DATA "/measurement_units.txt");
  EXPECT_EQ(file.tokens(), UnitStoplist::Default().tokens());
}

TEST(SplitCnpTest, Examples) {
  auto a = SplitCnp("17 regional languages");
  ASSERT_TRUE(a);
  EXPECT_EQ(a->quantity.value, Count(17));
  EXPECT_EQ(a->modifier_phrase, "regional languages");

  auto b = SplitCnp("700");
  ASSERT_TRUE(b);
  EXPECT_EQ(b->quantity.value, Count(700));
  EXPECT_EQ(b->modifier_phrase, "");

  auto c = SplitCnp("an estimated 700 languages");
  ASSERT_TRUE(c);
  EXPECT_EQ(c->quantity.modifier, Modifier::kApproximate);
  EXPECT_EQ(c->modifier_phrase, "languages");

  EXPECT_FALSE(SplitCnp("no count here").has_value());
}

TEST(SplitCnpTest, PrecedingPhraseWhenNothingFollows) {
  auto s = SplitCnp("Beatles albums: 13.");
  ASSERT_TRUE(s);
  EXPECT_EQ(s->modifier_phrase, "Beatles albums");
}

TEST(SplitCnpTest, StopsAtVerbsAndParticiples) {
  auto s = SplitCnp("700 languages are spoken");
  ASSERT_TRUE(s);
  EXPECT_EQ(s->modifier_phrase, "languages");
  auto t = SplitCnp("213 songs recorded in 1965");
  ASSERT_TRUE(t);
  EXPECT_EQ(t->modifier_phrase, "songs");
  auto u = SplitCnp("95 officially recognized moons");
  ASSERT_TRUE(u);
  EXPECT_EQ(u->modifier_phrase, "officially recognized moons");
}

TEST(SplitCnpTest, PhraseNeverOverlapsSurface) {
  for (const auto &c : testing::kQuantityCases) {
    auto s = SplitCnp(c.text);
    ASSERT_TRUE(s) << c.text;
    std::string_view text = c.text;
    std::size_t q = text.find(s->quantity.surface);
    std::size_t p = s->modifier_phrase.empty() ? std::string_view::npos
                                                : text.find(s->modifier_phrase);
    if (p == std::string_view::npos) continue;
    bool disjoint = p + s->modifier_phrase.size() <= q || q + s->quantity.surface.size() <= p;
    EXPECT_TRUE(disjoint) << c.text;
  }
}

}  // namespace
}  // namespace countqa
