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

#include "countqa/rational.h"

#include <stdexcept>

#include "gtest/gtest.h"

namespace countqa {
namespace {

TEST(CountTest, ReducesAndCompares) {
  Count a(6, 4);
  EXPECT_EQ(a.num(), 3);
  EXPECT_EQ(a.den(), 2);
  EXPECT_EQ(a, Count(3, 2));
  EXPECT_LT(Count(1), a);
  EXPECT_GT(Count(2), a);
  EXPECT_TRUE(Count(5).is_integer());
  EXPECT_FALSE(a.is_integer());
}

TEST(CountTest, RejectsNegativeAndZeroDenominator) {
  EXPECT_THROW(Count(-1), std::invalid_argument);
  EXPECT_THROW(Count(1, 0), std::invalid_argument);
}

TEST(CountTest, ParsesDecimals) {
  EXPECT_EQ(Count::FromDecimal("188,000"), Count(188000));
  EXPECT_EQ(Count::FromDecimal("84.55"), Count(1691, 20));
  EXPECT_EQ(Count::FromDecimal("1.4"), Count(7, 5));
  EXPECT_EQ(Count::FromDecimal("007"), Count(7));
  EXPECT_FALSE(Count::FromDecimal("").has_value());
  EXPECT_FALSE(Count::FromDecimal("12a").has_value());
  EXPECT_FALSE(Count::FromDecimal("1234567890123456789012").has_value());
}

TEST(CountTest, FromDoubleKeepsNineDecimals) {
  EXPECT_EQ(Count::FromDouble(165.5), Count(331, 2));
  EXPECT_EQ(Count::FromDouble(84.55), Count(1691, 20));
  EXPECT_FALSE(Count::FromDouble(-1.0).has_value());
}

TEST(CountTest, CheckedArithmetic) {
  EXPECT_EQ(Count(85).Times(Count(1000000)), Count(85000000));
  EXPECT_EQ(Count(1, 2).Plus(Count(1, 3)), Count(5, 6));
  EXPECT_FALSE(Count(INT64_MAX).Times(Count(2)).has_value());
  EXPECT_EQ(Count::Midpoint(Count(150), Count(180)), Count(165));
  EXPECT_EQ(Count::Midpoint(Count(17), Count(18)), Count(35, 2));
  EXPECT_EQ(Count::AbsDiff(Count(180), Count(200)), Count(20));
}

TEST(CountTest, ToString) {
  EXPECT_EQ(Count(180).ToString(), "180");
  EXPECT_EQ(Count(1691, 20).ToString(), "84.55");
  EXPECT_EQ(Count(1, 3).ToString(), "1/3");
}

TEST(WithinRelativeTest, InclusiveBoundary) {
  // 10% of 200 is 20.
  EXPECT_TRUE(WithinRelative(Count(180), Count(200), 100000));
  EXPECT_TRUE(WithinRelative(Count(220), Count(200), 100000));
  EXPECT_FALSE(WithinRelative(Count(179), Count(200), 100000));
  EXPECT_FALSE(WithinRelative(Count(221), Count(200), 100000));
  EXPECT_TRUE(WithinRelative(Count(0), Count(0), 0));
  EXPECT_FALSE(WithinRelative(Count(1), Count(0), 1000000));
}

TEST(WithinRelativeTest, HugeValuesDoNotOverflow) {
  Count big(INT64_MAX / 3);
  EXPECT_TRUE(WithinRelative(big, big, 0));
  EXPECT_FALSE(WithinRelative(Count(1, 1000000007), big, 300000));
}

}  // namespace
}  // namespace countqa
