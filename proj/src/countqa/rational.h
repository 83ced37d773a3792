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

#ifndef COUNTQA_RATIONAL_H_
#define COUNTQA_RATIONAL_H_

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace countqa {

// Nonnegative exact count. Stored reduced with a positive denominator, so
// equality is structural. Comparisons widen to 128 bits and never overflow
// for values produced by the quantity parser.
class Count {
 public:
  constexpr Count() = default;
  // Throws std::invalid_argument on a zero denominator and std::overflow_error
  // when the reduced fraction does not fit.
  Count(std::int64_t num, std::int64_t den = 1);

  static std::optional<Count> FromDecimal(std::string_view digits);
  // Exact value of a double with at most 9 fractional decimal digits.
  static std::optional<Count> FromDouble(double value);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  bool is_integer() const { return den_ == 1; }
  double ToDouble() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  // Checked arithmetic; nullopt on overflow.
  std::optional<Count> Times(const Count &other) const;
  std::optional<Count> Plus(const Count &other) const;
  // |a - b| as an exact count.
  static Count AbsDiff(const Count &a, const Count &b);
  // (lo + hi) / 2.
  static std::optional<Count> Midpoint(const Count &lo, const Count &hi);

  // Decimal rendering: "180", "84.55", or "331/2" for non-terminating
  // fractions.
  std::string ToString() const;

  friend bool operator==(const Count &a, const Count &b) = default;
  friend std::strong_ordering operator<=>(const Count &a, const Count &b);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

// True iff |value - anchor| * 10^6 <= ppm * anchor, evaluated exactly.
bool WithinRelative(const Count &value, const Count &anchor, std::int64_t ppm);

}  // namespace countqa

#endif  // COUNTQA_RATIONAL_H_
