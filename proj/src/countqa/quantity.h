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

// Count extraction from free text.
//
// The parser recognizes digit numbers ("1,200", "84.55"), English number
// words up to billions ("two hundred and five"), scale words applied
// multiplicatively ("85 million"), hedges and bounds ("approximately 180",
// "more than 150", "up to 20", "700+") and ranges ("150 to 180",
// "between 5 and 7", "150-180"). A number directly followed by a
// measurement unit ("5 km", "20%") is not a count and is skipped.

#ifndef COUNTQA_QUANTITY_H_
#define COUNTQA_QUANTITY_H_

#include <cstddef>
#include <istream>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "countqa/rational.h"

namespace countqa {

enum class Modifier { kExact, kApproximate, kAtLeast, kAtMost, kRange };

std::string_view ModifierName(Modifier m);
std::optional<Modifier> ParseModifierName(std::string_view name);

struct Quantity {
  Count value;
  Modifier modifier = Modifier::kExact;
  // Present iff modifier == kRange; value is then the midpoint.
  std::optional<std::pair<Count, Count>> range_bounds;
  std::string surface;

  friend bool operator==(const Quantity &, const Quantity &) = default;
};

// A parsed quantity plus the byte range of its surface in the input.
struct QuantityMatch {
  Quantity quantity;
  std::size_t begin = 0;
  std::size_t end = 0;
};

// Tokens that mark a number as a measurement rather than a count. Matching
// is case-insensitive on whole tokens.
class UnitStoplist {
 public:
  // SI units, currencies, durations and percent.
  static const UnitStoplist &Default();

  UnitStoplist() = default;
  explicit UnitStoplist(std::set<std::string> tokens) : tokens_(std::move(tokens)) {}

  // One token per line, '#' starts a comment. Throws std::runtime_error if
  // the file cannot be opened.
  static UnitStoplist FromFile(const std::string &path);
  static UnitStoplist FromStream(std::istream &in);

  bool Contains(std::string_view token) const;
  // True if any token of `text` is in the list.
  bool MentionedIn(std::string_view text) const;
  const std::set<std::string> &tokens() const { return tokens_; }

 private:
  std::set<std::string> tokens_;
};

class QuantityParser {
 public:
  QuantityParser() : units_(&UnitStoplist::Default()) {}
  // `units` must outlive the parser.
  explicit QuantityParser(const UnitStoplist &units) : units_(&units) {}

  // First count-like quantity in `text`.
  std::optional<QuantityMatch> Find(std::string_view text) const;
  // Every count-like quantity, left to right, non-overlapping.
  std::vector<QuantityMatch> FindAll(std::string_view text) const;

 private:
  const UnitStoplist *units_;
};

std::optional<Quantity> ParseQuantity(std::string_view text);
std::optional<Quantity> ParseQuantity(std::string_view text, const UnitStoplist &units);

// Byte range of some span within its passage.
struct SpanRef {
  std::string passage_id;
  std::size_t start = 0;
  std::size_t end = 0;

  friend bool operator==(const SpanRef &, const SpanRef &) = default;
  friend auto operator<=>(const SpanRef &, const SpanRef &) = default;
};

// An answer span split into its count and the noun phrase the count
// modifies ("17 regional languages" -> 17, "regional languages").
struct CountSpan {
  Quantity quantity;
  std::string modifier_phrase;
  std::optional<SpanRef> source_span;
  // Byte extent within the split text covering the quantity surface and the
  // modifier phrase.
  std::size_t begin = 0;
  std::size_t end = 0;
};

std::optional<CountSpan> SplitCnp(std::string_view span_text);
std::optional<CountSpan> SplitCnp(std::string_view span_text, const UnitStoplist &units);

}  // namespace countqa

#endif  // COUNTQA_QUANTITY_H_
