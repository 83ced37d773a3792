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

#ifndef COUNTQA_INFERENCE_H_
#define COUNTQA_INFERENCE_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "countqa/quantity.h"
#include "countqa/rational.h"

namespace countqa {

enum class Consolidation { kMostConfident, kMostFrequent, kMedian, kWeightedMedian };

std::string_view ConsolidationName(Consolidation s);
std::optional<Consolidation> ParseConsolidation(std::string_view name);

// Confidence weights are summed in 2^-32 fixed point so that weight ties
// (uniform confidences, exact halves) compare exactly.
std::uint64_t ConfidenceWeight(double confidence);

// A numeric answer candidate distilled from one answer span.
class CountCandidate {
 public:
  // Throws std::invalid_argument if confidence is outside [0, 1] or NaN.
  CountCandidate(Count value, double confidence, std::string passage_id = {},
                 std::uint32_t passage_rank = 0, std::optional<SpanRef> span = std::nullopt);

  const Count &value() const { return value_; }
  double confidence() const { return confidence_; }
  std::uint64_t weight() const { return ConfidenceWeight(confidence_); }
  const std::string &passage_id() const { return passage_id_; }
  std::uint32_t passage_rank() const { return passage_rank_; }
  const std::optional<SpanRef> &span() const { return span_; }

  CountCandidate WithValue(Count v) const;
  CountCandidate WithConfidence(double c) const;

 private:
  Count value_;
  double confidence_;
  std::string passage_id_;
  std::uint32_t passage_rank_;
  std::optional<SpanRef> span_;
};

struct Prediction {
  Count value;
  Consolidation strategy = Consolidation::kWeightedMedian;
  // Candidates that determined the value, ordered by passage rank then span.
  std::vector<CountCandidate> support;
};

// Empty input yields no prediction. Tie-breaks:
//   most_confident   max confidence, then lower passage rank, then smaller value
//   most_frequent    most candidates, then larger summed confidence, then
//                    smaller value
//   median           lower median, index floor((n-1)/2) of the sorted values
//   weighted_median  smallest v with 2 * W(<= v) >= W(total); plain median
//                    when every confidence is zero
std::optional<Prediction> Consolidate(std::span<const CountCandidate> candidates,
                                      Consolidation strategy);

}  // namespace countqa

#endif  // COUNTQA_INFERENCE_H_
