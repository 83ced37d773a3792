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

#include "countqa/inference.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace countqa {

namespace {

constexpr double kWeightScale = 4294967296.0;  // 2^32

// Order used for the support list and for deterministic scans.
bool SupportOrder(const CountCandidate &a, const CountCandidate &b) {
  if (a.passage_rank() != b.passage_rank()) return a.passage_rank() < b.passage_rank();
  if (a.span() != b.span()) {
    if (!a.span()) return true;
    if (!b.span()) return false;
    return *a.span() < *b.span();
  }
  if (a.value() != b.value()) return a.value() < b.value();
  return a.confidence() < b.confidence();
}

Prediction MakePrediction(std::span<const CountCandidate> candidates, const Count &value,
                          Consolidation strategy) {
  Prediction p;
  p.value = value;
  p.strategy = strategy;
  for (const auto &c : candidates) {
    if (c.value() == value) p.support.push_back(c);
  }
  std::sort(p.support.begin(), p.support.end(), SupportOrder);
  return p;
}

std::vector<Count> SortedValues(std::span<const CountCandidate> candidates) {
  std::vector<Count> values;
  values.reserve(candidates.size());
  for (const auto &c : candidates) values.push_back(c.value());
  std::sort(values.begin(), values.end());
  return values;
}

Count LowerMedian(std::span<const CountCandidate> candidates) {
  auto values = SortedValues(candidates);
  return values[(values.size() - 1) / 2];
}

}  // namespace

std::string_view ConsolidationName(Consolidation s) {
  switch (s) {
    case Consolidation::kMostConfident: return "most_confident";
    case Consolidation::kMostFrequent: return "most_frequent";
    case Consolidation::kMedian: return "median";
    case Consolidation::kWeightedMedian: return "weighted_median";
  }
  return "weighted_median";
}

std::optional<Consolidation> ParseConsolidation(std::string_view name) {
  for (auto s : {Consolidation::kMostConfident, Consolidation::kMostFrequent,
                 Consolidation::kMedian, Consolidation::kWeightedMedian}) {
    if (ConsolidationName(s) == name) return s;
  }
  return std::nullopt;
}

std::uint64_t ConfidenceWeight(double confidence) {
  return static_cast<std::uint64_t>(std::llround(confidence * kWeightScale));
}

CountCandidate::CountCandidate(Count value, double confidence, std::string passage_id,
                               std::uint32_t passage_rank, std::optional<SpanRef> span)
    : value_(value),
      confidence_(confidence),
      passage_id_(std::move(passage_id)),
      passage_rank_(passage_rank),
      span_(std::move(span)) {
  if (!(confidence >= 0.0 && confidence <= 1.0)) {
    throw std::invalid_argument("candidate confidence outside [0, 1]");
  }
}

CountCandidate CountCandidate::WithValue(Count v) const {
  CountCandidate c = *this;
  c.value_ = v;
  return c;
}

CountCandidate CountCandidate::WithConfidence(double conf) const {
  return CountCandidate(value_, conf, passage_id_, passage_rank_, span_);
}

std::optional<Prediction> Consolidate(std::span<const CountCandidate> candidates,
                                      Consolidation strategy) {
  if (candidates.empty()) return std::nullopt;

  switch (strategy) {
    case Consolidation::kMostConfident: {
      const CountCandidate *best = &candidates[0];
      for (const auto &c : candidates.subspan(1)) {
        if (c.confidence() != best->confidence()) {
          if (c.confidence() > best->confidence()) best = &c;
        } else if (c.passage_rank() != best->passage_rank()) {
          if (c.passage_rank() < best->passage_rank()) best = &c;
        } else if (c.value() < best->value()) {
          best = &c;
        }
      }
      Prediction p;
      p.value = best->value();
      p.strategy = strategy;
      // Every equally preferred candidate carries the same value.
      for (const auto &c : candidates) {
        if (c.confidence() == best->confidence() && c.passage_rank() == best->passage_rank() &&
            c.value() == best->value()) {
          p.support.push_back(c);
        }
      }
      std::sort(p.support.begin(), p.support.end(), SupportOrder);
      return p;
    }

    case Consolidation::kMostFrequent: {
      std::vector<const CountCandidate *> sorted;
      for (const auto &c : candidates) sorted.push_back(&c);
      std::sort(sorted.begin(), sorted.end(),
                [](const auto *a, const auto *b) { return a->value() < b->value(); });
      Count best_value;
      std::size_t best_count = 0;
      std::uint64_t best_weight = 0;
      for (std::size_t i = 0; i < sorted.size();) {
        std::size_t j = i;
        std::uint64_t weight = 0;
        while (j < sorted.size() && sorted[j]->value() == sorted[i]->value()) {
          weight += sorted[j]->weight();
          ++j;
        }
        std::size_t count = j - i;
        // Ascending scan: a later group must be strictly better to win.
        if (count > best_count || (count == best_count && weight > best_weight)) {
          best_value = sorted[i]->value();
          best_count = count;
          best_weight = weight;
        }
        i = j;
      }
      return MakePrediction(candidates, best_value, strategy);
    }

    case Consolidation::kMedian:
      return MakePrediction(candidates, LowerMedian(candidates), strategy);

    case Consolidation::kWeightedMedian: {
      std::vector<const CountCandidate *> sorted;
      std::uint64_t total = 0;
      for (const auto &c : candidates) {
        sorted.push_back(&c);
        total += c.weight();
      }
      if (total == 0) {
        return MakePrediction(candidates, LowerMedian(candidates), strategy);
      }
      std::sort(sorted.begin(), sorted.end(),
                [](const auto *a, const auto *b) { return a->value() < b->value(); });
      std::uint64_t cumulative = 0;
      for (std::size_t i = 0; i < sorted.size();) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j]->value() == sorted[i]->value()) {
          cumulative += sorted[j]->weight();
          ++j;
        }
        if (2 * cumulative >= total) {
          return MakePrediction(candidates, sorted[i]->value(), strategy);
        }
        i = j;
      }
      // Unreachable: the last group has cumulative == total.
      return MakePrediction(candidates, sorted.back()->value(), strategy);
    }
  }
  return std::nullopt;
}

}  // namespace countqa
