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

// Count and instance metrics.

#ifndef COUNTQA_EVALHARNESS_H_
#define COUNTQA_EVALHARNESS_H_

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "countqa/contextualization.h"
#include "countqa/rational.h"

namespace countqa {

// An exact fraction of counts.
struct Ratio {
  std::size_t num = 0;
  std::size_t den = 0;

  double value() const { return den == 0 ? 0.0 : static_cast<double>(num) / den; }
  friend bool operator==(const Ratio &a, const Ratio &b) {
    return static_cast<unsigned __int128>(a.num) * b.den ==
           static_cast<unsigned __int128>(b.num) * a.den;
  }
};

// |pred - gold| <= gold / 10.
bool RelaxedMatch(const Count &pred, const Count &gold);

// Over answered queries only; absent when nothing was answered.
std::optional<Ratio> RelaxedPrecision(std::span<const std::optional<Count>> preds,
                                      std::span<const Count> golds);
// Over all queries; unanswered ones count as misses.
Ratio RelaxedPrecisionAll(std::span<const std::optional<Count>> preds,
                          std::span<const Count> golds);
Ratio Coverage(std::span<const std::optional<Count>> preds);

struct CountEvalResult {
  std::size_t n_queries = 0;
  std::size_t n_answered = 0;
  std::size_t n_correct = 0;
  std::optional<Ratio> relaxed_precision;
  Ratio relaxed_precision_all;
  Ratio coverage;
};

// preds and golds are aligned; throws std::invalid_argument otherwise.
CountEvalResult EvaluateCounts(std::span<const std::optional<Count>> preds,
                               std::span<const Count> golds);

struct RankingCase {
  std::vector<std::string> ranked;  // system order, best first
  std::vector<std::string> gold;
};

struct InstanceEvalResult {
  std::size_t n_queries = 0;  // queries with at least one gold instance
  std::map<int, double> precision_at;
  std::map<int, double> recall_at;
  std::map<int, double> hit_at;
  double mrr = 0.0;
};

// Both sides are matched by NormalizeMentionKey and deduplicated, keeping the
// first occurrence. Per query:
//   P@k   hits in top k / min(k, #returned)   (0 when nothing is returned)
//   R@k   hits in top k / #gold
//   Hit@k 1 if any hit in top k
//   MRR   1 / rank of the first hit, else 0
// Macro-averaged over queries with a nonempty gold set.
InstanceEvalResult InstanceMetrics(std::span<const RankingCase> cases, std::span<const int> ks);

struct CategoryPair {
  std::optional<CnpCategory> predicted;
  CnpCategory label;
};

// Per labeled category, the fraction of CNPs predicted as that category.
// Categories with no labels are absent.
std::map<CnpCategory, Ratio> CnpAccuracy(std::span<const CategoryPair> pairs);

}  // namespace countqa

#endif  // COUNTQA_EVALHARNESS_H_
