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

// Instance evidence for a count: entity mentions pulled from answer spans of
// the "which ..." form of the query, merged across passages and ranked.

#ifndef COUNTQA_EXPLANATION_H_
#define COUNTQA_EXPLANATION_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "countqa/providers.h"
#include "countqa/quantity.h"

namespace countqa {

enum class InstanceRanking {
  kNoConsolidation,
  kContextFrequency,
  kSummedConfidence,
  kTypeCompatibility,
};

std::string_view InstanceRankingName(InstanceRanking r);
std::optional<InstanceRanking> ParseInstanceRanking(std::string_view name);

struct Occurrence {
  SpanRef span;
  std::uint32_t passage_rank = 0;
  double span_confidence = 0.0;
  std::string parent_sentence;
  // Mention surface and its byte offset in the passage.
  std::string mention;
  std::size_t position = 0;
};

struct InstanceCandidate {
  std::string surface;  // longest observed mention
  std::string key;
  std::vector<Occurrence> occurrences;
  double summed_confidence = 0.0;
  std::optional<double> type_score;

  std::size_t frequency() const { return occurrences.size(); }
};

struct RankedInstance {
  InstanceCandidate candidate;
  // Strategy score; for kNoConsolidation the in-passage byte position, which
  // ascends instead.
  double score = 0.0;
};

struct RankedInstances {
  InstanceRanking strategy = InstanceRanking::kContextFrequency;
  std::vector<RankedInstance> items;
};

// Replaces the first case-insensitive "how many" with "which" ("Which" when
// the match is title case); prepends "which" to queries that have neither
// phrase.
std::string RewriteQuery(std::string_view query);

// Head noun phrase right after "how many", lowercased; empty if absent.
std::string AnswerType(std::string_view query);

// Groups occurrences by normalized key. Surface is the longest mention,
// ties broken lexicographically; occurrences are ordered by passage rank
// then position.
std::vector<InstanceCandidate> MergeInstances(std::vector<InstanceCandidate> candidates);

// Runs NER over every span. Output is ordered by key.
std::vector<InstanceCandidate> ExtractInstances(std::span<const AnswerSpan> spans, Provider &ner);

// Throws InputError for kTypeCompatibility with an empty query type.
// Ties: higher summed confidence, then key.
RankedInstances RankInstances(std::vector<InstanceCandidate> candidates, InstanceRanking strategy,
                              std::string_view query_type, Provider &nli);

}  // namespace countqa

#endif  // COUNTQA_EXPLANATION_H_
