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

// Count-query dataset files.
//
// Line-delimited JSON, UTF-8. The first line is the header
// {"format":"coquad.v1"}; each following line is one record:
//
//   {"id": "q1", "query": "how many ...",
//    "gold_count": {"value": 180, "modifier": "approximate",
//                   "surface": "approximately 180"},      (optional)
//    "gold_instances": ["Help!", "Imagine"],                (optional)
//    "passages": [{"id": "p1", "rank": 1, "url": "...", "text": "..."}],
//    "provenance": "kg" | "featured_snippet" | "manual" | "unlabeled"}
//
// gold_count may also be given as a bare number or as a string to parse.
// Unknown fields are carried through unchanged. Records are written with
// keys in lexicographic order.

#ifndef COUNTQA_CORPUS_H_
#define COUNTQA_CORPUS_H_

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "countqa/providers.h"
#include "countqa/quantity.h"

namespace countqa {

inline constexpr std::string_view kCorpusFormat = "coquad.v1";

enum class Provenance { kKg, kFeaturedSnippet, kManual, kUnlabeled };

std::string_view ProvenanceName(Provenance p);
std::optional<Provenance> ParseProvenance(std::string_view name);

struct QueryRecord {
  std::string id;
  std::string query;
  std::optional<Quantity> gold_count;
  std::optional<std::vector<std::string>> gold_instances;
  std::vector<Passage> passages;  // sorted by rank, ranks 1..n
  Provenance provenance = Provenance::kUnlabeled;
  nlohmann::json extra = nlohmann::json::object();
};

nlohmann::json CountToJson(const Count &c);
// Integers exactly; fractions to nine decimal places.
std::optional<Count> CountFromJson(const nlohmann::json &v);

nlohmann::json QuantityToJson(const Quantity &q);
// Accepts a number, a parsable string or an object. Throws InputError.
Quantity QuantityFromJson(const nlohmann::json &v);

// Throws InputError on schema violations.
QueryRecord RecordFromJson(const nlohmann::json &v);
nlohmann::json RecordToJson(const QueryRecord &r);

// Passages as an array of {id?, rank?, url?, text}. Missing ranks follow
// array order, missing ids become "p<rank>". Throws InputError.
std::vector<Passage> PassagesFromJson(const nlohmann::json &v);
nlohmann::json PassagesToJson(std::span<const Passage> passages);

// Throws InputError, naming the 1-based line of a malformed record.
std::vector<QueryRecord> LoadCorpus(std::istream &in);
std::vector<QueryRecord> LoadCorpus(const std::string &path);
void StoreCorpus(std::span<const QueryRecord> records, std::ostream &out);
void StoreCorpus(std::span<const QueryRecord> records, const std::string &path);

// |count - gold| <= gold / 10, exactly.
bool WithinTenPercent(const Count &count, const Count &gold);

struct SpanLabel {
  SpanRef span;
  std::string text;
  Count value;
  bool positive = false;
};

// Labels every count found in the record's passages against its gold count.
// Throws InputError if the record has no gold count.
std::vector<SpanLabel> LabelSpans(const QueryRecord &record,
                                  const UnitStoplist &units = UnitStoplist::Default());
nlohmann::json SpanLabelToJson(const SpanLabel &label);

// Drops records whose query mentions a measurement unit.
std::vector<QueryRecord> FilterMeasurementQueries(std::vector<QueryRecord> records,
                                                  const UnitStoplist &units);

// Seeded shuffle split; the test side gets round(test_fraction * n) records.
std::pair<std::vector<QueryRecord>, std::vector<QueryRecord>> SplitCorpus(
    std::vector<QueryRecord> records, double test_fraction, std::uint64_t seed);

}  // namespace countqa

#endif  // COUNTQA_CORPUS_H_
