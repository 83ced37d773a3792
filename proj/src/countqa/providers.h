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

// Learned capabilities behind one interface: answer-span prediction, phrase
// similarity, named-entity recognition and entailment.
//
// OfflineProvider is a deterministic lexical stand-in used for hermetic runs.
// RemoteProvider speaks the inference-service HTTP protocol:
//
//   POST /v1/spans   {query, passages:[{id,text}], mode:"count"|"instance"}
//                      -> {spans:[{passage_id,start,end,text,confidence}]}
//   POST /v1/embed   {texts:[...]} -> {vectors:[[real,...],...]}
//   POST /v1/ner     {texts:[...]} -> {mentions:[[{text,type,start,end},...],...]}
//   POST /v1/entail  {pairs:[{premise,hypothesis},...]} -> {probabilities:[...]}
//   GET  /v1/health  -> {status:"ok", models:{...}}

#ifndef COUNTQA_PROVIDERS_H_
#define COUNTQA_PROVIDERS_H_

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <semaphore>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "countqa/quantity.h"
#include "countqa/text.h"

namespace countqa {

struct Passage {
  std::string id;
  std::uint32_t rank = 0;
  std::string url;
  std::string text;
};

enum class SpanMode { kCount, kInstance };
std::string_view SpanModeName(SpanMode mode);

struct AnswerSpan {
  std::string passage_id;
  std::uint32_t passage_rank = 0;
  std::size_t start = 0;
  std::size_t end = 0;
  std::string text;
  double confidence = 0.0;
  // Byte range of the enclosing sentence in the passage.
  Range sentence;
  std::string parent_sentence;

  SpanRef ref() const { return {passage_id, start, end}; }
};

struct Mention {
  std::string text;
  std::string type;
  std::size_t start = 0;
  std::size_t end = 0;
};

struct TextPair {
  std::string first;
  std::string second;
};

class Provider {
 public:
  virtual ~Provider() = default;

  virtual std::string name() const = 0;

  // Spans over every passage, any order. Implementations fill passage_id,
  // offsets, text and confidence; the pipeline normalizes the rest.
  virtual std::vector<AnswerSpan> PredictSpans(std::string_view query,
                                               std::span<const Passage> passages,
                                               SpanMode mode) = 0;
  // One score in [-1, 1] per pair, aligned with the input.
  virtual std::vector<double> Similarities(std::span<const TextPair> pairs) = 0;
  virtual std::vector<std::vector<Mention>> Ner(std::span<const std::string> texts) = 0;
  // One probability in [0, 1] per (premise, hypothesis) pair.
  virtual std::vector<double> Entail(std::span<const TextPair> pairs) = 0;

  double Similarity(std::string_view a, std::string_view b);
  double Entailment(std::string_view premise, std::string_view hypothesis);
};

// Deterministic lexical fallbacks.
//   spans       one span per sentence holding a count (count mode) or an
//               entity mention (instance mode); confidence is the fraction
//               of query content tokens present in the sentence; zero
//               confidence spans are dropped
//   similarity  character-trigram cosine c, reported as 2c - 1
//   ner         maximal runs of capitalized tokens, ignoring a
//               sentence-initial stopword
//   entail      fraction of hypothesis content tokens found in the premise
class OfflineProvider : public Provider {
 public:
  OfflineProvider() : units_(&UnitStoplist::Default()) {}
  explicit OfflineProvider(const UnitStoplist &units) : units_(&units) {}

  std::string name() const override { return "offline"; }
  std::vector<AnswerSpan> PredictSpans(std::string_view query, std::span<const Passage> passages,
                                       SpanMode mode) override;
  std::vector<double> Similarities(std::span<const TextPair> pairs) override;
  std::vector<std::vector<Mention>> Ner(std::span<const std::string> texts) override;
  std::vector<double> Entail(std::span<const TextPair> pairs) override;

  static double TrigramSimilarity(std::string_view a, std::string_view b);
  static std::vector<Mention> CapitalizedMentions(std::string_view text);
  // Throws InputError for a hypothesis without tokens.
  static double TokenEntailment(std::string_view premise, std::string_view hypothesis);

 private:
  const UnitStoplist *units_;
};

// JSON request/response channel to the inference service.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual nlohmann::json Post(const std::string &path, const nlohmann::json &body) = 0;
  virtual nlohmann::json Get(const std::string &path) = 0;
  virtual std::string endpoint() const = 0;
};

struct HttpOptions {
  std::string endpoint;  // "http://host:port"
  std::chrono::milliseconds timeout{10000};
  int max_in_flight = 8;
};

class HttpTransport : public Transport {
 public:
  // Throws InputError for an endpoint that is not http://host[:port].
  explicit HttpTransport(HttpOptions options);

  nlohmann::json Post(const std::string &path, const nlohmann::json &body) override;
  nlohmann::json Get(const std::string &path) override;
  std::string endpoint() const override { return options_.endpoint; }

 private:
  nlohmann::json Call(const std::string &method, const std::string &path,
                      const nlohmann::json *body);

  HttpOptions options_;
  std::string host_;
  int port_ = 80;
  std::counting_semaphore<1024> in_flight_;
};

// Replays and records responses in a directory, one JSON file per request
// keyed by a content hash of (endpoint, operation, request).
class CachingTransport : public Transport {
 public:
  // `inner` may be null, in which case cache misses are provider errors.
  CachingTransport(std::unique_ptr<Transport> inner, std::string dir, std::string endpoint);

  nlohmann::json Post(const std::string &path, const nlohmann::json &body) override;
  nlohmann::json Get(const std::string &path) override;
  std::string endpoint() const override { return endpoint_; }

  std::string CachePath(const std::string &path, const nlohmann::json &body) const;

 private:
  std::unique_ptr<Transport> inner_;
  std::string dir_;
  std::string endpoint_;
  std::mutex mu_;
};

class RemoteProvider : public Provider {
 public:
  static constexpr std::size_t kBatchSize = 64;

  explicit RemoteProvider(std::unique_ptr<Transport> transport);

  std::string name() const override { return "remote"; }
  std::vector<AnswerSpan> PredictSpans(std::string_view query, std::span<const Passage> passages,
                                       SpanMode mode) override;
  std::vector<double> Similarities(std::span<const TextPair> pairs) override;
  std::vector<std::vector<Mention>> Ner(std::span<const std::string> texts) override;
  std::vector<double> Entail(std::span<const TextPair> pairs) override;

  // Throws ProviderError unless the service reports status "ok".
  nlohmann::json Health();

 private:
  std::unique_ptr<Transport> transport_;
};

// Routes each call to `primary` and retries on `fallback` after a
// ProviderError.
class DegradingProvider : public Provider {
 public:
  DegradingProvider(std::shared_ptr<Provider> primary, std::shared_ptr<Provider> fallback)
      : primary_(std::move(primary)), fallback_(std::move(fallback)) {}

  std::string name() const override;
  std::vector<AnswerSpan> PredictSpans(std::string_view query, std::span<const Passage> passages,
                                       SpanMode mode) override;
  std::vector<double> Similarities(std::span<const TextPair> pairs) override;
  std::vector<std::vector<Mention>> Ner(std::span<const std::string> texts) override;
  std::vector<double> Entail(std::span<const TextPair> pairs) override;

 private:
  std::shared_ptr<Provider> primary_;
  std::shared_ptr<Provider> fallback_;
};

// Pins similarity scores for listed phrase pairs (symmetric, casefolded);
// other pairs and capabilities go to `inner`. Identical phrases score 1.
class SimilarityTableProvider : public Provider {
 public:
  SimilarityTableProvider(std::shared_ptr<Provider> inner, std::map<std::pair<std::string, std::string>, double> table);

  // {"pairs":[{"a":..., "b":..., "score":...}, ...]}. Throws InputError.
  static std::map<std::pair<std::string, std::string>, double> LoadTable(const std::string &path);
  static std::map<std::pair<std::string, std::string>, double> ParseTable(const nlohmann::json &doc);

  std::string name() const override { return inner_->name() + "+table"; }
  std::vector<AnswerSpan> PredictSpans(std::string_view query, std::span<const Passage> passages,
                                       SpanMode mode) override {
    return inner_->PredictSpans(query, passages, mode);
  }
  std::vector<double> Similarities(std::span<const TextPair> pairs) override;
  std::vector<std::vector<Mention>> Ner(std::span<const std::string> texts) override {
    return inner_->Ner(texts);
  }
  std::vector<double> Entail(std::span<const TextPair> pairs) override {
    return inner_->Entail(pairs);
  }

 private:
  std::optional<double> Lookup(const std::string &a, const std::string &b) const;

  std::shared_ptr<Provider> inner_;
  std::map<std::pair<std::string, std::string>, double> table_;
};

// Clamp into [lo, hi], logging when the input was out of range. NaN maps
// to lo.
double ClampReported(double value, double lo, double hi, std::string_view what);

// Drops spans that do not resolve to a passage or have invalid offsets,
// rewrites text from the passage, clamps confidence and fills the rank and
// parent sentence. Output is sorted by (passage rank, start, end).
std::vector<AnswerSpan> NormalizeSpans(std::vector<AnswerSpan> spans,
                                       std::span<const Passage> passages);

}  // namespace countqa

#endif  // COUNTQA_PROVIDERS_H_
