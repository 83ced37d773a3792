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

#include "countqa/providers.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <unordered_map>

#include <spdlog/spdlog.h>

#include "countqa/errors.h"

namespace countqa {

std::string_view SpanModeName(SpanMode mode) {
  return mode == SpanMode::kCount ? "count" : "instance";
}

double Provider::Similarity(std::string_view a, std::string_view b) {
  TextPair pair{std::string(a), std::string(b)};
  auto out = Similarities(std::span<const TextPair>(&pair, 1));
  if (out.size() != 1) throw ProviderError("similarity: misaligned response");
  return out[0];
}

double Provider::Entailment(std::string_view premise, std::string_view hypothesis) {
  TextPair pair{std::string(premise), std::string(hypothesis)};
  auto out = Entail(std::span<const TextPair>(&pair, 1));
  if (out.size() != 1) throw ProviderError("entail: misaligned response");
  return out[0];
}

double ClampReported(double value, double lo, double hi, std::string_view what) {
  if (std::isnan(value)) {
    spdlog::warn("{}: NaN reported, using {}", what, lo);
    return lo;
  }
  if (value < lo || value > hi) {
    double clamped = std::clamp(value, lo, hi);
    spdlog::warn("{}: {} outside [{}, {}], clamped to {}", what, value, lo, hi, clamped);
    return clamped;
  }
  return value;
}

std::vector<AnswerSpan> NormalizeSpans(std::vector<AnswerSpan> spans,
                                       std::span<const Passage> passages) {
  std::unordered_map<std::string, const Passage *> by_id;
  for (const Passage &p : passages) by_id.emplace(p.id, &p);
  std::vector<AnswerSpan> out;
  out.reserve(spans.size());
  for (AnswerSpan &s : spans) {
    auto it = by_id.find(s.passage_id);
    if (it == by_id.end()) {
      spdlog::warn("span for unknown passage '{}' dropped", s.passage_id);
      continue;
    }
    const Passage &p = *it->second;
    if (!(s.start < s.end && s.end <= p.text.size())) {
      spdlog::warn("span [{}, {}) outside passage '{}' dropped", s.start, s.end, p.id);
      continue;
    }
    s.passage_rank = p.rank;
    s.text = p.text.substr(s.start, s.end - s.start);
    s.confidence = ClampReported(s.confidence, 0.0, 1.0, "span confidence");
    s.sentence = EnclosingSentence(p.text, s.start, s.end);
    s.parent_sentence = p.text.substr(s.sentence.begin, s.sentence.size());
    out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end(), [](const AnswerSpan &a, const AnswerSpan &b) {
    if (a.passage_rank != b.passage_rank) return a.passage_rank < b.passage_rank;
    if (a.start != b.start) return a.start < b.start;
    if (a.end != b.end) return a.end < b.end;
    return a.confidence > b.confidence;
  });
  return out;
}

// --- OfflineProvider --------------------------------------------------------

std::vector<AnswerSpan> OfflineProvider::PredictSpans(std::string_view query,
                                                      std::span<const Passage> passages,
                                                      SpanMode mode) {
  const std::vector<std::string> query_tokens = ContentTokens(query);
  std::vector<AnswerSpan> spans;
  if (query_tokens.empty()) return spans;
  for (const Passage &p : passages) {
    for (const Range &sentence : SplitSentences(p.text)) {
      std::string_view text = std::string_view(p.text).substr(sentence.begin, sentence.size());
      auto words = WordTokens(text);
      std::set<std::string> present(words.begin(), words.end());
      std::size_t hits = 0;
      for (const auto &t : query_tokens) hits += present.count(t);
      if (hits == 0) continue;

      AnswerSpan span;
      span.passage_id = p.id;
      span.confidence = static_cast<double>(hits) / static_cast<double>(query_tokens.size());
      if (mode == SpanMode::kCount) {
        auto cnp = SplitCnp(text, *units_);
        if (!cnp) continue;
        span.start = sentence.begin + cnp->begin;
        span.end = sentence.begin + cnp->end;
      } else {
        if (CapitalizedMentions(text).empty()) continue;
        span.start = sentence.begin;
        span.end = sentence.end;
      }
      span.text = p.text.substr(span.start, span.end - span.start);
      spans.push_back(std::move(span));
    }
  }
  return spans;
}

double OfflineProvider::TrigramSimilarity(std::string_view a, std::string_view b) {
  if (a == b) return 1.0;
  auto grams = [](std::string_view s) {
    std::string padded = " " + CollapseWhitespace(Lower(s)) + " ";
    std::map<std::string, std::int64_t> counts;
    for (std::size_t i = 0; i + 3 <= padded.size(); ++i) ++counts[padded.substr(i, 3)];
    return counts;
  };
  auto ga = grams(a);
  auto gb = grams(b);
  std::int64_t dot = 0, na = 0, nb = 0;
  for (const auto &[g, c] : ga) {
    na += c * c;
    auto it = gb.find(g);
    if (it != gb.end()) dot += c * it->second;
  }
  for (const auto &[g, c] : gb) nb += c * c;
  if (na == 0 || nb == 0) return -1.0;
  double cosine = static_cast<double>(dot) / std::sqrt(static_cast<double>(na * nb));
  cosine = std::clamp(cosine, 0.0, 1.0);
  return 2.0 * cosine - 1.0;
}

std::vector<Mention> OfflineProvider::CapitalizedMentions(std::string_view text) {
  std::vector<Mention> out;
  auto tokens = Tokenize(text);
  std::size_t run_begin = 0, run_end = 0;
  bool in_run = false;
  auto flush = [&] {
    if (!in_run) return;
    out.push_back({std::string(text.substr(run_begin, run_end - run_begin)), "ENTITY", run_begin,
                   run_end});
    in_run = false;
  };
  bool sentence_start = true;
  for (const Token &t : tokens) {
    bool capitalized = t.is_word() && t.text[0] >= 'A' && t.text[0] <= 'Z';
    if (capitalized && sentence_start && IsStopword(Lower(t.text))) capitalized = false;
    if (capitalized) {
      if (!in_run) run_begin = t.begin;
      in_run = true;
      run_end = t.end;
    } else {
      flush();
    }
    sentence_start = t.is_punct() && (t.text == "." || t.text == "!" || t.text == "?");
  }
  flush();
  return out;
}

double OfflineProvider::TokenEntailment(std::string_view premise, std::string_view hypothesis) {
  std::vector<std::string> needed = ContentTokens(hypothesis);
  if (needed.empty()) {
    needed = WordTokens(hypothesis);
    std::sort(needed.begin(), needed.end());
    needed.erase(std::unique(needed.begin(), needed.end()), needed.end());
  }
  if (needed.empty()) throw InputError("entailment hypothesis has no tokens");
  auto words = WordTokens(premise);
  std::set<std::string> present(words.begin(), words.end());
  std::size_t hits = 0;
  for (const auto &t : needed) hits += present.count(t);
  return static_cast<double>(hits) / static_cast<double>(needed.size());
}

std::vector<double> OfflineProvider::Similarities(std::span<const TextPair> pairs) {
  std::vector<double> out;
  out.reserve(pairs.size());
  for (const auto &p : pairs) out.push_back(TrigramSimilarity(p.first, p.second));
  return out;
}

std::vector<std::vector<Mention>> OfflineProvider::Ner(std::span<const std::string> texts) {
  std::vector<std::vector<Mention>> out;
  out.reserve(texts.size());
  for (const auto &t : texts) out.push_back(CapitalizedMentions(t));
  return out;
}

std::vector<double> OfflineProvider::Entail(std::span<const TextPair> pairs) {
  std::vector<double> out;
  out.reserve(pairs.size());
  for (const auto &p : pairs) out.push_back(TokenEntailment(p.first, p.second));
  return out;
}

// --- DegradingProvider ------------------------------------------------------

std::string DegradingProvider::name() const {
  return primary_->name() + "|" + fallback_->name();
}

std::vector<AnswerSpan> DegradingProvider::PredictSpans(std::string_view query,
                                                        std::span<const Passage> passages,
                                                        SpanMode mode) {
  auto run = [&](Provider &p) { return p.PredictSpans(query, passages, mode); };
  try {
    return run(*primary_);
  } catch (const ProviderError &e) {
    spdlog::warn("spans: primary provider failed ({}), using fallback", e.what());
    return run(*fallback_);
  }
}

std::vector<double> DegradingProvider::Similarities(std::span<const TextPair> pairs) {
  try {
    return primary_->Similarities(pairs);
  } catch (const ProviderError &e) {
    spdlog::warn("similarity: primary provider failed ({}), using fallback", e.what());
    return fallback_->Similarities(pairs);
  }
}

std::vector<std::vector<Mention>> DegradingProvider::Ner(std::span<const std::string> texts) {
  try {
    return primary_->Ner(texts);
  } catch (const ProviderError &e) {
    spdlog::warn("ner: primary provider failed ({}), using fallback", e.what());
    return fallback_->Ner(texts);
  }
}

std::vector<double> DegradingProvider::Entail(std::span<const TextPair> pairs) {
  try {
    return primary_->Entail(pairs);
  } catch (const ProviderError &e) {
    spdlog::warn("entail: primary provider failed ({}), using fallback", e.what());
    return fallback_->Entail(pairs);
  }
}

// --- SimilarityTableProvider ------------------------------------------------

namespace {

std::pair<std::string, std::string> TableKey(const std::string &a, const std::string &b) {
  std::string x = CollapseWhitespace(Lower(a));
  std::string y = CollapseWhitespace(Lower(b));
  if (y < x) std::swap(x, y);
  return {x, y};
}

}  // namespace

SimilarityTableProvider::SimilarityTableProvider(
    std::shared_ptr<Provider> inner, std::map<std::pair<std::string, std::string>, double> table)
    : inner_(std::move(inner)), table_(std::move(table)) {}

std::map<std::pair<std::string, std::string>, double> SimilarityTableProvider::ParseTable(
    const nlohmann::json &doc) {
  std::map<std::pair<std::string, std::string>, double> table;
  if (!doc.is_object() || !doc.contains("pairs") || !doc["pairs"].is_array()) {
    throw InputError("similarity table: expected {\"pairs\": [...]}");
  }
  for (const auto &entry : doc["pairs"]) {
    if (!entry.is_object() || !entry.contains("a") || !entry.contains("b") ||
        !entry.contains("score") || !entry["a"].is_string() || !entry["b"].is_string() ||
        !entry["score"].is_number()) {
      throw InputError("similarity table: each pair needs string a, b and numeric score");
    }
    double score = entry["score"].get<double>();
    if (!(score >= -1.0 && score <= 1.0)) {
      throw InputError("similarity table: score outside [-1, 1]");
    }
    table[TableKey(entry["a"].get<std::string>(), entry["b"].get<std::string>())] = score;
  }
  return table;
}

std::map<std::pair<std::string, std::string>, double> SimilarityTableProvider::LoadTable(
    const std::string &path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open similarity table: " + path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception &e) {
    throw InputError("similarity table " + path + ": " + e.what());
  }
  return ParseTable(doc);
}

std::optional<double> SimilarityTableProvider::Lookup(const std::string &a,
                                                      const std::string &b) const {
  auto key = TableKey(a, b);
  if (key.first == key.second) return 1.0;
  auto it = table_.find(key);
  if (it == table_.end()) return std::nullopt;
  return it->second;
}

std::vector<double> SimilarityTableProvider::Similarities(std::span<const TextPair> pairs) {
  std::vector<double> out(pairs.size());
  std::vector<TextPair> missing;
  std::vector<std::size_t> missing_at;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (auto v = Lookup(pairs[i].first, pairs[i].second)) {
      out[i] = *v;
    } else {
      missing.push_back(pairs[i]);
      missing_at.push_back(i);
    }
  }
  if (!missing.empty()) {
    auto rest = inner_->Similarities(missing);
    if (rest.size() != missing.size()) throw ProviderError("similarity: misaligned response");
    for (std::size_t i = 0; i < rest.size(); ++i) out[missing_at[i]] = rest[i];
  }
  return out;
}

}  // namespace countqa
