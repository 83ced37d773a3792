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

#include "countqa/explanation.h"

#include <algorithm>
#include <map>

#include "countqa/errors.h"
#include "countqa/text.h"

namespace countqa {

namespace {

// Index of the first "how many" token pair, or npos.
std::size_t FindHowMany(const std::vector<Token> &tokens) {
  for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
    if (Lower(tokens[i].text) == "how" && Lower(tokens[i + 1].text) == "many") return i;
  }
  return std::string::npos;
}

bool OccurrenceOrder(const Occurrence &a, const Occurrence &b) {
  if (a.passage_rank != b.passage_rank) return a.passage_rank < b.passage_rank;
  if (a.position != b.position) return a.position < b.position;
  if (a.span != b.span) return a.span < b.span;
  return a.mention < b.mention;
}

// Higher summed confidence, then key.
bool TieBreak(const InstanceCandidate &a, const InstanceCandidate &b) {
  if (a.summed_confidence != b.summed_confidence) return a.summed_confidence > b.summed_confidence;
  return a.key < b.key;
}

}  // namespace

std::string_view InstanceRankingName(InstanceRanking r) {
  switch (r) {
    case InstanceRanking::kNoConsolidation: return "no_consolidation";
    case InstanceRanking::kContextFrequency: return "context_frequency";
    case InstanceRanking::kSummedConfidence: return "summed_confidence";
    case InstanceRanking::kTypeCompatibility: return "type_compatibility";
  }
  return "context_frequency";
}

std::optional<InstanceRanking> ParseInstanceRanking(std::string_view name) {
  for (auto r : {InstanceRanking::kNoConsolidation, InstanceRanking::kContextFrequency,
                 InstanceRanking::kSummedConfidence, InstanceRanking::kTypeCompatibility}) {
    if (InstanceRankingName(r) == name) return r;
  }
  return std::nullopt;
}

std::string RewriteQuery(std::string_view query) {
  auto tokens = Tokenize(query);
  std::size_t at = FindHowMany(tokens);
  if (at == std::string::npos) {
    for (const Token &t : tokens) {
      if (t.is_word() && Lower(t.text) == "which") return std::string(query);
    }
    return "which " + std::string(query);
  }
  const Token &how = tokens[at];
  const Token &many = tokens[at + 1];
  bool title = how.text.size() > 1 && how.text[0] >= 'A' && how.text[0] <= 'Z' &&
               how.text[1] >= 'a' && how.text[1] <= 'z';
  std::string out(query.substr(0, how.begin));
  out += title ? "Which" : "which";
  out += query.substr(many.end);
  return out;
}

std::string AnswerType(std::string_view query) {
  auto tokens = Tokenize(query);
  std::size_t at = FindHowMany(tokens);
  if (at == std::string::npos) return "";
  std::string out;
  bool first = true;
  for (std::size_t i = at + 2; i < tokens.size(); ++i) {
    const Token &t = tokens[i];
    std::string lower = Lower(t.text);
    if (!t.is_word() || IsPhraseBreak(lower, first)) break;
    if (!out.empty()) out += ' ';
    out += lower;
    first = false;
  }
  return out;
}

std::vector<InstanceCandidate> MergeInstances(std::vector<InstanceCandidate> candidates) {
  std::map<std::string, InstanceCandidate> by_key;
  for (InstanceCandidate &c : candidates) {
    if (c.key.empty()) continue;
    auto [it, inserted] = by_key.try_emplace(c.key);
    InstanceCandidate &m = it->second;
    if (inserted) m.key = c.key;
    for (Occurrence &o : c.occurrences) m.occurrences.push_back(std::move(o));
    auto better = [&](const std::string &s) {
      return s.size() > m.surface.size() || (s.size() == m.surface.size() && s < m.surface);
    };
    if (m.surface.empty() || better(c.surface)) m.surface = c.surface;
  }
  std::vector<InstanceCandidate> out;
  out.reserve(by_key.size());
  for (auto &[key, m] : by_key) {
    std::sort(m.occurrences.begin(), m.occurrences.end(), OccurrenceOrder);
    m.summed_confidence = 0.0;
    for (const Occurrence &o : m.occurrences) {
      m.summed_confidence += o.span_confidence;
      if (o.mention.size() > m.surface.size() ||
          (o.mention.size() == m.surface.size() && o.mention < m.surface)) {
        m.surface = o.mention;
      }
    }
    m.type_score.reset();
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<InstanceCandidate> ExtractInstances(std::span<const AnswerSpan> spans, Provider &ner) {
  if (spans.empty()) return {};
  std::vector<std::string> texts;
  texts.reserve(spans.size());
  for (const AnswerSpan &s : spans) texts.push_back(s.text);
  auto mentions = ner.Ner(texts);
  if (mentions.size() != spans.size()) throw ProviderError("ner: misaligned response");

  std::vector<InstanceCandidate> raw;
  for (std::size_t i = 0; i < spans.size(); ++i) {
    const AnswerSpan &s = spans[i];
    for (const Mention &m : mentions[i]) {
      InstanceCandidate c;
      c.key = NormalizeMentionKey(m.text);
      if (c.key.empty()) continue;
      c.surface = CollapseWhitespace(m.text);
      Occurrence o;
      o.span = s.ref();
      o.passage_rank = s.passage_rank;
      o.span_confidence = s.confidence;
      o.parent_sentence = s.parent_sentence;
      o.mention = c.surface;
      o.position = s.start + m.start;
      c.occurrences.push_back(std::move(o));
      raw.push_back(std::move(c));
    }
  }
  return MergeInstances(std::move(raw));
}

RankedInstances RankInstances(std::vector<InstanceCandidate> candidates, InstanceRanking strategy,
                              std::string_view query_type, Provider &nli) {
  RankedInstances out;
  out.strategy = strategy;

  switch (strategy) {
    case InstanceRanking::kNoConsolidation: {
      // The passage holding the most confident span; lower rank on ties.
      const Occurrence *top = nullptr;
      for (const auto &c : candidates) {
        for (const auto &o : c.occurrences) {
          if (!top || o.span_confidence > top->span_confidence ||
              (o.span_confidence == top->span_confidence && o.passage_rank < top->passage_rank)) {
            top = &o;
          }
        }
      }
      if (!top) return out;
      const std::string passage = top->span.passage_id;
      std::vector<RankedInstance> items;
      for (auto &c : candidates) {
        std::optional<std::size_t> first;
        for (const auto &o : c.occurrences) {
          if (o.span.passage_id == passage && (!first || o.position < *first)) first = o.position;
        }
        if (first) items.push_back({std::move(c), static_cast<double>(*first)});
      }
      std::sort(items.begin(), items.end(), [](const RankedInstance &a, const RankedInstance &b) {
        if (a.score != b.score) return a.score < b.score;
        return TieBreak(a.candidate, b.candidate);
      });
      out.items = std::move(items);
      return out;
    }

    case InstanceRanking::kContextFrequency:
    case InstanceRanking::kSummedConfidence:
      for (auto &c : candidates) {
        double score = strategy == InstanceRanking::kContextFrequency
                           ? static_cast<double>(c.frequency())
                           : c.summed_confidence;
        out.items.push_back({std::move(c), score});
      }
      break;

    case InstanceRanking::kTypeCompatibility: {
      if (CollapseWhitespace(query_type).empty()) {
        throw InputError("type_compatibility ranking needs an answer type; the query has none");
      }
      std::vector<TextPair> pairs;
      for (const auto &c : candidates) {
        std::string hypothesis = c.surface + " is a " + std::string(query_type);
        for (const auto &o : c.occurrences) pairs.push_back({o.parent_sentence, hypothesis});
      }
      std::vector<double> probs = pairs.empty() ? std::vector<double>{} : nli.Entail(pairs);
      if (probs.size() != pairs.size()) throw ProviderError("entail: misaligned response");
      std::size_t k = 0;
      for (auto &c : candidates) {
        double sum = 0.0;
        for (std::size_t i = 0; i < c.occurrences.size(); ++i) sum += probs[k++];
        c.type_score = sum;
        out.items.push_back({std::move(c), sum});
      }
      break;
    }
  }

  std::sort(out.items.begin(), out.items.end(),
            [](const RankedInstance &a, const RankedInstance &b) {
              if (a.score != b.score) return a.score > b.score;
              return TieBreak(a.candidate, b.candidate);
            });
  return out;
}

}  // namespace countqa
