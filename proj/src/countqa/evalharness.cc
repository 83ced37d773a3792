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

#include "countqa/evalharness.h"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "countqa/text.h"

namespace countqa {

namespace {

void CheckAligned(std::size_t a, std::size_t b) {
  if (a != b) throw std::invalid_argument("predictions and golds differ in length");
}

std::vector<std::string> DedupKeys(const std::vector<std::string> &items) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const std::string &s : items) {
    std::string key = NormalizeMentionKey(s);
    if (key.empty() || !seen.insert(key).second) continue;
    out.push_back(std::move(key));
  }
  return out;
}

}  // namespace

bool RelaxedMatch(const Count &pred, const Count &gold) {
  return WithinRelative(pred, gold, 100000);
}

std::optional<Ratio> RelaxedPrecision(std::span<const std::optional<Count>> preds,
                                      std::span<const Count> golds) {
  CheckAligned(preds.size(), golds.size());
  Ratio r;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (!preds[i]) continue;
    ++r.den;
    if (RelaxedMatch(*preds[i], golds[i])) ++r.num;
  }
  if (r.den == 0) return std::nullopt;
  return r;
}

Ratio RelaxedPrecisionAll(std::span<const std::optional<Count>> preds,
                          std::span<const Count> golds) {
  CheckAligned(preds.size(), golds.size());
  Ratio r{0, preds.size()};
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (preds[i] && RelaxedMatch(*preds[i], golds[i])) ++r.num;
  }
  return r;
}

Ratio Coverage(std::span<const std::optional<Count>> preds) {
  Ratio r{0, preds.size()};
  for (const auto &p : preds) {
    if (p) ++r.num;
  }
  return r;
}

CountEvalResult EvaluateCounts(std::span<const std::optional<Count>> preds,
                               std::span<const Count> golds) {
  CountEvalResult out;
  out.n_queries = preds.size();
  out.coverage = Coverage(preds);
  out.n_answered = out.coverage.num;
  out.relaxed_precision = RelaxedPrecision(preds, golds);
  out.relaxed_precision_all = RelaxedPrecisionAll(preds, golds);
  out.n_correct = out.relaxed_precision_all.num;
  return out;
}

InstanceEvalResult InstanceMetrics(std::span<const RankingCase> cases, std::span<const int> ks) {
  for (int k : ks) {
    if (k < 1) throw std::invalid_argument("cutoffs must be positive");
  }
  InstanceEvalResult out;
  for (int k : ks) {
    out.precision_at[k] = 0.0;
    out.recall_at[k] = 0.0;
    out.hit_at[k] = 0.0;
  }
  for (const RankingCase &c : cases) {
    std::vector<std::string> gold = DedupKeys(c.gold);
    if (gold.empty()) continue;
    ++out.n_queries;
    std::set<std::string> gold_set(gold.begin(), gold.end());
    std::vector<std::string> ranked = DedupKeys(c.ranked);

    // hits[i] = hits among the first i+1 returned items.
    std::vector<std::size_t> hits(ranked.size());
    std::size_t running = 0;
    std::optional<std::size_t> first_hit;
    for (std::size_t i = 0; i < ranked.size(); ++i) {
      if (gold_set.count(ranked[i])) {
        ++running;
        if (!first_hit) first_hit = i;
      }
      hits[i] = running;
    }
    if (first_hit) out.mrr += 1.0 / static_cast<double>(*first_hit + 1);

    for (int k : ks) {
      std::size_t top = std::min(static_cast<std::size_t>(k), ranked.size());
      std::size_t h = top == 0 ? 0 : hits[top - 1];
      if (top > 0) out.precision_at[k] += static_cast<double>(h) / static_cast<double>(top);
      out.recall_at[k] += static_cast<double>(h) / static_cast<double>(gold.size());
      if (h > 0) out.hit_at[k] += 1.0;
    }
  }
  if (out.n_queries > 0) {
    double n = static_cast<double>(out.n_queries);
    out.mrr /= n;
    for (int k : ks) {
      out.precision_at[k] /= n;
      out.recall_at[k] /= n;
      out.hit_at[k] /= n;
    }
  }
  return out;
}

std::map<CnpCategory, Ratio> CnpAccuracy(std::span<const CategoryPair> pairs) {
  std::map<CnpCategory, Ratio> out;
  for (const CategoryPair &p : pairs) {
    Ratio &r = out[p.label];
    ++r.den;
    if (p.predicted == p.label) ++r.num;
  }
  return out;
}

}  // namespace countqa
