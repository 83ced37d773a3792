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

#include "countqa/contextualization.h"

#include <cmath>
#include <stdexcept>

#include "countqa/errors.h"

namespace countqa {

RelativeTolerance::RelativeTolerance(double fraction) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) {
    throw std::invalid_argument("alpha must lie in [0, 1]");
  }
  ppm_ = std::llround(fraction * 1e6);
}

std::string_view CnpCategoryName(CnpCategory c) {
  switch (c) {
    case CnpCategory::kRepresentative: return "representative";
    case CnpCategory::kSynonym: return "synonym";
    case CnpCategory::kSubgroup: return "subgroup";
    case CnpCategory::kIncomparable: return "incomparable";
  }
  return "incomparable";
}

std::optional<CnpCategory> ParseCnpCategory(std::string_view name) {
  for (auto c : {CnpCategory::kRepresentative, CnpCategory::kSynonym, CnpCategory::kSubgroup,
                 CnpCategory::kIncomparable}) {
    if (CnpCategoryName(c) == name) return c;
  }
  return std::nullopt;
}

std::optional<std::size_t> SelectRepresentative(std::span<const Cnp> cnps,
                                                const Prediction &prediction,
                                                const RelativeTolerance &alpha) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < cnps.size(); ++i) {
    const Cnp &c = cnps[i];
    if (!alpha.Contains(c.quantity.value, prediction.value)) continue;
    if (!best) {
      best = i;
      continue;
    }
    const Cnp &b = cnps[*best];
    if (c.confidence != b.confidence) {
      if (c.confidence > b.confidence) best = i;
      continue;
    }
    Count dc = Count::AbsDiff(c.quantity.value, prediction.value);
    Count db = Count::AbsDiff(b.quantity.value, prediction.value);
    if (dc != db) {
      if (dc < db) best = i;
      continue;
    }
    if (c.quantity.value < b.quantity.value) best = i;
  }
  return best;
}

CnpCategory ClassifyWithSimilarity(const Cnp &cnp, double similarity,
                                   const Prediction &prediction, const ContextOptions &options) {
  if (similarity < options.similarity_threshold) return CnpCategory::kIncomparable;
  if (options.alpha.Contains(cnp.quantity.value, prediction.value)) return CnpCategory::kSynonym;
  if (cnp.quantity.value < prediction.value) return CnpCategory::kSubgroup;
  return CnpCategory::kIncomparable;
}

CnpCategory Classify(const Cnp &cnp, const Cnp &representative, const Prediction &prediction,
                     const ContextOptions &options, Provider &similarity) {
  double s = similarity.Similarity(cnp.modifier_phrase, representative.modifier_phrase);
  return ClassifyWithSimilarity(cnp, s, prediction, options);
}

ContextualizedAnswer Contextualize(std::vector<Cnp> cnps,
                                   const std::optional<Prediction> &prediction,
                                   const ContextOptions &options, Provider &similarity) {
  ContextualizedAnswer out;
  out.prediction = prediction;
  out.options = options;
  std::optional<std::size_t> rep;
  if (prediction) rep = SelectRepresentative(cnps, *prediction, options.alpha);
  if (!rep) {
    for (Cnp &c : cnps) c.category.reset();
    out.uncategorized = std::move(cnps);
    return out;
  }

  Cnp representative = cnps[*rep];
  representative.category = CnpCategory::kRepresentative;

  std::vector<TextPair> pairs;
  pairs.reserve(cnps.size());
  for (std::size_t i = 0; i < cnps.size(); ++i) {
    if (i == *rep) continue;
    pairs.push_back({cnps[i].modifier_phrase, representative.modifier_phrase});
  }
  std::vector<double> scores =
      pairs.empty() ? std::vector<double>{} : similarity.Similarities(pairs);
  if (scores.size() != pairs.size()) throw ProviderError("similarity: misaligned response");

  std::size_t k = 0;
  for (std::size_t i = 0; i < cnps.size(); ++i) {
    if (i == *rep) continue;
    Cnp c = std::move(cnps[i]);
    c.category = ClassifyWithSimilarity(c, scores[k++], *prediction, options);
    switch (*c.category) {
      case CnpCategory::kSynonym: out.synonyms.push_back(std::move(c)); break;
      case CnpCategory::kSubgroup: out.subgroups.push_back(std::move(c)); break;
      default: out.incomparables.push_back(std::move(c)); break;
    }
  }
  out.representative = std::move(representative);
  return out;
}

}  // namespace countqa
