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

// Places a predicted count in context. The representative count-modified
// noun phrase is the most confident one whose count lies within +-alpha of
// the prediction; every other phrase is a synonym (related, count in band),
// a subgroup (related, count below the band) or incomparable (unrelated, or
// count above the band).

#ifndef COUNTQA_CONTEXTUALIZATION_H_
#define COUNTQA_CONTEXTUALIZATION_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "countqa/inference.h"
#include "countqa/providers.h"
#include "countqa/quantity.h"

namespace countqa {

// Relative band width in [0, 1], held in parts per million so band tests are
// exact.
class RelativeTolerance {
 public:
  // Throws std::invalid_argument outside [0, 1].
  explicit RelativeTolerance(double fraction);

  std::int64_t ppm() const { return ppm_; }
  double fraction() const { return static_cast<double>(ppm_) / 1e6; }
  // |value - anchor| <= fraction * anchor.
  bool Contains(const Count &value, const Count &anchor) const {
    return WithinRelative(value, anchor, ppm_);
  }

 private:
  std::int64_t ppm_;
};

enum class CnpCategory { kRepresentative, kSynonym, kSubgroup, kIncomparable };

std::string_view CnpCategoryName(CnpCategory c);
std::optional<CnpCategory> ParseCnpCategory(std::string_view name);

struct Cnp {
  Quantity quantity;
  std::string modifier_phrase;
  double confidence = 0.0;
  std::optional<CnpCategory> category;
  // Display form, e.g. "estimated 700 languages".
  std::string text;
  std::optional<SpanRef> source;
};

struct ContextOptions {
  RelativeTolerance alpha{0.30};
  double similarity_threshold = 0.0;
};

struct ContextualizedAnswer {
  std::optional<Prediction> prediction;
  std::optional<Cnp> representative;
  std::vector<Cnp> synonyms;
  std::vector<Cnp> subgroups;
  std::vector<Cnp> incomparables;
  // Filled instead of the categories when no representative exists.
  std::vector<Cnp> uncategorized;
  ContextOptions options;
};

// Index into `cnps` of the representative. Ties: count closest to the
// prediction, then smaller count, then input order.
std::optional<std::size_t> SelectRepresentative(std::span<const Cnp> cnps,
                                                const Prediction &prediction,
                                                const RelativeTolerance &alpha);

// Category of `cnp` given the similarity of its modifier phrase to the
// representative's.
CnpCategory ClassifyWithSimilarity(const Cnp &cnp, double similarity,
                                   const Prediction &prediction, const ContextOptions &options);

CnpCategory Classify(const Cnp &cnp, const Cnp &representative, const Prediction &prediction,
                     const ContextOptions &options, Provider &similarity);

// Provider errors propagate.
ContextualizedAnswer Contextualize(std::vector<Cnp> cnps, const std::optional<Prediction> &prediction,
                                   const ContextOptions &options, Provider &similarity);

}  // namespace countqa

#endif  // COUNTQA_CONTEXTUALIZATION_H_
