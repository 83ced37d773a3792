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

// End-to-end count answering: spans -> counts -> consolidation ->
// contextualization -> instance explanation, plus the evaluation and
// dataset tools built on top of it.

#ifndef COUNTQA_ENGINE_H_
#define COUNTQA_ENGINE_H_

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "countqa/contextualization.h"
#include "countqa/corpus.h"
#include "countqa/explanation.h"
#include "countqa/inference.h"
#include "countqa/providers.h"
#include "countqa/quantity.h"

namespace countqa {

enum class Stage { kAnswer, kContextualize, kExplain, kPipeline };

std::string_view StageName(Stage s);
std::optional<Stage> ParseStage(std::string_view name);

struct PipelineConfig {
  Consolidation strategy = Consolidation::kWeightedMedian;
  double alpha = 0.30;
  double similarity_threshold = 0.0;
  InstanceRanking explanation_strategy = InstanceRanking::kContextFrequency;
  int k = 10;
  std::vector<int> ks = {1, 5, 10};

  bool remote = false;
  std::string endpoint;
  std::optional<int> timeout_ms;
  int max_in_flight = 8;
  bool allow_degrade = false;
  std::string cache_dir;

  std::string units_path;
  std::string similarity_table_path;
};

// Flat object with the field names above ("provider": "offline"|"remote").
// Unknown keys and out-of-range values are InputErrors.
PipelineConfig ConfigFromJson(const nlohmann::json &v);
nlohmann::json ConfigToJson(const PipelineConfig &c);

struct Explanation {
  std::string query_rewrite;
  std::string answer_type;
  std::vector<AnswerSpan> spans;
  RankedInstances ranked;  // truncated to k
  std::optional<std::string> error;
};

struct AnswerPackage {
  std::string id;
  std::string query;
  Stage stage = Stage::kAnswer;
  std::vector<AnswerSpan> count_spans;
  std::vector<CountCandidate> candidates;
  std::vector<Cnp> cnps;
  std::optional<Prediction> prediction;
  std::optional<ContextualizedAnswer> context;
  std::optional<Explanation> explanation;
};

nlohmann::json CnpToJson(const Cnp &cnp);
nlohmann::json PackageToJson(const AnswerPackage &p, const PipelineConfig &config);

// Routes spdlog output to stderr at warning level. Idempotent.
void InitLogging();

class Engine {
 public:
  // Resolves providers from the config. Remote mode without a cache
  // directory checks service health first: failure is a ProviderError
  // unless degradation is allowed, which switches to the offline provider.
  explicit Engine(PipelineConfig config);
  // Uses `provider` as given.
  Engine(PipelineConfig config, std::shared_ptr<Provider> provider);

  const PipelineConfig &config() const { return config_; }
  Provider &provider() { return *provider_; }
  const UnitStoplist &units() const { return *units_; }

  // In lenient mode an InputError from the explanation stage is recorded in
  // the package instead of thrown.
  AnswerPackage Run(Stage stage, std::string_view query, std::span<const Passage> passages,
                    bool lenient = false);

  // Requests: {"query", "passages" | "passages_path"} for one package
  // (pretty JSON), or {"dataset_path"} for one compact line per record.
  // A bare query is looked up in the loaded dataset.
  std::string RunRequest(Stage stage, const nlohmann::json &request);

  // Runs the pipeline over records with gold data and scores it.
  nlohmann::json Evaluate(std::span<const QueryRecord> records);
  // {"dataset_path", "format": "json"|"table"}.
  std::string EvaluateRequest(const nlohmann::json &request);

  void LoadDataset(const std::string &path);

 private:
  void Setup(std::shared_ptr<Provider> provider);

  PipelineConfig config_;
  std::unique_ptr<UnitStoplist> units_;
  std::shared_ptr<Provider> provider_;
  std::vector<QueryRecord> dataset_;
};

// Dataset tools that need no provider.
//   label   {"dataset_path", "units_path"?} -> dataset with "span_labels"
//   filter  {"dataset_path", "units_path"?} -> dataset without measurement
//           queries
//   split   {"dataset_path", "test_fraction", "seed"} ->
//           {"train": <dataset text>, "test": <dataset text>}
std::string DatasetTool(std::string_view operation, const nlohmann::json &request);

std::string EvaluationTable(const nlohmann::json &report);

}  // namespace countqa

#endif  // COUNTQA_ENGINE_H_
