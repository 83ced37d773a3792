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

#include "countqa/engine.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <mutex>
#include <set>
#include <sstream>

#include "spdlog/sinks/stdout_sinks.h"
#include "spdlog/spdlog.h"

#include "countqa/errors.h"
#include "countqa/evalharness.h"
#include "countqa/json_io.h"
#include "countqa/text.h"

namespace countqa {

using nlohmann::json;

namespace {

const std::set<std::string> &ConfigKeys() {
  static const std::set<std::string> kKeys = {
      "strategy", "alpha",   "similarity_threshold", "explanation_strategy", "k",
      "ks",       "provider", "endpoint",            "timeout_ms",           "max_in_flight",
      "allow_degrade", "cache_dir", "units_path",    "similarity_table_path"};
  return kKeys;
}

double NumberField(const json &v, const char *key) {
  if (!v[key].is_number()) throw InputError(std::string("config: '") + key + "' must be a number");
  return v[key].get<double>();
}

std::string StringField(const json &v, const char *key) {
  if (!v[key].is_string()) throw InputError(std::string("config: '") + key + "' must be a string");
  return v[key].get<std::string>();
}

int IntField(const json &v, const char *key) {
  if (!v[key].is_number_integer()) {
    throw InputError(std::string("config: '") + key + "' must be an integer");
  }
  auto i = v[key].get<std::int64_t>();
  if (i < INT32_MIN || i > INT32_MAX) throw InputError(std::string("config: '") + key + "' out of range");
  return static_cast<int>(i);
}

std::optional<std::string> Env(const char *name) {
  const char *v = std::getenv(name);
  if (v == nullptr || *v == '\0') return std::nullopt;
  return std::string(v);
}

json SpanToJson(const AnswerSpan &s, std::string_view kind) {
  return {{"passage_id", s.passage_id},
          {"passage_rank", s.passage_rank},
          {"start", s.start},
          {"end", s.end},
          {"text", s.text},
          {"confidence", s.confidence},
          {"kind", std::string(kind)}};
}

json CandidateToJson(const CountCandidate &c) {
  json out = {{"value", CountToJson(c.value())},
              {"confidence", c.confidence()},
              {"passage_id", c.passage_id()},
              {"passage_rank", c.passage_rank()}};
  if (c.span()) {
    out["start"] = c.span()->start;
    out["end"] = c.span()->end;
  }
  return out;
}

json CnpList(const std::vector<Cnp> &cnps) {
  json out = json::array();
  for (const Cnp &c : cnps) out.push_back(CnpToJson(c));
  return out;
}

json InstanceToJson(const RankedInstance &item, std::size_t rank, InstanceRanking strategy) {
  const InstanceCandidate &c = item.candidate;
  json occurrences = json::array();
  for (const Occurrence &o : c.occurrences) {
    occurrences.push_back({{"passage_id", o.span.passage_id},
                           {"start", o.span.start},
                           {"end", o.span.end},
                           {"mention", o.mention},
                           {"position", o.position},
                           {"confidence", o.span_confidence}});
  }
  json out = {{"rank", rank},
              {"surface", c.surface},
              {"key", c.key},
              {"frequency", c.frequency()},
              {"summed_confidence", c.summed_confidence},
              {"occurrences", std::move(occurrences)}};
  if (strategy == InstanceRanking::kNoConsolidation) {
    out["position"] = static_cast<std::size_t>(item.score);
  } else {
    out["score"] = item.score;
  }
  if (c.type_score) out["type_score"] = *c.type_score;
  return out;
}

std::optional<CnpCategory> PredictedCategory(const ContextualizedAnswer &ctx, const Count &value,
                                             const std::string &phrase) {
  auto matches = [&](const Cnp &c) {
    return c.quantity.value == value && Lower(CollapseWhitespace(c.modifier_phrase)) == phrase;
  };
  if (ctx.representative && matches(*ctx.representative)) return CnpCategory::kRepresentative;
  for (const Cnp &c : ctx.synonyms) {
    if (matches(c)) return CnpCategory::kSynonym;
  }
  for (const Cnp &c : ctx.subgroups) {
    if (matches(c)) return CnpCategory::kSubgroup;
  }
  for (const Cnp &c : ctx.incomparables) {
    if (matches(c)) return CnpCategory::kIncomparable;
  }
  return std::nullopt;
}

json RatioJson(const Ratio &r) { return r.den == 0 ? json(nullptr) : json(r.value()); }

}  // namespace

std::string_view StageName(Stage s) {
  switch (s) {
    case Stage::kAnswer: return "answer";
    case Stage::kContextualize: return "contextualize";
    case Stage::kExplain: return "explain";
    case Stage::kPipeline: return "pipeline";
  }
  return "answer";
}

std::optional<Stage> ParseStage(std::string_view name) {
  for (auto s : {Stage::kAnswer, Stage::kContextualize, Stage::kExplain, Stage::kPipeline}) {
    if (StageName(s) == name) return s;
  }
  return std::nullopt;
}

PipelineConfig ConfigFromJson(const json &v) {
  if (v.is_null()) return {};
  if (!v.is_object()) throw InputError("config must be a JSON object");
  PipelineConfig c;
  for (const auto &[key, value] : v.items()) {
    if (!ConfigKeys().count(key)) throw InputError("config: unknown key '" + key + "'");
  }
  if (v.contains("strategy")) {
    auto s = ParseConsolidation(StringField(v, "strategy"));
    if (!s) throw InputError("config: unknown strategy '" + v["strategy"].get<std::string>() + "'");
    c.strategy = *s;
  }
  if (v.contains("alpha")) {
    c.alpha = NumberField(v, "alpha");
    if (!(c.alpha >= 0.0 && c.alpha <= 1.0)) throw InputError("config: alpha must lie in [0, 1]");
  }
  if (v.contains("similarity_threshold")) {
    c.similarity_threshold = NumberField(v, "similarity_threshold");
    if (!(c.similarity_threshold >= -1.0 && c.similarity_threshold <= 1.0)) {
      throw InputError("config: similarity_threshold must lie in [-1, 1]");
    }
  }
  if (v.contains("explanation_strategy")) {
    auto r = ParseInstanceRanking(StringField(v, "explanation_strategy"));
    if (!r) {
      throw InputError("config: unknown explanation_strategy '" +
                       v["explanation_strategy"].get<std::string>() + "'");
    }
    c.explanation_strategy = *r;
  }
  if (v.contains("k")) {
    c.k = IntField(v, "k");
    if (c.k < 1) throw InputError("config: k must be positive");
  }
  if (v.contains("ks")) {
    if (!v["ks"].is_array() || v["ks"].empty()) throw InputError("config: ks must be a nonempty array");
    c.ks.clear();
    for (const json &k : v["ks"]) {
      if (!k.is_number_integer() || k.get<std::int64_t>() < 1 || k.get<std::int64_t>() > 1000000) {
        throw InputError("config: ks entries must be positive integers");
      }
      c.ks.push_back(static_cast<int>(k.get<std::int64_t>()));
    }
    std::sort(c.ks.begin(), c.ks.end());
    c.ks.erase(std::unique(c.ks.begin(), c.ks.end()), c.ks.end());
  }
  if (v.contains("provider")) {
    std::string mode = StringField(v, "provider");
    if (mode != "offline" && mode != "remote") {
      throw InputError("config: provider must be 'offline' or 'remote'");
    }
    c.remote = mode == "remote";
  }
  if (v.contains("endpoint")) c.endpoint = StringField(v, "endpoint");
  if (v.contains("timeout_ms")) {
    c.timeout_ms = IntField(v, "timeout_ms");
    if (*c.timeout_ms < 1) throw InputError("config: timeout_ms must be positive");
  }
  if (v.contains("max_in_flight")) {
    c.max_in_flight = IntField(v, "max_in_flight");
    if (c.max_in_flight < 1 || c.max_in_flight > 1024) {
      throw InputError("config: max_in_flight must lie in [1, 1024]");
    }
  }
  if (v.contains("allow_degrade")) {
    if (!v["allow_degrade"].is_boolean()) throw InputError("config: allow_degrade must be a boolean");
    c.allow_degrade = v["allow_degrade"].get<bool>();
  }
  if (v.contains("cache_dir")) c.cache_dir = StringField(v, "cache_dir");
  if (v.contains("units_path")) c.units_path = StringField(v, "units_path");
  if (v.contains("similarity_table_path")) {
    c.similarity_table_path = StringField(v, "similarity_table_path");
  }
  return c;
}

json ConfigToJson(const PipelineConfig &c) {
  json out = {{"strategy", std::string(ConsolidationName(c.strategy))},
              {"alpha", c.alpha},
              {"similarity_threshold", c.similarity_threshold},
              {"explanation_strategy", std::string(InstanceRankingName(c.explanation_strategy))},
              {"k", c.k},
              {"ks", c.ks},
              {"provider", c.remote ? "remote" : "offline"},
              {"max_in_flight", c.max_in_flight},
              {"allow_degrade", c.allow_degrade}};
  if (!c.endpoint.empty()) out["endpoint"] = c.endpoint;
  if (c.timeout_ms) out["timeout_ms"] = *c.timeout_ms;
  if (!c.cache_dir.empty()) out["cache_dir"] = c.cache_dir;
  if (!c.units_path.empty()) out["units_path"] = c.units_path;
  if (!c.similarity_table_path.empty()) out["similarity_table_path"] = c.similarity_table_path;
  return out;
}

json CnpToJson(const Cnp &cnp) {
  json out = {{"text", cnp.text},
              {"value", CountToJson(cnp.quantity.value)},
              {"modifier", std::string(ModifierName(cnp.quantity.modifier))},
              {"modifier_phrase", cnp.modifier_phrase},
              {"confidence", cnp.confidence}};
  if (cnp.category) out["category"] = std::string(CnpCategoryName(*cnp.category));
  if (cnp.source) {
    out["passage_id"] = cnp.source->passage_id;
    out["start"] = cnp.source->start;
    out["end"] = cnp.source->end;
  }
  return out;
}

json PackageToJson(const AnswerPackage &p, const PipelineConfig &config) {
  json out;
  if (!p.id.empty()) out["id"] = p.id;
  out["query"] = p.query;
  out["stage"] = std::string(StageName(p.stage));

  json evidence = json::array();
  for (const AnswerSpan &s : p.count_spans) evidence.push_back(SpanToJson(s, "count"));
  if (p.explanation) {
    for (const AnswerSpan &s : p.explanation->spans) evidence.push_back(SpanToJson(s, "instance"));
  }
  out["evidence"] = std::move(evidence);

  if (p.stage != Stage::kExplain) {
    json candidates = json::array();
    for (const CountCandidate &c : p.candidates) candidates.push_back(CandidateToJson(c));
    out["candidates"] = std::move(candidates);
    if (p.prediction) {
      json support = json::array();
      for (const CountCandidate &c : p.prediction->support) support.push_back(CandidateToJson(c));
      out["prediction"] = {{"value", CountToJson(p.prediction->value)},
                           {"strategy", std::string(ConsolidationName(p.prediction->strategy))},
                           {"support", std::move(support)}};
    } else {
      out["prediction"] = nullptr;
    }
  }

  if (p.context) {
    const ContextualizedAnswer &c = *p.context;
    out["context"] = {
        {"alpha", c.options.alpha.fraction()},
        {"similarity_threshold", c.options.similarity_threshold},
        {"representative", c.representative ? CnpToJson(*c.representative) : json(nullptr)},
        {"synonyms", CnpList(c.synonyms)},
        {"subgroups", CnpList(c.subgroups)},
        {"incomparables", CnpList(c.incomparables)},
        {"uncategorized", CnpList(c.uncategorized)}};
  }

  if (p.explanation) {
    const Explanation &e = *p.explanation;
    json instances = json::array();
    for (std::size_t i = 0; i < e.ranked.items.size(); ++i) {
      instances.push_back(InstanceToJson(e.ranked.items[i], i + 1, e.ranked.strategy));
    }
    json ex = {{"query_rewrite", e.query_rewrite},
               {"answer_type", e.answer_type},
               {"strategy", std::string(InstanceRankingName(e.ranked.strategy))},
               {"k", config.k},
               {"instances", std::move(instances)}};
    if (e.error) ex["error"] = *e.error;
    out["explanation"] = std::move(ex);
  }
  return out;
}

void InitLogging() {
  static std::once_flag once;
  std::call_once(once, [] {
    auto logger = spdlog::get("countqa");
    if (!logger) logger = spdlog::stderr_logger_mt("countqa");
    logger->set_level(spdlog::level::warn);
    logger->set_pattern("[%l] %v");
    spdlog::set_default_logger(logger);
  });
}

// --- Engine -----------------------------------------------------------------

Engine::Engine(PipelineConfig config) : config_(std::move(config)) { Setup(nullptr); }

Engine::Engine(PipelineConfig config, std::shared_ptr<Provider> provider)
    : config_(std::move(config)) {
  if (!provider) throw std::invalid_argument("provider must not be null");
  Setup(std::move(provider));
}

void Engine::Setup(std::shared_ptr<Provider> provider) {
  InitLogging();
  // Validates alpha before any work.
  RelativeTolerance check(config_.alpha);
  (void)check;

  if (config_.units_path.empty()) {
    units_ = std::make_unique<UnitStoplist>(UnitStoplist::Default());
  } else {
    try {
      units_ = std::make_unique<UnitStoplist>(UnitStoplist::FromFile(config_.units_path));
    } catch (const std::runtime_error &e) {
      throw InputError(e.what());
    }
  }

  if (provider) {
    provider_ = std::move(provider);
    return;
  }

  auto offline = std::make_shared<OfflineProvider>(*units_);
  std::shared_ptr<Provider> chosen = offline;
  if (config_.remote) {
    if (config_.endpoint.empty()) config_.endpoint = Env("COQEX_ENDPOINT").value_or("");
    if (!config_.timeout_ms) {
      if (auto t = Env("COQEX_TIMEOUT_MS")) {
        char *end = nullptr;
        long ms = std::strtol(t->c_str(), &end, 10);
        if (end == t->c_str() || *end != '\0' || ms < 1 || ms > INT32_MAX) {
          throw InputError("COQEX_TIMEOUT_MS must be a positive integer");
        }
        config_.timeout_ms = static_cast<int>(ms);
      }
    }
    if (config_.endpoint.empty() && config_.cache_dir.empty()) {
      throw InputError("remote provider needs an endpoint (--endpoint or COQEX_ENDPOINT)");
    }

    std::unique_ptr<Transport> transport;
    if (!config_.endpoint.empty()) {
      HttpOptions options;
      options.endpoint = config_.endpoint;
      options.timeout = std::chrono::milliseconds(config_.timeout_ms.value_or(10000));
      options.max_in_flight = config_.max_in_flight;
      transport = std::make_unique<HttpTransport>(options);
    }
    if (!config_.cache_dir.empty()) {
      transport = std::make_unique<CachingTransport>(std::move(transport), config_.cache_dir,
                                                     config_.endpoint);
    }
    auto remote = std::make_shared<RemoteProvider>(std::move(transport));

    bool healthy = true;
    if (config_.cache_dir.empty()) {
      try {
        remote->Health();
      } catch (const ProviderError &e) {
        if (!config_.allow_degrade) throw;
        spdlog::warn("inference service unavailable ({}); using offline providers", e.what());
        healthy = false;
      }
    }
    if (!healthy) {
      chosen = offline;
    } else if (config_.allow_degrade) {
      chosen = std::make_shared<DegradingProvider>(remote, offline);
    } else {
      chosen = remote;
    }
  }

  if (!config_.similarity_table_path.empty()) {
    chosen = std::make_shared<SimilarityTableProvider>(
        chosen, SimilarityTableProvider::LoadTable(config_.similarity_table_path));
  }
  provider_ = std::move(chosen);
}

AnswerPackage Engine::Run(Stage stage, std::string_view query, std::span<const Passage> passages,
                          bool lenient) {
  AnswerPackage p;
  p.query = std::string(query);
  p.stage = stage;

  if (stage != Stage::kExplain) {
    p.count_spans =
        NormalizeSpans(provider_->PredictSpans(query, passages, SpanMode::kCount), passages);
    for (const AnswerSpan &s : p.count_spans) {
      auto split = SplitCnp(s.text, *units_);
      if (!split) continue;
      p.candidates.emplace_back(split->quantity.value, s.confidence, s.passage_id, s.passage_rank,
                                s.ref());
      if (split->modifier_phrase.empty()) continue;
      Cnp cnp;
      cnp.quantity = split->quantity;
      cnp.modifier_phrase = split->modifier_phrase;
      cnp.confidence = s.confidence;
      cnp.text = CollapseWhitespace(
          std::string_view(s.text).substr(split->begin, split->end - split->begin));
      cnp.source = SpanRef{s.passage_id, s.start + split->begin, s.start + split->end};
      p.cnps.push_back(std::move(cnp));
    }
    p.prediction = Consolidate(p.candidates, config_.strategy);
  }

  if (stage == Stage::kContextualize || stage == Stage::kPipeline) {
    ContextOptions options{RelativeTolerance(config_.alpha), config_.similarity_threshold};
    p.context = Contextualize(p.cnps, p.prediction, options, *provider_);
  }

  if (stage == Stage::kExplain || stage == Stage::kPipeline) {
    Explanation e;
    e.query_rewrite = RewriteQuery(query);
    e.answer_type = AnswerType(query);
    e.ranked.strategy = config_.explanation_strategy;
    try {
      if (config_.explanation_strategy == InstanceRanking::kTypeCompatibility &&
          e.answer_type.empty()) {
        throw InputError("type_compatibility ranking needs an answer type; the query has none");
      }
      e.spans = NormalizeSpans(
          provider_->PredictSpans(e.query_rewrite, passages, SpanMode::kInstance), passages);
      auto candidates = ExtractInstances(e.spans, *provider_);
      e.ranked = RankInstances(std::move(candidates), config_.explanation_strategy, e.answer_type,
                               *provider_);
      if (e.ranked.items.size() > static_cast<std::size_t>(config_.k)) {
        e.ranked.items.resize(static_cast<std::size_t>(config_.k));
      }
    } catch (const InputError &err) {
      if (!lenient) throw;
      e.error = err.what();
      e.ranked.items.clear();
    }
    p.explanation = std::move(e);
  }
  return p;
}

void Engine::LoadDataset(const std::string &path) { dataset_ = LoadCorpus(path); }

std::string Engine::RunRequest(Stage stage, const json &request) {
  if (!request.is_object()) throw InputError("request must be a JSON object");
  if (request.contains("dataset_path")) {
    if (!request["dataset_path"].is_string()) throw InputError("dataset_path must be a string");
    auto records = LoadCorpus(request["dataset_path"].get<std::string>());
    std::string out;
    for (const QueryRecord &r : records) {
      AnswerPackage p = Run(stage, r.query, r.passages, /*lenient=*/true);
      p.id = r.id;
      out += CanonicalDump(PackageToJson(p, config_), -1);
      out += '\n';
    }
    return out;
  }

  if (!request.contains("query") || !request["query"].is_string()) {
    throw InputError("request needs a string 'query'");
  }
  std::string query = request["query"].get<std::string>();
  std::vector<Passage> passages;
  std::string id;
  if (request.contains("passages")) {
    passages = PassagesFromJson(request["passages"]);
  } else if (request.contains("passages_path")) {
    if (!request["passages_path"].is_string()) throw InputError("passages_path must be a string");
    const std::string path = request["passages_path"].get<std::string>();
    std::string text = ReadFile(path);
    std::size_t first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) {
      // Empty file: no passages.
    } else if (text[first] == '[') {
      passages = PassagesFromJson(ParseJson(text, path));
    } else {
      json items = json::array();
      std::istringstream in(text);
      std::string line;
      std::size_t line_no = 0;
      while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        items.push_back(ParseJson(line, path + ":" + std::to_string(line_no)));
      }
      passages = PassagesFromJson(items);
    }
  } else if (!dataset_.empty()) {
    auto it = std::find_if(dataset_.begin(), dataset_.end(),
                           [&](const QueryRecord &r) { return r.query == query; });
    if (it == dataset_.end()) {
      std::string key = Lower(CollapseWhitespace(query));
      it = std::find_if(dataset_.begin(), dataset_.end(), [&](const QueryRecord &r) {
        return Lower(CollapseWhitespace(r.query)) == key;
      });
    }
    if (it == dataset_.end()) throw InputError("query not found in the loaded dataset");
    passages = it->passages;
    id = it->id;
  }
  AnswerPackage p = Run(stage, query, passages);
  p.id = id;
  return CanonicalDump(PackageToJson(p, config_), 2) + "\n";
}

json Engine::Evaluate(std::span<const QueryRecord> records) {
  std::vector<std::optional<Count>> preds;
  std::vector<Count> golds;
  std::vector<RankingCase> rankings;
  std::vector<CategoryPair> categories;
  json per_query = json::array();

  for (const QueryRecord &r : records) {
    AnswerPackage p = Run(Stage::kPipeline, r.query, r.passages, /*lenient=*/true);
    json row = {{"id", r.id}};
    row["prediction"] = p.prediction ? CountToJson(p.prediction->value) : json(nullptr);

    if (r.gold_count) {
      preds.push_back(p.prediction ? std::optional<Count>(p.prediction->value) : std::nullopt);
      golds.push_back(r.gold_count->value);
      row["gold"] = CountToJson(r.gold_count->value);
      row["relaxed_match"] = p.prediction.has_value() &&
                             RelaxedMatch(p.prediction->value, r.gold_count->value);
    }

    if (r.gold_instances) {
      RankingCase c;
      c.gold = *r.gold_instances;
      for (const RankedInstance &item : p.explanation->ranked.items) {
        c.ranked.push_back(item.candidate.surface);
      }
      row["instances"] = c.ranked;
      rankings.push_back(std::move(c));
    }

    if (r.extra.contains("cnp_labels")) {
      const json &labels = r.extra["cnp_labels"];
      if (!labels.is_array()) throw InputError("record '" + r.id + "': cnp_labels must be an array");
      for (const json &l : labels) {
        if (!l.is_object() || !l.contains("value") || !l.contains("modifier_phrase") ||
            !l.contains("category") || !l["modifier_phrase"].is_string() ||
            !l["category"].is_string()) {
          throw InputError("record '" + r.id +
                           "': cnp_labels entries need value, modifier_phrase and category");
        }
        auto value = CountFromJson(l["value"]);
        auto label = ParseCnpCategory(l["category"].get<std::string>());
        if (!value || !label) throw InputError("record '" + r.id + "': bad cnp label");
        std::string phrase = Lower(CollapseWhitespace(l["modifier_phrase"].get<std::string>()));
        categories.push_back({PredictedCategory(*p.context, *value, phrase), *label});
      }
    }
    per_query.push_back(std::move(row));
  }

  json report;
  report["config"] = ConfigToJson(config_);
  report["n_records"] = records.size();

  CountEvalResult counts = EvaluateCounts(preds, golds);
  report["count"] = {{"n_queries", counts.n_queries},
                     {"n_answered", counts.n_answered},
                     {"n_correct", counts.n_correct},
                     {"coverage", RatioJson(counts.coverage)},
                     {"relaxed_precision", counts.relaxed_precision
                                               ? RatioJson(*counts.relaxed_precision)
                                               : json(nullptr)},
                     {"relaxed_precision_all", RatioJson(counts.relaxed_precision_all)}};

  InstanceEvalResult inst = InstanceMetrics(rankings, config_.ks);
  json p_at = json::object(), r_at = json::object(), h_at = json::object();
  for (int k : config_.ks) {
    p_at[std::to_string(k)] = inst.precision_at[k];
    r_at[std::to_string(k)] = inst.recall_at[k];
    h_at[std::to_string(k)] = inst.hit_at[k];
  }
  report["instances"] = {{"n_queries", inst.n_queries},
                         {"precision_at", std::move(p_at)},
                         {"recall_at", std::move(r_at)},
                         {"hit_at", std::move(h_at)},
                         {"mrr", inst.n_queries > 0 ? json(inst.mrr) : json(nullptr)}};

  json acc = json::object();
  for (const auto &[category, ratio] : CnpAccuracy(categories)) {
    acc[std::string(CnpCategoryName(category))] = ratio.value();
  }
  report["cnp_accuracy"] = std::move(acc);
  report["per_query"] = std::move(per_query);
  return report;
}

std::string Engine::EvaluateRequest(const json &request) {
  if (!request.is_object() || !request.contains("dataset_path") ||
      !request["dataset_path"].is_string()) {
    throw InputError("evaluate request needs a string 'dataset_path'");
  }
  std::string format = request.value("format", "json");
  if (format != "json" && format != "table") throw InputError("format must be 'json' or 'table'");
  auto records = LoadCorpus(request["dataset_path"].get<std::string>());
  json report = Evaluate(records);
  if (format == "table") return EvaluationTable(report);
  return CanonicalDump(std::move(report), 2) + "\n";
}

std::string EvaluationTable(const json &report_in) {
  json report = report_in;
  Canonicalize(report);
  std::vector<std::pair<std::string, std::string>> rows;
  auto cell = [](const json &v) { return v.is_null() ? std::string("-") : v.dump(); };
  const json &c = report["count"];
  for (const char *key : {"n_queries", "n_answered", "n_correct", "coverage", "relaxed_precision",
                          "relaxed_precision_all"}) {
    rows.emplace_back(std::string("count.") + key, cell(c[key]));
  }
  const json &i = report["instances"];
  rows.emplace_back("instances.n_queries", cell(i["n_queries"]));
  for (const char *metric : {"precision_at", "recall_at", "hit_at"}) {
    std::vector<std::pair<int, std::string>> ordered;
    for (const auto &[k, v] : i[metric].items()) ordered.emplace_back(std::stoi(k), cell(v));
    std::sort(ordered.begin(), ordered.end());
    for (const auto &[k, v] : ordered) {
      rows.emplace_back("instances." + std::string(metric) + "." + std::to_string(k), v);
    }
  }
  rows.emplace_back("instances.mrr", cell(i["mrr"]));
  for (const auto &[k, v] : report["cnp_accuracy"].items()) {
    rows.emplace_back("cnp_accuracy." + k, cell(v));
  }

  std::size_t width = 6;
  for (const auto &[name, value] : rows) width = std::max(width, name.size());
  std::ostringstream out;
  out << std::left << std::setw(static_cast<int>(width)) << "metric" << "  value\n";
  for (const auto &[name, value] : rows) {
    out << std::left << std::setw(static_cast<int>(width)) << name << "  " << value << "\n";
  }
  return out.str();
}

// --- Dataset tools ------------------------------------------------------------

std::string DatasetTool(std::string_view operation, const json &request) {
  if (!request.is_object() || !request.contains("dataset_path") ||
      !request["dataset_path"].is_string()) {
    throw InputError("dataset request needs a string 'dataset_path'");
  }
  auto records = LoadCorpus(request["dataset_path"].get<std::string>());
  UnitStoplist units = UnitStoplist::Default();
  if (request.contains("units_path") && request["units_path"].is_string()) {
    try {
      units = UnitStoplist::FromFile(request["units_path"].get<std::string>());
    } catch (const std::runtime_error &e) {
      throw InputError(e.what());
    }
  }

  std::ostringstream out;
  if (operation == "label") {
    for (QueryRecord &r : records) {
      if (!r.gold_count) {
        spdlog::warn("record '{}' has no gold count; left unlabeled", r.id);
        continue;
      }
      json labels = json::array();
      for (const SpanLabel &l : LabelSpans(r, units)) labels.push_back(SpanLabelToJson(l));
      r.extra["span_labels"] = std::move(labels);
    }
    StoreCorpus(records, out);
    return out.str();
  }
  if (operation == "filter") {
    StoreCorpus(FilterMeasurementQueries(std::move(records), units), out);
    return out.str();
  }
  if (operation == "split") {
    double fraction = 0.2;
    std::uint64_t seed = 0;
    if (request.contains("test_fraction")) {
      if (!request["test_fraction"].is_number()) throw InputError("test_fraction must be a number");
      fraction = request["test_fraction"].get<double>();
    }
    if (request.contains("seed")) {
      if (!request["seed"].is_number_unsigned() && !request["seed"].is_number_integer()) {
        throw InputError("seed must be an integer");
      }
      seed = request["seed"].get<std::uint64_t>();
    }
    auto [train, test] = SplitCorpus(std::move(records), fraction, seed);
    std::ostringstream train_out, test_out;
    StoreCorpus(train, train_out);
    StoreCorpus(test, test_out);
    return json{{"train", train_out.str()}, {"test", test_out.str()}}.dump();
  }
  throw InputError("unknown dataset operation '" + std::string(operation) + "'");
}

}  // namespace countqa
