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

// countqa: command-line front end.
//
//   countqa answer --query Q --passages FILE
//   countqa pipeline --dataset FILE.jsonl
//   countqa evaluate --dataset FILE.jsonl --format table
//   countqa serve --port 8080
//
// Results go to stdout only after the whole command has succeeded. Exit
// codes: 0 ok, 2 usage or input error, 3 provider error, 4 internal error.

#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "httplib.h"
#include "json.hpp"

#include "countqa/countqa.h"

namespace {

using nlohmann::json;

struct Options {
  std::string strategy;
  std::optional<double> alpha;
  std::optional<double> similarity_threshold;
  std::string explanation_strategy;
  std::optional<int> k;
  std::string provider;
  std::string endpoint;
  std::optional<int> timeout_ms;
  std::optional<int> max_in_flight;
  bool allow_degrade = false;
  std::string cache_dir;
  std::string units;
  std::string similarity_table;
  std::string ks;

  std::string query;
  std::string passages;
  std::string dataset;
  std::string format = "json";
  std::string train_out;
  std::string test_out;
  double test_fraction = 0.2;
  std::uint64_t seed = 0;
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string text;
};

// Owns a string returned by the library.
class LibString {
 public:
  LibString() = default;
  ~LibString() { countqa_string_free(s_); }
  LibString(const LibString &) = delete;
  LibString &operator=(const LibString &) = delete;
  char **out() { return &s_; }
  std::string str() const { return s_ ? s_ : ""; }

 private:
  char *s_ = nullptr;
};

class EngineHandle {
 public:
  ~EngineHandle() { countqa_engine_destroy(engine_); }
  countqa_engine *get() const { return engine_; }
  countqa_engine **out() { return &engine_; }

 private:
  countqa_engine *engine_ = nullptr;
};

int Fail(int status) {
  std::cerr << "countqa: " << countqa_last_error() << "\n";
  return status;
}

int Usage(const std::string &message) {
  std::cerr << "countqa: " << message << "\n";
  return COUNTQA_ERROR_INPUT;
}

json EngineConfig(const Options &o) {
  json c = json::object();
  if (!o.strategy.empty()) c["strategy"] = o.strategy;
  if (o.alpha) c["alpha"] = *o.alpha;
  if (o.similarity_threshold) c["similarity_threshold"] = *o.similarity_threshold;
  if (!o.explanation_strategy.empty()) c["explanation_strategy"] = o.explanation_strategy;
  if (o.k) c["k"] = *o.k;
  if (!o.provider.empty()) c["provider"] = o.provider;
  if (!o.endpoint.empty()) c["endpoint"] = o.endpoint;
  if (o.timeout_ms) c["timeout_ms"] = *o.timeout_ms;
  if (o.max_in_flight) c["max_in_flight"] = *o.max_in_flight;
  if (o.allow_degrade) c["allow_degrade"] = true;
  if (!o.cache_dir.empty()) c["cache_dir"] = o.cache_dir;
  if (!o.units.empty()) c["units_path"] = o.units;
  if (!o.similarity_table.empty()) c["similarity_table_path"] = o.similarity_table;
  if (!o.ks.empty()) {
    json ks = json::array();
    std::stringstream ss(o.ks);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        std::size_t used = 0;
        int k = std::stoi(item, &used);
        if (used != item.size()) throw std::invalid_argument(item);
        ks.push_back(k);
      } catch (const std::exception &) {
        throw CLI::ValidationError("--ks", "expected comma-separated integers, got '" + o.ks + "'");
      }
    }
    c["ks"] = ks;
  }
  return c;
}

int RunStage(countqa_engine *engine, countqa_stage stage, const Options &o) {
  json request;
  if (!o.dataset.empty()) {
    if (!o.query.empty() || !o.passages.empty()) {
      return Usage("--dataset cannot be combined with --query or --passages");
    }
    request["dataset_path"] = o.dataset;
  } else {
    if (o.query.empty()) return Usage("--query or --dataset is required");
    request["query"] = o.query;
    if (!o.passages.empty()) {
      request["passages_path"] = o.passages;
    } else {
      request["passages"] = json::array();
    }
  }
  LibString out;
  int status = countqa_run(engine, stage, request.dump().c_str(), out.out());
  if (status != COUNTQA_OK) return Fail(status);
  std::cout << out.str() << std::flush;
  return 0;
}

int RunEvaluate(countqa_engine *engine, const Options &o) {
  if (o.dataset.empty()) return Usage("--dataset is required");
  json request = {{"dataset_path", o.dataset}, {"format", o.format}};
  LibString out;
  int status = countqa_evaluate(engine, request.dump().c_str(), out.out());
  if (status != COUNTQA_OK) return Fail(status);
  std::cout << out.str() << std::flush;
  return 0;
}

int RunDatasetTool(const std::string &operation, const Options &o) {
  if (o.dataset.empty()) return Usage("--dataset is required");
  json request = {{"dataset_path", o.dataset}};
  if (!o.units.empty()) request["units_path"] = o.units;
  if (operation == "split") {
    if (o.train_out.empty() || o.test_out.empty()) {
      return Usage("split needs --train-out and --test-out");
    }
    request["test_fraction"] = o.test_fraction;
    request["seed"] = o.seed;
  }
  LibString out;
  int status = countqa_dataset_tool(operation.c_str(), request.dump().c_str(), out.out());
  if (status != COUNTQA_OK) return Fail(status);
  if (operation != "split") {
    std::cout << out.str() << std::flush;
    return 0;
  }
  json parts = json::parse(out.str());
  for (const auto &[path, key] : {std::pair{o.train_out, "train"}, std::pair{o.test_out, "test"}}) {
    std::ofstream f(path, std::ios::binary);
    f << parts[key].get<std::string>();
    if (!f) return Usage("cannot write " + path);
  }
  return 0;
}

int RunParse(const Options &o) {
  LibString out;
  int status = countqa_parse_quantity(o.text.c_str(), out.out());
  if (status != COUNTQA_OK) return Fail(status);
  std::cout << out.str() << "\n";
  return 0;
}

void Reply(httplib::Response &res, int code, const std::string &body) {
  res.status = code;
  res.set_content(body, "application/json");
}

std::string ErrorBody(const std::string &message) { return json{{"error", message}}.dump(); }

int RunServe(countqa_engine *engine, const Options &o) {
  if (!o.dataset.empty()) {
    int status = countqa_engine_load_dataset(engine, o.dataset.c_str());
    if (status != COUNTQA_OK) return Fail(status);
  }

  httplib::Server server;
  server.Get("/v1/health", [](const httplib::Request &, httplib::Response &res) {
    Reply(res, 200, json{{"status", "ok"}, {"version", countqa_version()}}.dump());
  });
  server.Post("/v1/answer", [engine](const httplib::Request &req, httplib::Response &res) {
    json body;
    try {
      body = json::parse(req.body);
    } catch (const json::exception &e) {
      return Reply(res, 400, ErrorBody(std::string("malformed JSON: ") + e.what()));
    }
    if (!body.is_object()) return Reply(res, 400, ErrorBody("request must be a JSON object"));
    if (body.contains("dataset_path") || body.contains("passages_path")) {
      return Reply(res, 400, ErrorBody("file paths are not accepted over HTTP"));
    }
    countqa_stage stage = COUNTQA_STAGE_ANSWER;
    if (body.contains("stage")) {
      const json &s = body["stage"];
      if (s == "answer") stage = COUNTQA_STAGE_ANSWER;
      else if (s == "contextualize") stage = COUNTQA_STAGE_CONTEXTUALIZE;
      else if (s == "explain") stage = COUNTQA_STAGE_EXPLAIN;
      else if (s == "pipeline") stage = COUNTQA_STAGE_PIPELINE;
      else return Reply(res, 400, ErrorBody("unknown stage"));
      body.erase("stage");
    }
    LibString out;
    int status = countqa_run(engine, stage, body.dump().c_str(), out.out());
    switch (status) {
      case COUNTQA_OK: return Reply(res, 200, out.str());
      case COUNTQA_ERROR_INPUT: return Reply(res, 400, ErrorBody(countqa_last_error()));
      case COUNTQA_ERROR_PROVIDER: return Reply(res, 502, ErrorBody(countqa_last_error()));
      default: return Reply(res, 500, ErrorBody(countqa_last_error()));
    }
  });

  int port = o.port;
  if (port == 0) {
    port = server.bind_to_any_port(o.host);
  } else if (!server.bind_to_port(o.host, port)) {
    port = -1;
  }
  if (port < 0) return Usage("cannot bind " + o.host + ":" + std::to_string(o.port));

  // Stop cleanly on SIGINT/SIGTERM.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);
  std::thread waiter([&server, signals] {
    int sig = 0;
    sigwait(&signals, &sig);
    server.stop();
  });
  waiter.detach();

  std::cout << "listening on http://" << o.host << ":" << port << std::endl;
  server.listen_after_bind();
  return 0;
}

}  // namespace

int main(int argc, char **argv) {
  Options o;
  CLI::App app{"Count-query answering with explanatory evidence"};
  app.set_config("--config", "", "TOML-style key = value file mirroring the flags");
  app.require_subcommand(1);
  app.fallthrough();

  app.add_option("--strategy", o.strategy, "Count consolidation")
      ->check(CLI::IsMember({"most_confident", "most_frequent", "median", "weighted_median"}));
  app.add_option("--alpha", o.alpha, "Relative band for synonyms and the representative")
      ->check(CLI::Range(0.0, 1.0));
  app.add_option("--similarity-threshold", o.similarity_threshold,
                 "Minimum phrase similarity for synonyms and subgroups")
      ->check(CLI::Range(-1.0, 1.0));
  app.add_option("--explanation-strategy", o.explanation_strategy, "Instance ranking")
      ->check(CLI::IsMember(
          {"no_consolidation", "context_frequency", "summed_confidence", "type_compatibility"}));
  app.add_option("--k", o.k, "Number of instances to return")->check(CLI::PositiveNumber);
  app.add_option("--provider", o.provider, "offline or remote")
      ->check(CLI::IsMember({"offline", "remote"}));
  app.add_option("--endpoint", o.endpoint, "Inference service URL, http://host:port");
  app.add_option("--timeout-ms", o.timeout_ms, "Per-request timeout")->check(CLI::PositiveNumber);
  app.add_option("--max-in-flight", o.max_in_flight, "Concurrent service requests")
      ->check(CLI::Range(1, 1024));
  app.add_flag("--allow-degrade", o.allow_degrade,
               "Fall back to offline providers when the service fails");
  app.add_option("--cache-dir", o.cache_dir, "Record and replay service responses here");
  app.add_option("--units", o.units, "Measurement-unit stoplist file");
  app.add_option("--similarity-table", o.similarity_table,
                 "JSON file pinning phrase-pair similarities");

  auto add_inputs = [&](CLI::App *cmd) {
    cmd->add_option("--query", o.query, "Count query");
    cmd->add_option("--passages", o.passages, "Passages file (JSON array or JSON lines)");
    cmd->add_option("--dataset", o.dataset, "Dataset file; one result line per record");
  };
  struct StageCommand {
    const char *name;
    const char *help;
    countqa_stage stage;
  };
  const StageCommand stage_commands[] = {
      {"answer", "Predict the count", COUNTQA_STAGE_ANSWER},
      {"contextualize", "Predict and categorize count-modified noun phrases",
       COUNTQA_STAGE_CONTEXTUALIZE},
      {"explain", "Rank instance entities", COUNTQA_STAGE_EXPLAIN},
      {"pipeline", "All stages", COUNTQA_STAGE_PIPELINE},
  };
  std::vector<std::pair<CLI::App *, countqa_stage>> stages;
  for (const auto &c : stage_commands) {
    CLI::App *cmd = app.add_subcommand(c.name, c.help);
    add_inputs(cmd);
    stages.emplace_back(cmd, c.stage);
  }

  CLI::App *evaluate = app.add_subcommand("evaluate", "Score the pipeline on a dataset");
  evaluate->add_option("--dataset", o.dataset, "Dataset file")->required();
  evaluate->add_option("--format", o.format, "json or table")
      ->check(CLI::IsMember({"json", "table"}));
  evaluate->add_option("--ks", o.ks, "Instance cutoffs, e.g. 1,5,10");

  CLI::App *label = app.add_subcommand("label", "Label count spans against gold counts");
  label->add_option("--dataset", o.dataset, "Dataset file")->required();
  CLI::App *filter = app.add_subcommand("filter", "Drop queries that mention measurement units");
  filter->add_option("--dataset", o.dataset, "Dataset file")->required();
  CLI::App *split = app.add_subcommand("split", "Seeded random train/test split");
  split->add_option("--dataset", o.dataset, "Dataset file")->required();
  split->add_option("--test-fraction", o.test_fraction, "Share of records in the test side")
      ->check(CLI::Range(0.0, 1.0));
  split->add_option("--seed", o.seed, "Shuffle seed");
  split->add_option("--train-out", o.train_out, "Output file")->required();
  split->add_option("--test-out", o.test_out, "Output file")->required();

  CLI::App *serve = app.add_subcommand("serve", "HTTP service: POST /v1/answer, GET /v1/health");
  serve->add_option("--host", o.host, "Bind address");
  serve->add_option("--port", o.port, "Port; 0 picks a free one")->check(CLI::Range(0, 65535));
  serve->add_option("--dataset", o.dataset, "Dataset used for query-only requests");

  CLI::App *parse = app.add_subcommand("parse", "Print the first quantity in a text");
  parse->add_option("text", o.text, "Text")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return COUNTQA_ERROR_INPUT;
  }

  json config;
  try {
    config = EngineConfig(o);
  } catch (const CLI::ValidationError &e) {
    return Usage(e.what());
  }
  // Every command builds the engine first so that a misconfigured or
  // unreachable provider fails before any work is done, even those that
  // never call a provider.
  EngineHandle engine;
  int status = countqa_engine_create(config.dump().c_str(), engine.out());
  if (status != COUNTQA_OK) return Fail(status);

  for (const auto &[cmd, stage] : stages) {
    if (cmd->parsed()) return RunStage(engine.get(), stage, o);
  }
  if (evaluate->parsed()) return RunEvaluate(engine.get(), o);
  if (parse->parsed()) return RunParse(o);
  if (label->parsed()) return RunDatasetTool("label", o);
  if (filter->parsed()) return RunDatasetTool("filter", o);
  if (split->parsed()) return RunDatasetTool("split", o);
  if (serve->parsed()) return RunServe(engine.get(), o);
  return Usage("no command");
}
