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

#include "countqa/countqa.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <string>

#include "countqa/corpus.h"
#include "countqa/engine.h"
#include "countqa/errors.h"
#include "countqa/json_io.h"

struct countqa_engine {
  std::unique_ptr<countqa::Engine> impl;
};

namespace {

thread_local std::string last_error;

char *Dup(const std::string &s) {
  char *out = static_cast<char *>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

// Runs `fn`, mapping exceptions to status codes.
template <typename Fn>
countqa_status Guard(Fn &&fn) {
  last_error.clear();
  try {
    fn();
    return COUNTQA_OK;
  } catch (const countqa::Error &e) {
    last_error = e.what();
    return static_cast<countqa_status>(e.kind());
  } catch (const std::invalid_argument &e) {
    last_error = e.what();
    return COUNTQA_ERROR_INPUT;
  } catch (const std::exception &e) {
    last_error = std::string("internal error: ") + e.what();
    return COUNTQA_ERROR_INTERNAL;
  } catch (...) {
    last_error = "internal error";
    return COUNTQA_ERROR_INTERNAL;
  }
}

nlohmann::json Request(const char *json_text, const char *what) {
  if (json_text == nullptr) throw countqa::InputError(std::string(what) + " is NULL");
  return countqa::ParseJson(json_text, what);
}

void CheckOut(char **out) {
  if (out == nullptr) throw countqa::InputError("output pointer is NULL");
  *out = nullptr;
}

}  // namespace

extern "C" {

const char *countqa_version(void) { return "1.0.0"; }

const char *countqa_last_error(void) { return last_error.c_str(); }

void countqa_string_free(char *s) { std::free(s); }

countqa_status countqa_engine_create(const char *config_json, countqa_engine **engine) {
  return Guard([&] {
    if (engine == nullptr) throw countqa::InputError("engine pointer is NULL");
    *engine = nullptr;
    nlohmann::json config;
    if (config_json != nullptr && *config_json != '\0') config = Request(config_json, "config");
    auto handle = std::make_unique<countqa_engine>();
    handle->impl = std::make_unique<countqa::Engine>(countqa::ConfigFromJson(config));
    *engine = handle.release();
  });
}

void countqa_engine_destroy(countqa_engine *engine) { delete engine; }

countqa_status countqa_engine_config(const countqa_engine *engine, char **out) {
  return Guard([&] {
    CheckOut(out);
    if (engine == nullptr) throw countqa::InputError("engine is NULL");
    *out = Dup(countqa::ConfigToJson(engine->impl->config()).dump());
  });
}

countqa_status countqa_engine_load_dataset(countqa_engine *engine, const char *path) {
  return Guard([&] {
    if (engine == nullptr || path == nullptr) throw countqa::InputError("engine or path is NULL");
    engine->impl->LoadDataset(path);
  });
}

countqa_status countqa_run(countqa_engine *engine, countqa_stage stage, const char *request_json,
                           char **out) {
  return Guard([&] {
    CheckOut(out);
    if (engine == nullptr) throw countqa::InputError("engine is NULL");
    countqa::Stage s;
    switch (stage) {
      case COUNTQA_STAGE_ANSWER: s = countqa::Stage::kAnswer; break;
      case COUNTQA_STAGE_CONTEXTUALIZE: s = countqa::Stage::kContextualize; break;
      case COUNTQA_STAGE_EXPLAIN: s = countqa::Stage::kExplain; break;
      case COUNTQA_STAGE_PIPELINE: s = countqa::Stage::kPipeline; break;
      default: throw countqa::InputError("unknown stage");
    }
    *out = Dup(engine->impl->RunRequest(s, Request(request_json, "request")));
  });
}

countqa_status countqa_evaluate(countqa_engine *engine, const char *request_json, char **out) {
  return Guard([&] {
    CheckOut(out);
    if (engine == nullptr) throw countqa::InputError("engine is NULL");
    *out = Dup(engine->impl->EvaluateRequest(Request(request_json, "request")));
  });
}

countqa_status countqa_dataset_tool(const char *operation, const char *request_json, char **out) {
  return Guard([&] {
    CheckOut(out);
    if (operation == nullptr) throw countqa::InputError("operation is NULL");
    countqa::InitLogging();
    *out = Dup(countqa::DatasetTool(operation, Request(request_json, "request")));
  });
}

countqa_status countqa_parse_quantity(const char *text, char **out) {
  return Guard([&] {
    CheckOut(out);
    if (text == nullptr) throw countqa::InputError("text is NULL");
    auto q = countqa::ParseQuantity(text);
    *out = Dup(q ? countqa::CanonicalDump(countqa::QuantityToJson(*q), -1) : "null");
  });
}

}  // extern "C"
