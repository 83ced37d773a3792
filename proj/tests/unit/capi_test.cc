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

// Exercises the shared library through its C interface only.

#include "countqa/countqa.h"

#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

#include "gtest/gtest.h"
#include "json.hpp"

namespace {

using nlohmann::json;

const std::string kData = COUNTQA_TEST_DATA;

std::string Take(char *s) {
  std::string out = s ? s : "";
  countqa_string_free(s);
  return out;
}

class CApiTest : public ::testing::Test {
 protected:
  void SetUp() override { ASSERT_EQ(countqa_engine_create("{}", &engine_), COUNTQA_OK); }
  void TearDown() override { countqa_engine_destroy(engine_); }
  countqa_engine *engine_ = nullptr;
};

TEST(CApiBasicsTest, Version) { EXPECT_STREQ(countqa_version(), "1.0.0"); }

TEST(CApiBasicsTest, CreateErrors) {
  countqa_engine *engine = nullptr;
  EXPECT_EQ(countqa_engine_create("{not json", &engine), COUNTQA_ERROR_INPUT);
  EXPECT_EQ(engine, nullptr);
  EXPECT_NE(std::string(countqa_last_error()), "");
  EXPECT_EQ(countqa_engine_create(R"({"alpha": 7})", &engine), COUNTQA_ERROR_INPUT);
  EXPECT_EQ(countqa_engine_create("{}", nullptr), COUNTQA_ERROR_INPUT);
  EXPECT_EQ(countqa_engine_create(R"({"provider": "remote", "endpoint": "http://127.0.0.1:1",
                                       "timeout_ms": 300})",
                                  &engine),
            COUNTQA_ERROR_PROVIDER);
  EXPECT_EQ(engine, nullptr);
  countqa_engine_destroy(nullptr);
  countqa_string_free(nullptr);
}

TEST_F(CApiTest, RunAnswer) {
  char *out = nullptr;
  json request = {{"query", "How many songs did John Lennon write?"},
                  {"passages_path", kData + "/fixtures/lennon_passages.json"}};
  ASSERT_EQ(countqa_run(engine_, COUNTQA_STAGE_ANSWER, request.dump().c_str(), &out), COUNTQA_OK);
  json doc = json::parse(Take(out));
  EXPECT_EQ(doc["prediction"]["value"], 180);
  EXPECT_EQ(doc["stage"], "answer");
}

TEST_F(CApiTest, RunErrors) {
  char *out = nullptr;
  EXPECT_EQ(countqa_run(engine_, COUNTQA_STAGE_ANSWER, "[]", &out), COUNTQA_ERROR_INPUT);
  EXPECT_EQ(out, nullptr);
  EXPECT_EQ(countqa_run(engine_, static_cast<countqa_stage>(9), "{}", &out), COUNTQA_ERROR_INPUT);
  EXPECT_EQ(countqa_run(nullptr, COUNTQA_STAGE_ANSWER, "{}", &out), COUNTQA_ERROR_INPUT);
}

TEST_F(CApiTest, ConfigEvaluateAndTools) {
  char *out = nullptr;
  ASSERT_EQ(countqa_engine_config(engine_, &out), COUNTQA_OK);
  EXPECT_EQ(json::parse(Take(out))["strategy"], "weighted_median");

  json eval = {{"dataset_path", kData + "/fixtures/corpus.jsonl"}};
  ASSERT_EQ(countqa_evaluate(engine_, eval.dump().c_str(), &out), COUNTQA_OK);
  EXPECT_EQ(json::parse(Take(out))["n_records"], 10);

  ASSERT_EQ(countqa_dataset_tool("filter", eval.dump().c_str(), &out), COUNTQA_OK);
  EXPECT_FALSE(Take(out).empty());
  EXPECT_EQ(countqa_dataset_tool("nope", eval.dump().c_str(), &out), COUNTQA_ERROR_INPUT);

  EXPECT_EQ(countqa_engine_load_dataset(engine_, "/nonexistent.jsonl"), COUNTQA_ERROR_INPUT);
}

TEST(CApiBasicsTest, ParseQuantity) {
  char *out = nullptr;
  ASSERT_EQ(countqa_parse_quantity("more than 150 songs", &out), COUNTQA_OK);
  json q = json::parse(Take(out));
  EXPECT_EQ(q["value"], 150);
  EXPECT_EQ(q["modifier"], "at_least");
  ASSERT_EQ(countqa_parse_quantity("no numbers", &out), COUNTQA_OK);
  EXPECT_EQ(Take(out), "null");
}

TEST(CApiBasicsTest, LastErrorIsPerThread) {
  countqa_engine *engine = nullptr;
  EXPECT_EQ(countqa_engine_create("{bad", &engine), COUNTQA_ERROR_INPUT);
  std::string other;
  std::thread t([&] { other = countqa_last_error(); });
  t.join();
  EXPECT_EQ(other, "");
  EXPECT_NE(std::string(countqa_last_error()), "");
}

}  // namespace
