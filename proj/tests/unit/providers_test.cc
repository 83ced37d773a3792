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

#include <cmath>
#include <filesystem>
#include <limits>

#include "gtest/gtest.h"

#include "common/stub_service.h"
#include "common/subprocess.h"
#include "countqa/corpus.h"
#include "countqa/errors.h"

namespace countqa {
namespace {

using nlohmann::json;

std::vector<Passage> Lennon() {
  return PassagesFromJson(json::parse(R"([
    {"id": "p1", "text": "John Lennon wrote approximately 180 songs for the Beatles."},
    {"id": "p2", "text": "As a solo artist, Lennon released more than 150 songs."},
    {"id": "p3", "text": "Lennon had five children."}])"));
}

// --- Offline ---------------------------------------------------------------

TEST(OfflineProviderTest, CountSpans) {
  OfflineProvider p;
  auto passages = Lennon();
  auto spans = NormalizeSpans(
      p.PredictSpans("How many songs did John Lennon write?", passages, SpanMode::kCount), passages);
  ASSERT_EQ(spans.size(), 3u);
  EXPECT_EQ(spans[0].text, "approximately 180 songs");
  EXPECT_EQ(spans[1].text, "more than 150 songs");
  EXPECT_EQ(spans[2].text, "five children");
  // Query content tokens: many, songs, john, lennon, write.
  EXPECT_DOUBLE_EQ(spans[0].confidence, 3.0 / 5);
  EXPECT_DOUBLE_EQ(spans[1].confidence, 2.0 / 5);
  EXPECT_DOUBLE_EQ(spans[2].confidence, 1.0 / 5);
  EXPECT_EQ(spans[0].parent_sentence, passages[0].text);
}

TEST(OfflineProviderTest, ConfidenceCountsManyAsContentToken) {
  OfflineProvider p;
  std::vector<Passage> passages = {{"p1", 1, "", "Indonesia has around 700 languages."}};
  auto spans = p.PredictSpans("how many languages are spoken in indonesia", passages,
                              SpanMode::kCount);
  ASSERT_EQ(spans.size(), 1u);
  // {many, languages, spoken, indonesia}, two present.
  EXPECT_DOUBLE_EQ(spans[0].confidence, 2.0 / 4);
}

TEST(OfflineProviderTest, InstanceSpansNeedMentions) {
  OfflineProvider p;
  auto passages = Lennon();
  auto spans = p.PredictSpans("which songs did John Lennon write?", passages, SpanMode::kInstance);
  ASSERT_EQ(spans.size(), 3u);
  for (const auto &s : spans) EXPECT_GT(s.confidence, 0.0);
}

TEST(OfflineProviderTest, NoQueryTokensNoSpans) {
  OfflineProvider p;
  auto passages = Lennon();
  EXPECT_TRUE(p.PredictSpans("how", passages, SpanMode::kCount).empty());
  EXPECT_TRUE(p.PredictSpans("songs", {}, SpanMode::kCount).empty());
}

TEST(OfflineProviderTest, TrigramSimilarity) {
  EXPECT_DOUBLE_EQ(OfflineProvider::TrigramSimilarity("languages", "languages"), 1.0);
  EXPECT_DOUBLE_EQ(OfflineProvider::TrigramSimilarity("Languages", "languages "), 1.0);
  double related = OfflineProvider::TrigramSimilarity("languages", "official languages");
  double unrelated = OfflineProvider::TrigramSimilarity("languages", "ethnic groups");
  EXPECT_GT(related, unrelated);
  EXPECT_GE(unrelated, -1.0);
  EXPECT_LE(related, 1.0);
  EXPECT_DOUBLE_EQ(OfflineProvider::TrigramSimilarity("abc", "xyz"), -1.0);
}

TEST(OfflineProviderTest, CapitalizedMentions) {
  auto m = OfflineProvider::CapitalizedMentions("The Beatles met Yoko Ono in London.");
  ASSERT_EQ(m.size(), 3u);
  EXPECT_EQ(m[0].text, "Beatles");
  EXPECT_EQ(m[1].text, "Yoko Ono");
  EXPECT_EQ(m[1].start, 16u);
  EXPECT_EQ(m[2].text, "London");
  auto lennon = OfflineProvider::CapitalizedMentions("John Lennon wrote Imagine");
  ASSERT_EQ(lennon.size(), 2u);
  EXPECT_EQ(lennon[0].text, "John Lennon");
  EXPECT_EQ(lennon[1].text, "Imagine");
  EXPECT_TRUE(OfflineProvider::CapitalizedMentions("").empty());
  EXPECT_TRUE(OfflineProvider::CapitalizedMentions("all lower case here").empty());
}

TEST(OfflineProviderTest, TokenEntailment) {
  EXPECT_DOUBLE_EQ(OfflineProvider::TokenEntailment("Help is a song by the Beatles.", "Help is a song"),
                   1.0);
  EXPECT_DOUBLE_EQ(OfflineProvider::TokenEntailment("Liverpool is a city.", "Liverpool is a song"),
                   0.5);
  EXPECT_DOUBLE_EQ(OfflineProvider::TokenEntailment("Lennon wrote Imagine", "Lennon wrote Imagine"),
                   1.0);
  EXPECT_THROW(OfflineProvider::TokenEntailment("x", "  "), InputError);
}

TEST(NormalizeSpansTest, DropsBadSpansAndRewritesText) {
  auto passages = Lennon();
  std::vector<AnswerSpan> raw(4);
  raw[0] = {"p2", 0, 18, 33, "wrong text", 1.7, {}, {}};
  raw[1] = {"zz", 0, 0, 3, "", 0.5, {}, {}};
  raw[2] = {"p1", 0, 10, 9000, "", 0.5, {}, {}};
  raw[3] = {"p1", 0, 0, 4, "", std::numeric_limits<double>::quiet_NaN(), {}, {}};
  auto spans = NormalizeSpans(raw, passages);
  ASSERT_EQ(spans.size(), 2u);
  EXPECT_EQ(spans[0].passage_id, "p1");
  EXPECT_EQ(spans[0].text, "John");
  EXPECT_EQ(spans[0].confidence, 0.0);
  EXPECT_EQ(spans[1].passage_rank, 2u);
  EXPECT_EQ(spans[1].text, "Lennon released");
  EXPECT_EQ(spans[1].confidence, 1.0);
}

TEST(ClampReportedTest, Clamps) {
  EXPECT_EQ(ClampReported(1.5, 0, 1, "x"), 1.0);
  EXPECT_EQ(ClampReported(-2, -1, 1, "x"), -1.0);
  EXPECT_EQ(ClampReported(0.25, 0, 1, "x"), 0.25);
  EXPECT_EQ(ClampReported(std::nan(""), 0, 1, "x"), 0.0);
}

TEST(SimilarityTableProviderTest, PinsListedPairs) {
  auto table = SimilarityTableProvider::ParseTable(
      json::parse(R"({"pairs": [{"a": "Languages", "b": "dialects", "score": 0.6}]})"));
  SimilarityTableProvider p(std::make_shared<OfflineProvider>(), table);
  EXPECT_DOUBLE_EQ(p.Similarity("dialects", "languages"), 0.6);
  EXPECT_DOUBLE_EQ(p.Similarity("x y", "X  y"), 1.0);
  EXPECT_DOUBLE_EQ(p.Similarity("languages", "ethnic groups"),
                   OfflineProvider::TrigramSimilarity("languages", "ethnic groups"));
  EXPECT_EQ(p.name(), "offline+table");
  EXPECT_THROW(SimilarityTableProvider::ParseTable(json::parse(R"({"pairs": [{"a": "x"}]})")),
               InputError);
  EXPECT_THROW(SimilarityTableProvider::ParseTable(
                   json::parse(R"({"pairs": [{"a": "x", "b": "y", "score": 2}]})")),
               InputError);
  EXPECT_THROW(SimilarityTableProvider::LoadTable("/nonexistent/table.json"), InputError);
}

// --- Remote against a scripted stub ------------------------------------------

std::unique_ptr<RemoteProvider> Connect(const testing::StubService &stub, int timeout_ms = 2000) {
  HttpOptions options;
  options.endpoint = stub.endpoint();
  options.timeout = std::chrono::milliseconds(timeout_ms);
  return std::make_unique<RemoteProvider>(std::make_unique<HttpTransport>(options));
}

TEST(HttpTransportTest, ValidatesEndpoint) {
  for (const char *bad : {"localhost:80", "https://x", "http://", "http://h:0", "http://h:x",
                          "http://h:80/path"}) {
    EXPECT_THROW(HttpTransport(HttpOptions{bad}), InputError) << bad;
  }
  EXPECT_NO_THROW(HttpTransport(HttpOptions{"http://127.0.0.1:9/"}));
}

TEST(RemoteProviderTest, HealthAndWireFormat) {
  testing::StubService stub;
  stub.SetHandler("/v1/spans", [](const json &req) {
    json spans = json::array();
    for (const auto &p : req["passages"]) {
      spans.push_back({{"passage_id", p["id"]}, {"start", 0}, {"end", 4}, {"text", "x"},
                       {"confidence", 0.5}});
    }
    return json{{"spans", spans}};
  });
  auto provider = Connect(stub);
  EXPECT_EQ(provider->Health()["status"], "ok");
  auto passages = Lennon();
  auto spans = provider->PredictSpans("how many songs", passages, SpanMode::kInstance);
  ASSERT_EQ(spans.size(), 3u);
  auto reqs = stub.requests();
  ASSERT_EQ(reqs.back().path, "/v1/spans");
  const json &body = reqs.back().body;
  EXPECT_EQ(body["query"], "how many songs");
  EXPECT_EQ(body["mode"], "instance");
  EXPECT_EQ(body["passages"][0], (json{{"id", "p1"}, {"text", passages[0].text}}));
}

TEST(RemoteProviderTest, UnhealthyServiceIsProviderError) {
  testing::StubService stub;
  stub.SetHealthy(false);
  EXPECT_THROW(Connect(stub)->Health(), ProviderError);
}

TEST(RemoteProviderTest, BatchesLargeRequests) {
  testing::StubService stub;
  auto provider = Connect(stub);
  std::vector<std::string> texts;
  for (int i = 0; i < 150; ++i) texts.push_back("Text " + std::to_string(i));
  auto out = provider->Ner(texts);
  EXPECT_EQ(out.size(), 150u);
  EXPECT_EQ(stub.CountRequests("/v1/ner"), 3u);
  for (const auto &r : stub.requests()) {
    if (r.path == "/v1/ner") EXPECT_LE(r.body["texts"].size(), RemoteProvider::kBatchSize);
  }
}

TEST(RemoteProviderTest, ClampsOutOfRangeValues) {
  testing::StubService stub;
  stub.SetHandler("/v1/entail", [](const json &) {
    return json{{"probabilities", {1.7, -0.2, 0.4}}};
  });
  auto provider = Connect(stub);
  std::vector<TextPair> pairs = {{"a b", "a"}, {"a b", "b"}, {"a b", "c"}};
  auto probs = provider->Entail(pairs);
  EXPECT_EQ(probs, (std::vector<double>{1.0, 0.0, 0.4}));
}

TEST(RemoteProviderTest, MisalignedResponsesAreProviderErrors) {
  testing::StubService stub;
  stub.SetHandler("/v1/entail", [](const json &) { return json{{"probabilities", {0.5}}}; });
  stub.SetHandler("/v1/embed", [](const json &) { return json{{"vectors", json::array()}}; });
  stub.SetHandler("/v1/ner", [](const json &) { return json{{"nothing", 1}}; });
  stub.SetHandler("/v1/spans", [](const json &) {
    return json{{"spans", {{{"passage_id", "p1"}, {"start", -1}, {"end", 2}, {"confidence", 1}}}}};
  });
  auto provider = Connect(stub);
  std::vector<TextPair> pairs = {{"a", "x"}, {"b", "y"}};
  EXPECT_THROW(provider->Entail(pairs), ProviderError);
  EXPECT_THROW(provider->Similarities(pairs), ProviderError);
  std::vector<std::string> texts = {"A"};
  EXPECT_THROW(provider->Ner(texts), ProviderError);
  auto passages = Lennon();
  EXPECT_THROW(provider->PredictSpans("q", passages, SpanMode::kCount), ProviderError);
}

TEST(RemoteProviderTest, NerOffsetsResolveAgainstInput) {
  testing::StubService stub;
  stub.SetHandler("/v1/ner", [](const json &) {
    return json{{"mentions",
                 {{{{"text", "ignored"}, {"type", "PER"}, {"start", 0}, {"end", 4}},
                   {{"text", "bad"}, {"type", "PER"}, {"start", 3}, {"end", 99}}}}}};
  });
  std::vector<std::string> texts = {"John met Paul"};
  auto out = Connect(stub)->Ner(texts);
  ASSERT_EQ(out.size(), 1u);
  ASSERT_EQ(out[0].size(), 1u);
  EXPECT_EQ(out[0][0].text, "John");
  EXPECT_EQ(out[0][0].type, "PER");
}

TEST(RemoteProviderTest, EmbeddingCosine) {
  testing::StubService stub;
  stub.SetHandler("/v1/embed", [](const json &req) {
    json vectors = json::array();
    for (const auto &t : req["texts"]) {
      if (t == "a") vectors.push_back({1.0, 0.0});
      else if (t == "b") vectors.push_back({0.0, 1.0});
      else vectors.push_back({-1.0, 0.0});
    }
    return json{{"vectors", vectors}};
  });
  auto provider = Connect(stub);
  std::vector<TextPair> pairs = {{"a", "b"}, {"a", "c"}, {"a", "a"}};
  auto sims = provider->Similarities(pairs);
  EXPECT_NEAR(sims[0], 0.0, 1e-12);
  EXPECT_NEAR(sims[1], -1.0, 1e-12);
  EXPECT_EQ(sims[2], 1.0);
  // Each distinct text is embedded once.
  EXPECT_EQ(stub.requests().back().body["texts"].size(), 3u);
}

TEST(RemoteProviderTest, HttpErrorsAndTimeouts) {
  testing::StubService stub;
  auto provider = Connect(stub, 200);
  std::vector<TextPair> pairs = {{"a", "x"}};
  stub.SetStatus(500);
  EXPECT_THROW(provider->Entail(pairs), ProviderError);
  stub.SetStatus(200);
  stub.SetDelay(std::chrono::milliseconds(800));
  EXPECT_THROW(provider->Entail(pairs), ProviderError);
}

TEST(RemoteProviderTest, UnreachableIsProviderError) {
  HttpOptions options{"http://127.0.0.1:" + std::to_string(testing::UnusedPort()),
                      std::chrono::milliseconds(500)};
  RemoteProvider provider(std::make_unique<HttpTransport>(options));
  EXPECT_THROW(provider.Health(), ProviderError);
}

TEST(CachingTransportTest, RecordsAndReplays) {
  auto dir = std::filesystem::temp_directory_path() / "countqa_cache_test";
  std::filesystem::remove_all(dir);
  std::vector<TextPair> pairs = {{"a b", "a"}};
  {
    testing::StubService stub;
    HttpOptions options{stub.endpoint()};
    RemoteProvider provider(std::make_unique<CachingTransport>(
        std::make_unique<HttpTransport>(options), dir.string(), stub.endpoint()));
    EXPECT_EQ(provider.Entail(pairs), std::vector<double>{0.5});
    EXPECT_EQ(provider.Entail(pairs), std::vector<double>{0.5});
    EXPECT_EQ(stub.CountRequests("/v1/entail"), 1u);
  }
  // Replay only: hits succeed, misses are provider errors.
  RemoteProvider replay(std::make_unique<CachingTransport>(nullptr, dir.string(),
                                                           "http://127.0.0.1:1"));
  EXPECT_THROW(replay.Entail(pairs), ProviderError);  // keyed by endpoint
  std::filesystem::remove_all(dir);
}

TEST(CachingTransportTest, ReplayWithSameEndpoint) {
  auto dir = std::filesystem::temp_directory_path() / "countqa_cache_test2";
  std::filesystem::remove_all(dir);
  std::vector<TextPair> pairs = {{"a b", "a"}};
  std::string endpoint;
  {
    testing::StubService stub;
    endpoint = stub.endpoint();
    RemoteProvider provider(std::make_unique<CachingTransport>(
        std::make_unique<HttpTransport>(HttpOptions{endpoint}), dir.string(), endpoint));
    provider.Entail(pairs);
  }
  RemoteProvider replay(std::make_unique<CachingTransport>(nullptr, dir.string(), endpoint));
  EXPECT_EQ(replay.Entail(pairs), std::vector<double>{0.5});
  std::vector<TextPair> other = {{"c", "d"}};
  EXPECT_THROW(replay.Entail(other), ProviderError);
  std::filesystem::remove_all(dir);
}

class FailingProvider : public OfflineProvider {
 public:
  std::vector<double> Entail(std::span<const TextPair>) override { throw ProviderError("down"); }
};

TEST(DegradingProviderTest, FallsBackOnProviderError) {
  class Fixed : public OfflineProvider {
   public:
    std::vector<double> Entail(std::span<const TextPair> pairs) override {
      return std::vector<double>(pairs.size(), 0.25);
    }
  };
  DegradingProvider p(std::make_shared<FailingProvider>(), std::make_shared<Fixed>());
  std::vector<TextPair> pairs = {{"a", "b"}};
  EXPECT_EQ(p.Entail(pairs), std::vector<double>{0.25});
  EXPECT_DOUBLE_EQ(p.Similarity("abc", "abc"), 1.0);
}

}  // namespace
}  // namespace countqa
