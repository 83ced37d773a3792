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

#include <random>

#include "gtest/gtest.h"

#include "countqa/errors.h"

namespace countqa {
namespace {

InstanceCandidate Instance(const std::string &mention, const std::string &pid, std::uint32_t rank,
                           double confidence, std::size_t position) {
  InstanceCandidate c;
  c.surface = mention;
  c.key = NormalizeMentionKey(mention);
  Occurrence o;
  o.span = {pid, 0, 100};
  o.passage_rank = rank;
  o.span_confidence = confidence;
  o.mention = mention;
  o.position = position;
  o.parent_sentence = mention + " is here.";
  c.occurrences.push_back(o);
  c.summed_confidence = confidence;
  return c;
}

std::vector<std::string> Keys(const RankedInstances &r) {
  std::vector<std::string> out;
  for (const auto &i : r.items) out.push_back(i.candidate.key);
  return out;
}

// Entailment from a fixed per-hypothesis table.
class FixedNli : public OfflineProvider {
 public:
  std::map<std::string, double> by_hypothesis;
  std::vector<double> Entail(std::span<const TextPair> pairs) override {
    std::vector<double> out;
    for (const auto &p : pairs) out.push_back(by_hypothesis[p.second]);
    return out;
  }
};

TEST(RewriteQueryTest, Examples) {
  EXPECT_EQ(RewriteQuery("how many songs did John Lennon write?"),
            "which songs did John Lennon write?");
  EXPECT_EQ(RewriteQuery("How many languages are spoken in Indonesia"),
            "Which languages are spoken in Indonesia");
  EXPECT_EQ(RewriteQuery("HOW MANY moons"), "which moons");
  EXPECT_EQ(RewriteQuery("number of moons of Jupiter"), "which number of moons of Jupiter");
  EXPECT_EQ(RewriteQuery("which moons orbit Jupiter"), "which moons orbit Jupiter");
}

TEST(RewriteQueryTest, Idempotent) {
  for (const char *q : {"how many songs did John Lennon write?", "number of lakes in Finland",
                        "How many children did Marie Curie have"}) {
    std::string once = RewriteQuery(q);
    EXPECT_EQ(RewriteQuery(once), once) << q;
  }
}

TEST(AnswerTypeTest, Examples) {
  EXPECT_EQ(AnswerType("how many songs did John Lennon write?"), "songs");
  EXPECT_EQ(AnswerType("How many official languages does India have"), "official languages");
  EXPECT_EQ(AnswerType("number of lakes"), "");
}

TEST(MergeInstancesTest, GroupsByKeyAndKeepsLongestSurface) {
  std::vector<InstanceCandidate> raw = {Instance("Beatles", "p2", 2, 0.5, 10),
                                        Instance("The Beatles,", "p1", 1, 0.25, 40),
                                        Instance("Yoko Ono", "p1", 1, 0.25, 5)};
  auto merged = MergeInstances(raw);
  ASSERT_EQ(merged.size(), 2u);
  EXPECT_EQ(merged[0].key, "beatles");
  EXPECT_EQ(merged[0].surface, "The Beatles,");
  EXPECT_EQ(merged[0].frequency(), 2u);
  EXPECT_DOUBLE_EQ(merged[0].summed_confidence, 0.75);
  EXPECT_EQ(merged[0].occurrences[0].passage_rank, 1u);
  EXPECT_EQ(merged[1].key, "yoko ono");
}

TEST(RankInstancesTest, ContextFrequencyAndSummedConfidence) {
  std::vector<InstanceCandidate> raw = {
      Instance("Help", "p1", 1, 0.9, 0),     Instance("Imagine", "p2", 2, 0.2, 0),
      Instance("Imagine", "p3", 3, 0.2, 0),  Instance("Yesterday", "p4", 4, 0.3, 0),
      Instance("Yesterday", "p5", 5, 0.3, 0)};
  OfflineProvider nli;
  auto merged = MergeInstances(raw);
  auto freq = RankInstances(merged, InstanceRanking::kContextFrequency, "", nli);
  // Frequency ties fall back to summed confidence.
  EXPECT_EQ(Keys(freq), (std::vector<std::string>{"yesterday", "imagine", "help"}));
  auto conf = RankInstances(merged, InstanceRanking::kSummedConfidence, "", nli);
  EXPECT_EQ(Keys(conf), (std::vector<std::string>{"help", "yesterday", "imagine"}));
}

TEST(RankInstancesTest, NoConsolidationUsesTopPassageOrder) {
  std::vector<InstanceCandidate> raw = {Instance("Help", "p1", 1, 0.9, 50),
                                        Instance("Imagine", "p1", 1, 0.9, 10),
                                        Instance("Yesterday", "p2", 2, 0.95, 3),
                                        Instance("Girl", "p2", 2, 0.95, 1)};
  OfflineProvider nli;
  auto ranked = RankInstances(MergeInstances(raw), InstanceRanking::kNoConsolidation, "", nli);
  EXPECT_EQ(Keys(ranked), (std::vector<std::string>{"girl", "yesterday"}));
  EXPECT_EQ(ranked.items[0].score, 1.0);
}

TEST(RankInstancesTest, TypeCompatibility) {
  std::vector<InstanceCandidate> raw = {Instance("Liverpool", "p1", 1, 0.9, 0),
                                        Instance("Help", "p1", 1, 0.1, 20)};
  FixedNli nli;
  nli.by_hypothesis["Liverpool is a songs"] = 0.1;
  nli.by_hypothesis["Help is a songs"] = 0.8;
  auto ranked = RankInstances(MergeInstances(raw), InstanceRanking::kTypeCompatibility, "songs", nli);
  EXPECT_EQ(Keys(ranked), (std::vector<std::string>{"help", "liverpool"}));
  ASSERT_TRUE(ranked.items[0].candidate.type_score);
  EXPECT_DOUBLE_EQ(*ranked.items[0].candidate.type_score, 0.8);
  EXPECT_THROW(RankInstances(MergeInstances(raw), InstanceRanking::kTypeCompatibility, " ", nli),
               InputError);
}

TEST(RankInstancesTest, EmptyInput) {
  OfflineProvider nli;
  for (auto s : {InstanceRanking::kNoConsolidation, InstanceRanking::kContextFrequency,
                 InstanceRanking::kSummedConfidence, InstanceRanking::kTypeCompatibility}) {
    EXPECT_TRUE(RankInstances({}, s, "songs", nli).items.empty());
  }
}

TEST(RankInstancesTest, ScoresAreNonIncreasing) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> conf(0.0, 1.0);
  std::uniform_int_distribution<int> pick(0, 7);
  OfflineProvider nli;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<InstanceCandidate> raw;
    for (int i = 0; i < 12; ++i) {
      int e = pick(rng);
      raw.push_back(Instance("Entity" + std::string(1, static_cast<char>('A' + e)),
                             "p" + std::to_string(i), static_cast<std::uint32_t>(i + 1), conf(rng),
                             0));
    }
    for (auto s : {InstanceRanking::kContextFrequency, InstanceRanking::kSummedConfidence}) {
      auto ranked = RankInstances(MergeInstances(raw), s, "", nli);
      for (std::size_t i = 1; i < ranked.items.size(); ++i) {
        EXPECT_GE(ranked.items[i - 1].score, ranked.items[i].score);
      }
    }
  }
}

TEST(ExtractInstancesTest, OfflineNer) {
  AnswerSpan span;
  span.passage_id = "p1";
  span.passage_rank = 1;
  span.start = 100;
  span.end = 150;
  span.text = "He wrote Imagine with Yoko Ono in New York.";
  span.confidence = 0.5;
  OfflineProvider ner;
  auto instances = ExtractInstances(std::vector<AnswerSpan>{span}, ner);
  std::vector<std::string> keys;
  for (const auto &c : instances) keys.push_back(c.key);
  EXPECT_EQ(keys, (std::vector<std::string>{"imagine", "new york", "yoko ono"}));
  EXPECT_EQ(instances[0].occurrences[0].position, 109u);
}

TEST(InstanceRankingTest, Names) {
  for (auto s : {InstanceRanking::kNoConsolidation, InstanceRanking::kContextFrequency,
                 InstanceRanking::kSummedConfidence, InstanceRanking::kTypeCompatibility}) {
    EXPECT_EQ(ParseInstanceRanking(InstanceRankingName(s)), s);
  }
  EXPECT_FALSE(ParseInstanceRanking("bm25"));
}

}  // namespace
}  // namespace countqa
