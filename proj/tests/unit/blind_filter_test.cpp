// Copyright 2026 The egoqa Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "egoqa/blind_filter.hpp"
#include "egoqa/error.hpp"
#include "egoqa/qa_synthesis.hpp"
#include "test_support.hpp"

namespace egoqa {
namespace {

const std::vector<std::uint64_t> kSeeds = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};

QASample Sample(int i, std::string answer = "the cup") {
  QASample s{"clip" + std::to_string(i % 7), "q" + std::to_string(i),
             "What did I pick up " + std::to_string(i) + "?", std::move(answer), {0, 1}};
  s.wrong_answers = Distractors{"a plate", "a bowl", "a fork"};
  return s;
}

class OracleAnswerer : public BlindAnswerer {
 public:
  explicit OracleAnswerer(std::map<std::string, std::string> key) : key_(std::move(key)) {}
  std::string Answer(const std::string& q, std::span<const std::string>, std::uint64_t) const override {
    return key_.at(q);
  }

 private:
  std::map<std::string, std::string> key_;
};

TEST(FilterTestSetTest, AlwaysCorrectRemovesEverything) {
  std::vector<QASample> samples;
  std::map<std::string, std::string> key;
  for (int i = 0; i < 20; ++i) {
    samples.push_back(Sample(i));
    key[samples.back().question] = "The cup.";
  }
  const FilterResult r = FilterTestSet(samples, OracleAnswerer(key), kSeeds);
  EXPECT_EQ(r.report.removed, 20u);
  EXPECT_TRUE(r.kept.empty());
  EXPECT_EQ(r.report.kept, 0u);
}

TEST(FilterTestSetTest, UniformRandomRarelyRemoves) {
  std::vector<QASample> samples;
  for (int i = 0; i < 10000; ++i) samples.push_back(Sample(i));
  const FilterResult r = FilterTestSet(samples, UniformRandomAnswerer(), kSeeds, 4);
  EXPECT_LE(r.report.removed, 1u);
  EXPECT_EQ(r.report.total, 10000u);
  EXPECT_EQ(r.report.kept + r.report.removed, r.report.total);
  // Per-trial hit rate should sit near 1/4.
  std::size_t hits = 0;
  for (const auto& row : r.report.rows) hits += std::count(row.correct.begin(), row.correct.end(), true);
  EXPECT_NEAR(hits / 100000.0, 0.25, 0.01);
}

TEST(FilterTestSetTest, ScriptedAnswerer) {
  const QASample s1 = Sample(1), s2 = Sample(2), s3 = Sample(3);
  const nlohmann::json script = {
      {s1.question, "the cup"},
      {s2.question, {{"default", "the cup"}, {"6", "a plate"}}},
  };
  const std::vector<QASample> samples = {s1, s2, s3};
  const FilterResult r = FilterTestSet(samples, ScriptedAnswerer(script), kSeeds);
  ASSERT_EQ(r.report.rows.size(), 3u);
  EXPECT_TRUE(r.report.rows[0].removed);
  EXPECT_FALSE(r.report.rows[1].removed);
  EXPECT_FALSE(r.report.rows[1].correct[6]);
  EXPECT_TRUE(r.report.rows[1].correct[5]);
  ASSERT_EQ(r.kept.size(), 2u);
  EXPECT_EQ(r.kept[0].question, s2.question);
  EXPECT_EQ(r.kept[1].question, s3.question);
}

TEST(FilterTestSetTest, PriorPrefersFrequentTrainingAnswers) {
  std::vector<QASample> train;
  for (int i = 0; i < 5; ++i) train.push_back(Sample(i, "Yes"));
  train.push_back(Sample(9, "a plate"));
  const FrequencyPriorAnswerer prior(train);
  const std::vector<std::string> choices = {"no", "a plate", "yes.", "maybe"};
  for (std::uint64_t seed : kSeeds) EXPECT_EQ(prior.Answer("Did I?", choices, seed), "yes.");

  QASample frequent = Sample(20, "yes");
  frequent.wrong_answers = Distractors{"no", "a plate", "maybe"};
  QASample rare = Sample(21, "never");
  rare.wrong_answers = Distractors{"no", "yes", "maybe"};
  const std::vector<QASample> test = {frequent, rare};
  const FilterResult r = FilterTestSet(test, prior, kSeeds);
  EXPECT_TRUE(r.report.rows[0].removed);
  EXPECT_FALSE(r.report.rows[1].removed);
}

TEST(FilterTestSetTest, PriorTieBreakIsSeeded) {
  const FrequencyPriorAnswerer prior(std::map<std::string, std::size_t>{});
  const std::vector<std::string> choices = {"a", "b", "c", "d"};
  std::set<std::string> picked;
  for (std::uint64_t seed = 0; seed < 64; ++seed) {
    const std::string a = prior.Answer("Q?", choices, seed);
    EXPECT_EQ(a, prior.Answer("Q?", choices, seed));
    picked.insert(a);
  }
  EXPECT_EQ(picked.size(), 4u);
}

TEST(FilterTestSetTest, DeterministicAcrossParallelism) {
  std::vector<QASample> samples;
  for (int i = 0; i < 300; ++i) samples.push_back(Sample(i));
  const auto a = FilterTestSet(samples, UniformRandomAnswerer(), kSeeds, 1).report.ToJson();
  const auto b = FilterTestSet(samples, UniformRandomAnswerer(), kSeeds, 8).report.ToJson();
  EXPECT_EQ(a.dump(), b.dump());
}

TEST(FilterTestSetTest, FixedOrderWhenNotReshuffling) {
  std::vector<QASample> samples = {Sample(1)};
  class FirstChoice : public BlindAnswerer {
   public:
    std::string Answer(const std::string&, std::span<const std::string> c, std::uint64_t) const override {
      return c.front();
    }
  };
  const auto fixed = FilterTestSet(samples, FirstChoice(), kSeeds, 1, false);
  const auto& row = fixed.report.rows[0];
  EXPECT_TRUE(std::all_of(row.correct.begin(), row.correct.end(), [&](bool b) { return b == row.correct[0]; }));
  EXPECT_FALSE(fixed.report.reshuffle_per_trial);
}

TEST(FilterTestSetTest, Errors) {
  std::vector<QASample> samples = {Sample(1)};
  samples[0].wrong_answers.reset();
  try {
    FilterTestSet(samples, UniformRandomAnswerer(), kSeeds);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingDistractors);
  }
  const std::vector<std::uint64_t> nine = {0, 1, 2, 3, 4, 5, 6, 7, 8};
  EXPECT_THROW(FilterTestSet(std::vector<QASample>{Sample(1)}, UniformRandomAnswerer(), nine), Error);
  EXPECT_THROW(ScriptedAnswerer(nlohmann::json::array()), Error);
  EXPECT_THROW(ScriptedAnswerer(nlohmann::json{{"q", 3}}), Error);
}

}  // namespace
}  // namespace egoqa
