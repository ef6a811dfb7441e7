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

#include "egoqa/blind_filter.hpp"

#include <algorithm>

#include "egoqa/error.hpp"
#include "egoqa/qa_synthesis.hpp"
#include "egoqa/util.hpp"

namespace egoqa {

FrequencyPriorAnswerer::FrequencyPriorAnswerer(std::span<const QASample> training) {
  for (const QASample& s : training) ++counts_[NormalizeAnswer(s.answer)];
}

std::string FrequencyPriorAnswerer::Answer(const std::string& question,
                                           std::span<const std::string> choices,
                                           std::uint64_t seed) const {
  if (choices.empty()) return {};
  std::vector<std::size_t> best;
  std::size_t best_count = 0;
  for (std::size_t i = 0; i < choices.size(); ++i) {
    auto it = counts_.find(NormalizeAnswer(choices[i]));
    const std::size_t c = it == counts_.end() ? 0 : it->second;
    if (best.empty() || c > best_count) {
      best = {i};
      best_count = c;
    } else if (c == best_count) {
      best.push_back(i);
    }
  }
  Rng rng(seed ^ Fnv1a64(question));
  return choices[best[rng.Below(best.size())]];
}

std::string UniformRandomAnswerer::Answer(const std::string& question,
                                          std::span<const std::string> choices,
                                          std::uint64_t seed) const {
  if (choices.empty()) return {};
  Rng rng(seed ^ Fnv1a64(question));
  return choices[rng.Below(choices.size())];
}

ScriptedAnswerer::ScriptedAnswerer(const nlohmann::json& script) {
  if (!script.is_object()) throw Error(ErrorCode::kSchemaMismatch, "answer script must be an object");
  for (const auto& [question, value] : script.items()) {
    Entry entry;
    if (value.is_string()) {
      entry.fallback = value.get<std::string>();
    } else if (value.is_object()) {
      for (const auto& [key, answer] : value.items()) {
        if (key == "default") {
          entry.fallback = answer.get<std::string>();
        } else {
          entry.by_seed[std::stoull(key)] = answer.get<std::string>();
        }
      }
    } else {
      throw Error(ErrorCode::kSchemaMismatch, "bad script entry for: " + question);
    }
    script_[question] = std::move(entry);
  }
}

std::string ScriptedAnswerer::Answer(const std::string& question,
                                     std::span<const std::string> choices,
                                     std::uint64_t seed) const {
  auto it = script_.find(question);
  if (it == script_.end()) return choices.empty() ? std::string() : choices.front();
  auto s = it->second.by_seed.find(seed);
  return s == it->second.by_seed.end() ? it->second.fallback : s->second;
}

nlohmann::json FilterReport::ToJson() const {
  nlohmann::json rows_json = nlohmann::json::array();
  for (const FilterRow& r : rows) {
    rows_json.push_back({{"clip_uid", r.clip_uid},
                         {"query_id", r.query_id},
                         {"question", r.question},
                         {"correct", r.correct},
                         {"removed", r.removed}});
  }
  return {{"total", total},
          {"removed", removed},
          {"kept", kept},
          {"reshuffle_per_trial", reshuffle_per_trial},
          {"seeds", seeds},
          {"rows", std::move(rows_json)}};
}

FilterResult FilterTestSet(std::span<const QASample> samples, const BlindAnswerer& answerer,
                           std::span<const std::uint64_t> seeds, int parallelism,
                           bool reshuffle_per_trial) {
  if (seeds.size() != kBlindTrials) {
    throw Error(ErrorCode::kInvalidArgument,
                "expected 10 seeds, got " + std::to_string(seeds.size()));
  }
  for (const QASample& s : samples) {
    if (!s.wrong_answers) throw Error(ErrorCode::kMissingDistractors, s.question);
  }

  FilterResult result;
  FilterReport& report = result.report;
  report.total = samples.size();
  report.reshuffle_per_trial = reshuffle_per_trial;
  report.seeds.assign(seeds.begin(), seeds.end());
  report.rows.resize(samples.size());

  ParallelFor(samples.size(), parallelism, [&](std::size_t i) {
    const QASample& s = samples[i];
    FilterRow& row = report.rows[i];
    row.clip_uid = s.clip_uid;
    row.query_id = s.query_id;
    row.question = s.question;
    const std::string correct = NormalizeAnswer(s.answer);
    for (std::size_t t = 0; t < kBlindTrials; ++t) {
      const auto choices = ShuffledChoices(s, reshuffle_per_trial ? seeds[t] : seeds[0]);
      row.correct[t] = NormalizeAnswer(answerer.Answer(s.question, choices, seeds[t])) == correct;
    }
    row.removed = std::all_of(row.correct.begin(), row.correct.end(), [](bool b) { return b; });
  });

  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (report.rows[i].removed) {
      ++report.removed;
    } else {
      result.kept.push_back(samples[i]);
    }
  }
  report.kept = result.kept.size();
  return result;
}

}  // namespace egoqa
