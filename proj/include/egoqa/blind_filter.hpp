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

#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "egoqa/core_model.hpp"

namespace egoqa {

inline constexpr std::size_t kBlindTrials = 10;

/// Text-only answerer: sees the question and the shuffled choices, never the
/// video. Same inputs and seed must give the same answer; implementations are
/// called concurrently.
class BlindAnswerer {
 public:
  virtual ~BlindAnswerer() = default;
  virtual std::string Answer(const std::string& question, std::span<const std::string> choices,
                             std::uint64_t seed) const = 0;
};

/// Picks the choice whose normalized form was the most frequent correct
/// answer in a training set. Ties (including unseen choices) are broken by a
/// seeded draw.
class FrequencyPriorAnswerer : public BlindAnswerer {
 public:
  explicit FrequencyPriorAnswerer(std::span<const QASample> training);
  explicit FrequencyPriorAnswerer(std::map<std::string, std::size_t> counts)
      : counts_(std::move(counts)) {}

  std::string Answer(const std::string& question, std::span<const std::string> choices,
                     std::uint64_t seed) const override;

 private:
  std::map<std::string, std::size_t> counts_;
};

/// Uniform seeded pick among the choices.
class UniformRandomAnswerer : public BlindAnswerer {
 public:
  std::string Answer(const std::string& question, std::span<const std::string> choices,
                     std::uint64_t seed) const override;
};

/// Answers from a script keyed by question:
///
///   {"<question>": "answer"}                              every trial
///   {"<question>": {"default": "answer", "<seed>": "x"}}  per-seed override
///
/// Unscripted questions get the first choice.
class ScriptedAnswerer : public BlindAnswerer {
 public:
  explicit ScriptedAnswerer(const nlohmann::json& script);

  std::string Answer(const std::string& question, std::span<const std::string> choices,
                     std::uint64_t seed) const override;

 private:
  struct Entry {
    std::string fallback;
    std::map<std::uint64_t, std::string> by_seed;
  };
  std::map<std::string, Entry> script_;
};

struct FilterRow {
  std::string clip_uid;
  std::string query_id;
  std::string question;
  std::array<bool, kBlindTrials> correct{};
  bool removed = false;
};

struct FilterReport {
  std::size_t total = 0;
  std::size_t removed = 0;
  std::size_t kept = 0;
  bool reshuffle_per_trial = true;
  std::vector<std::uint64_t> seeds;
  std::vector<FilterRow> rows;

  nlohmann::json ToJson() const;
};

struct FilterResult {
  std::vector<QASample> kept;
  FilterReport report;
};

/// Drops every sample that `answerer` gets right in all ten seeded trials.
/// Choices are reshuffled with each trial's seed unless
/// `reshuffle_per_trial` is false, in which case the first seed's order is
/// reused. Throws Error(kMissingDistractors) or Error(kInvalidArgument) when
/// the seed count is not ten.
FilterResult FilterTestSet(std::span<const QASample> samples, const BlindAnswerer& answerer,
                           std::span<const std::uint64_t> seeds, int parallelism = 1,
                           bool reshuffle_per_trial = true);

}  // namespace egoqa
