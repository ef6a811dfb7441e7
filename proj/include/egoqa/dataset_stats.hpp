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

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "egoqa/core_model.hpp"

namespace egoqa {

using Histogram = std::map<long long, std::size_t>;
using FrequencyTable = std::vector<std::pair<std::string, std::size_t>>;

struct DatasetStats {
  std::size_t clip_count = 0;
  std::size_t sample_count = 0;
  std::size_t samples_with_distractors = 0;
  /// Narration sentences per minute; present when narrations were supplied.
  std::optional<double> narration_density_per_min;

  Histogram window_duration_s;  ///< 1 s bins keyed by floor(length)
  Histogram question_words;
  Histogram answer_words;
  Histogram distractor_words;  ///< mass = 3 * samples_with_distractors

  double mean_question_words = 0.0;
  double mean_answer_words = 0.0;
  double mean_distractor_words = 0.0;
  double mean_window_s = 0.0;

  FrequencyTable question_prefixes;  ///< first four words, every prefix
  FrequencyTable top_answers;        ///< 30 most frequent correct answers
  FrequencyTable top_distractors;    ///< 30 most frequent wrong answers

  nlohmann::json ToJson() const;
};

/// Streaming builder; memory grows with distinct clips, prefixes and answers,
/// not with the number of samples.
class DatasetStatsBuilder {
 public:
  static constexpr std::size_t kTopAnswers = 30;
  static constexpr std::size_t kPrefixWords = 4;

  void AddSample(const QASample& sample);
  void AddTrack(const NarrationTrack& track);

  /// Throws Error(kEmptyCorpus) with no samples and Error(kInvariantBreach)
  /// if histogram mass or means disagree with the running totals.
  DatasetStats Finish() const;

 private:
  std::set<std::string> clips_;
  std::size_t samples_ = 0;
  std::size_t with_distractors_ = 0;
  std::size_t narrations_ = 0;
  double narrated_seconds_ = 0.0;
  bool saw_tracks_ = false;
  Histogram duration_, question_, answer_, distractor_;
  double question_sum_ = 0.0, answer_sum_ = 0.0, distractor_sum_ = 0.0, window_sum_ = 0.0;
  std::map<std::string, std::size_t> prefixes_, answers_, distractors_;
};

/// Lowercased first `words` whitespace tokens of the question.
std::string QuestionPrefix(std::string_view question, std::size_t words = 4);

/// Two-column TSV (bin, count) for external plotting.
std::string HistogramTsv(const Histogram& histogram, std::string_view bin_header);
std::string FrequencyTsv(const FrequencyTable& table, std::string_view key_header);

}  // namespace egoqa
