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

#include "egoqa/dataset_stats.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "egoqa/error.hpp"

namespace egoqa {

namespace {

FrequencyTable SortedTable(const std::map<std::string, std::size_t>& counts, std::size_t limit) {
  FrequencyTable table(counts.begin(), counts.end());
  std::stable_sort(table.begin(), table.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  if (table.size() > limit) table.resize(limit);
  return table;
}

std::size_t Mass(const Histogram& h) {
  std::size_t n = 0;
  for (const auto& [bin, count] : h) n += count;
  return n;
}

double HistogramMean(const Histogram& h) {
  const std::size_t n = Mass(h);
  if (n == 0) return 0.0;
  double sum = 0.0;
  for (const auto& [bin, count] : h) sum += static_cast<double>(bin) * static_cast<double>(count);
  return sum / static_cast<double>(n);
}

nlohmann::json HistogramJson(const Histogram& h) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& [bin, count] : h) j.push_back({bin, count});
  return j;
}

nlohmann::json TableJson(const FrequencyTable& t) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& [key, count] : t) j.push_back({key, count});
  return j;
}

}  // namespace

std::string QuestionPrefix(std::string_view question, std::size_t words) {
  std::string out;
  std::size_t taken = 0;
  std::size_t i = 0;
  while (i < question.size() && taken < words) {
    while (i < question.size() && std::isspace(static_cast<unsigned char>(question[i]))) ++i;
    if (i == question.size()) break;
    if (!out.empty()) out.push_back(' ');
    while (i < question.size() && !std::isspace(static_cast<unsigned char>(question[i]))) {
      out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(question[i]))));
      ++i;
    }
    ++taken;
  }
  return out;
}

void DatasetStatsBuilder::AddSample(const QASample& sample) {
  clips_.insert(sample.clip_uid);
  ++samples_;
  const std::size_t qw = WordCount(sample.question);
  const std::size_t aw = WordCount(sample.answer);
  ++question_[static_cast<long long>(qw)];
  ++answer_[static_cast<long long>(aw)];
  question_sum_ += static_cast<double>(qw);
  answer_sum_ += static_cast<double>(aw);
  const double len = sample.window.length();
  ++duration_[static_cast<long long>(std::floor(len))];
  window_sum_ += len;
  ++prefixes_[QuestionPrefix(sample.question, kPrefixWords)];
  ++answers_[NormalizeAnswer(sample.answer)];
  if (sample.wrong_answers) {
    ++with_distractors_;
    for (const std::string& w : *sample.wrong_answers) {
      const std::size_t ww = WordCount(w);
      ++distractor_[static_cast<long long>(ww)];
      distractor_sum_ += static_cast<double>(ww);
      ++distractors_[NormalizeAnswer(w)];
    }
  }
}

void DatasetStatsBuilder::AddTrack(const NarrationTrack& track) {
  saw_tracks_ = true;
  narrations_ += track.narrations.size();
  narrated_seconds_ += track.duration_s;
}

DatasetStats DatasetStatsBuilder::Finish() const {
  if (samples_ == 0) throw Error(ErrorCode::kEmptyCorpus, "dataset has no samples");
  DatasetStats s;
  s.clip_count = clips_.size();
  s.sample_count = samples_;
  s.samples_with_distractors = with_distractors_;
  if (saw_tracks_ && narrated_seconds_ > 0.0) {
    s.narration_density_per_min = static_cast<double>(narrations_) / (narrated_seconds_ / 60.0);
  }
  s.window_duration_s = duration_;
  s.question_words = question_;
  s.answer_words = answer_;
  s.distractor_words = distractor_;
  const double n = static_cast<double>(samples_);
  s.mean_question_words = question_sum_ / n;
  s.mean_answer_words = answer_sum_ / n;
  s.mean_window_s = window_sum_ / n;
  s.mean_distractor_words =
      with_distractors_ ? distractor_sum_ / (3.0 * static_cast<double>(with_distractors_)) : 0.0;

  if (Mass(duration_) != samples_ || Mass(question_) != samples_ || Mass(answer_) != samples_ ||
      Mass(distractor_) != 3 * with_distractors_) {
    throw Error(ErrorCode::kInvariantBreach, "histogram mass differs from sample count");
  }
  auto close = [](double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b)); };
  if (!close(HistogramMean(question_), s.mean_question_words) ||
      !close(HistogramMean(answer_), s.mean_answer_words) ||
      !close(HistogramMean(distractor_), s.mean_distractor_words)) {
    throw Error(ErrorCode::kInvariantBreach, "means disagree with histograms");
  }

  s.question_prefixes = SortedTable(prefixes_, prefixes_.size());
  s.top_answers = SortedTable(answers_, kTopAnswers);
  s.top_distractors = SortedTable(distractors_, kTopAnswers);
  return s;
}

nlohmann::json DatasetStats::ToJson() const {
  nlohmann::json j = {
      {"clip_count", clip_count},
      {"sample_count", sample_count},
      {"samples_with_distractors", samples_with_distractors},
      {"mean_question_words", mean_question_words},
      {"mean_answer_words", mean_answer_words},
      {"mean_distractor_words", mean_distractor_words},
      {"mean_window_s", mean_window_s},
      {"histograms",
       {{"window_duration_s", HistogramJson(window_duration_s)},
        {"question_words", HistogramJson(question_words)},
        {"answer_words", HistogramJson(answer_words)},
        {"distractor_words", HistogramJson(distractor_words)}}},
      {"question_prefixes", TableJson(question_prefixes)},
      {"top_answers", TableJson(top_answers)},
      {"top_distractors", TableJson(top_distractors)},
  };
  j["narration_density_per_min"] =
      narration_density_per_min ? nlohmann::json(*narration_density_per_min) : nlohmann::json();
  return j;
}

std::string HistogramTsv(const Histogram& histogram, std::string_view bin_header) {
  std::ostringstream out;
  out << bin_header << "\tcount\n";
  for (const auto& [bin, count] : histogram) out << bin << '\t' << count << '\n';
  return out.str();
}

std::string FrequencyTsv(const FrequencyTable& table, std::string_view key_header) {
  std::ostringstream out;
  out << key_header << "\tcount\n";
  for (const auto& [key, count] : table) out << key << '\t' << count << '\n';
  return out.str();
}

}  // namespace egoqa
