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
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace egoqa {

/// Absolute tolerance for all time comparisons, in seconds.
inline constexpr double kTimeTolerance = 1e-6;

struct Narration {
  std::string text;
  double t_s = 0.0;
};

/// One clip's narrations in chronological order.
struct NarrationTrack {
  std::string clip_uid;
  double duration_s = 0.0;
  std::vector<Narration> narrations;
};

/// Closed interval [start_s, end_s] in clip seconds. Zero length is valid.
struct TemporalWindow {
  double start_s = 0.0;
  double end_s = 0.0;

  double length() const { return end_s - start_s; }
  double center() const { return 0.5 * (start_s + end_s); }

  friend bool operator==(const TemporalWindow&, const TemporalWindow&) = default;
};

enum class Split { kTrain, kVal, kTest };
enum class Source { kManual, kSynthesized };

std::string_view SplitName(Split split);
std::string_view SourceName(Source source);
std::optional<Split> ParseSplit(std::string_view name);
std::optional<Source> ParseSource(std::string_view name);

using Distractors = std::array<std::string, 3>;

struct QASample {
  std::string clip_uid;
  /// Empty when the dataset file does not carry explicit ids; readers then
  /// assign the row ordinal.
  std::string query_id;
  std::string question;
  std::string answer;
  TemporalWindow window;
  std::optional<Distractors> wrong_answers;
  Split split = Split::kTrain;
  Source source = Source::kManual;

  friend bool operator==(const QASample&, const QASample&) = default;
};

struct ScoredWindow {
  TemporalWindow window;
  double score = 0.0;

  friend bool operator==(const ScoredWindow&, const ScoredWindow&) = default;
};

/// Model output for one query: windows ranked by descending score.
struct PredictionSet {
  std::string clip_uid;
  std::string query_id;
  std::vector<ScoredWindow> windows;
  std::string answer_text;

  friend bool operator==(const PredictionSet&, const PredictionSet&) = default;
};

struct MetricValue {
  double value = 0.0;
  std::optional<double> dispersion;
};

struct RunMetadata {
  std::vector<std::uint64_t> seeds;
  std::string dataset_id;
  std::string timestamp;
  std::map<std::string, std::string> tags;
};

struct EvalReport {
  RunMetadata metadata;
  std::map<std::string, MetricValue> metrics;
};

struct Violation {
  std::string code;
  std::string message;
};

struct ValidationResult {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool Has(std::string_view code) const;
};

// Violation codes.
inline constexpr std::string_view kEmptyClipUid = "empty_clip_uid";
inline constexpr std::string_view kBadDuration = "bad_duration";
inline constexpr std::string_view kNonFinite = "non_finite";
inline constexpr std::string_view kNonMonotonic = "non_monotonic_timestamps";
inline constexpr std::string_view kTimestampOutOfRange = "timestamp_out_of_range";
inline constexpr std::string_view kEmptyText = "empty_text";
inline constexpr std::string_view kBadWindow = "bad_window";
inline constexpr std::string_view kWindowPastEnd = "window_past_clip_end";
inline constexpr std::string_view kEmptyQuestion = "empty_question";
inline constexpr std::string_view kEmptyAnswer = "empty_answer";
inline constexpr std::string_view kDuplicateChoice = "duplicate_choice";
inline constexpr std::string_view kUnsortedScores = "unsorted_scores";
inline constexpr std::string_view kScoreOutOfRange = "score_out_of_range";

/// Reports every invariant violation of a track; never throws.
ValidationResult ValidateTrack(const NarrationTrack& track);

ValidationResult ValidateWindow(const TemporalWindow& window);

/// `clip_duration_s` enables the end-of-clip check when the clip is known.
ValidationResult ValidateSample(const QASample& sample,
                                std::optional<double> clip_duration_s = std::nullopt);

ValidationResult ValidatePredictionSet(const PredictionSet& predictions);

/// Canonical answer form used by every string comparison in the toolkit:
/// lowercase, trimmed, inner whitespace collapsed, trailing .,!?;: removed.
std::string NormalizeAnswer(std::string_view text);

/// Whitespace-delimited token count.
std::size_t WordCount(std::string_view text);

}  // namespace egoqa
