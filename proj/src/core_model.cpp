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

#include "egoqa/core_model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>

#include "egoqa/util.hpp"

namespace egoqa {

std::string Hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

std::string_view SplitName(Split split) {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kVal: return "val";
    case Split::kTest: return "test";
  }
  return "train";
}

std::string_view SourceName(Source source) {
  return source == Source::kManual ? "manual" : "synthesized";
}

std::optional<Split> ParseSplit(std::string_view name) {
  if (name == "train") return Split::kTrain;
  if (name == "val") return Split::kVal;
  if (name == "test") return Split::kTest;
  return std::nullopt;
}

std::optional<Source> ParseSource(std::string_view name) {
  if (name == "manual") return Source::kManual;
  if (name == "synthesized") return Source::kSynthesized;
  return std::nullopt;
}

bool ValidationResult::Has(std::string_view code) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.code == code; });
}

namespace {

bool IsBlank(std::string_view s) {
  return std::all_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isspace(c) != 0; });
}

void Add(ValidationResult& result, std::string_view code, std::string message) {
  result.violations.push_back({std::string(code), std::move(message)});
}

}  // namespace

ValidationResult ValidateTrack(const NarrationTrack& track) {
  ValidationResult result;
  if (IsBlank(track.clip_uid)) Add(result, kEmptyClipUid, "clip_uid is empty");
  if (!std::isfinite(track.duration_s)) {
    Add(result, kNonFinite, "duration_s is not finite");
  } else if (track.duration_s <= 0.0) {
    Add(result, kBadDuration, "duration_s must be > 0");
  }
  for (std::size_t i = 0; i < track.narrations.size(); ++i) {
    const Narration& n = track.narrations[i];
    const std::string where = "narration " + std::to_string(i);
    if (IsBlank(n.text)) Add(result, kEmptyText, where + ": text is empty");
    if (!std::isfinite(n.t_s)) {
      Add(result, kNonFinite, where + ": t_s is not finite");
      continue;
    }
    if (n.t_s < -kTimeTolerance ||
        (std::isfinite(track.duration_s) && n.t_s > track.duration_s + kTimeTolerance)) {
      Add(result, kTimestampOutOfRange, where + ": t_s outside [0, duration_s]");
    }
    if (i > 0 && std::isfinite(track.narrations[i - 1].t_s) &&
        n.t_s < track.narrations[i - 1].t_s - kTimeTolerance) {
      Add(result, kNonMonotonic, where + ": timestamp decreases");
    }
  }
  return result;
}

ValidationResult ValidateWindow(const TemporalWindow& window) {
  ValidationResult result;
  if (!std::isfinite(window.start_s) || !std::isfinite(window.end_s)) {
    Add(result, kNonFinite, "window endpoint is not finite");
  } else if (window.start_s < -kTimeTolerance ||
             window.end_s < window.start_s - kTimeTolerance) {
    Add(result, kBadWindow, "window must satisfy 0 <= start_s <= end_s");
  }
  return result;
}

ValidationResult ValidateSample(const QASample& sample,
                                std::optional<double> clip_duration_s) {
  ValidationResult result = ValidateWindow(sample.window);
  if (IsBlank(sample.clip_uid)) Add(result, kEmptyClipUid, "clip_uid is empty");
  if (IsBlank(sample.question)) Add(result, kEmptyQuestion, "question is empty");
  if (IsBlank(sample.answer)) Add(result, kEmptyAnswer, "answer is empty");
  if (clip_duration_s && std::isfinite(sample.window.end_s) &&
      sample.window.end_s > *clip_duration_s + kTimeTolerance) {
    Add(result, kWindowPastEnd, "window ends after the clip");
  }
  if (sample.wrong_answers) {
    std::vector<std::string> seen{NormalizeAnswer(sample.answer)};
    for (const std::string& wrong : *sample.wrong_answers) {
      std::string norm = NormalizeAnswer(wrong);
      if (norm.empty() || std::find(seen.begin(), seen.end(), norm) != seen.end()) {
        Add(result, kDuplicateChoice, "distractor '" + wrong + "' is empty or not distinct");
      }
      seen.push_back(std::move(norm));
    }
  }
  return result;
}

ValidationResult ValidatePredictionSet(const PredictionSet& predictions) {
  ValidationResult result;
  for (std::size_t i = 0; i < predictions.windows.size(); ++i) {
    const ScoredWindow& w = predictions.windows[i];
    for (Violation& v : ValidateWindow(w.window).violations) {
      v.message = "window " + std::to_string(i) + ": " + v.message;
      result.violations.push_back(std::move(v));
    }
    if (!(w.score >= 0.0 && w.score <= 1.0)) {
      Add(result, kScoreOutOfRange, "window " + std::to_string(i) + ": score outside [0,1]");
    }
    if (i > 0 && w.score > predictions.windows[i - 1].score) {
      Add(result, kUnsortedScores, "window " + std::to_string(i) + ": scores not descending");
    }
  }
  return result;
}

std::string NormalizeAnswer(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (unsigned char c : text) {
    if (std::isspace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(static_cast<char>(std::tolower(c)));
  }
  auto is_terminal = [](char c) {
    return c == '.' || c == ',' || c == '!' || c == '?' || c == ';' || c == ':' || c == ' ';
  };
  while (!out.empty() && is_terminal(out.back())) out.pop_back();
  return out;
}

std::size_t WordCount(std::string_view text) {
  std::size_t count = 0;
  bool in_word = false;
  for (unsigned char c : text) {
    const bool space = std::isspace(c) != 0;
    if (!space && !in_word) ++count;
    in_word = !space;
  }
  return count;
}

}  // namespace egoqa
