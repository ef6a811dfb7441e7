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

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "egoqa/core_model.hpp"
#include "egoqa/endpoint.hpp"
#include "egoqa/narration_chunker.hpp"

namespace egoqa {

// ---------------------------------------------------------------------------
// Prompt templates

enum class TemplateId { kOpenQALlama, kOpenQAChat, kCloseQALlama };

struct PromptTemplate {
  TemplateId id;
  std::string_view text;  ///< slots: <narrations>, <question>, <answer>

  bool is_openqa() const { return id != TemplateId::kCloseQALlama; }
};

const PromptTemplate& GetTemplate(TemplateId id);
std::string_view TemplateName(TemplateId id);
std::optional<TemplateId> ParseTemplateId(std::string_view name);

/// Fills <narrations> with the member sentences joined by single spaces.
/// Throws Error(kTemplateMismatch) for a CloseQA template, an empty chunk,
/// or a chunk that does not belong to `track`.
std::string RenderOpenQAPrompt(const NarrationChunk& chunk, const NarrationTrack& track,
                               const PromptTemplate& prompt);

/// Throws Error(kTemplateMismatch) for an OpenQA template or empty inputs.
std::string RenderCloseQAPrompt(std::string_view question, std::string_view answer,
                                const PromptTemplate& prompt);

// ---------------------------------------------------------------------------
// Completion parsing

enum class ParseStatus { kOk, kMalformed, kConstraintViolation };

std::string_view ParseStatusName(ParseStatus status);

struct OpenQAParse {
  ParseStatus status = ParseStatus::kMalformed;
  std::string question;
  std::string answer;
  std::string detail;
};

inline constexpr std::size_t kMaxQuestionWords = 10;
inline constexpr std::size_t kMaxAnswerWords = 5;

/// Takes the first JSON object in `raw` that has string fields "Q" and "A".
/// Questions must end with '?' and fit in 10 words; answers in 5 words.
OpenQAParse ParseOpenQACompletion(std::string_view raw);

struct CloseQAParse {
  ParseStatus status = ParseStatus::kMalformed;
  Distractors distractors;
  std::string detail;
};

/// Takes the first JSON array of strings in `raw`; it must hold exactly three
/// entries that are pairwise distinct and distinct from `correct_answer`
/// after NormalizeAnswer.
CloseQAParse ParseCloseQACompletion(std::string_view raw, std::string_view correct_answer);

// ---------------------------------------------------------------------------
// Generation

struct GenerationRecord {
  std::string kind;  ///< "openqa" or "closeqa"
  std::string clip_uid;
  std::optional<std::size_t> chunk_index;
  std::string question;  ///< closeqa: the source pair
  std::string answer;
  std::string prompt_hash;
  std::string raw_completion;
  ParseStatus status = ParseStatus::kMalformed;
  nlohmann::json payload;  ///< parsed content when status is ok
  int attempts = 0;

  nlohmann::json ToJson() const;
};

struct SynthesisResult {
  std::vector<QASample> samples;
  std::vector<GenerationRecord> records;
  /// Set when the endpoint became unreachable; samples/records then hold
  /// whatever completed before the failure.
  std::optional<std::string> fatal_error;
  double elapsed_s = 0.0;

  std::size_t failed() const;
  double error_rate() const;
};

/// One request per chunk. Unparseable completions are retried up to
/// `config.max_retries` times and then dropped with a record. Samples come
/// back ordered by (clip_uid, chunk_index).
SynthesisResult GenerateOpenQA(std::span<const NarrationTrack> tracks,
                               std::span<const NarrationChunk> chunks,
                               CompletionEndpoint& endpoint, const EndpointConfig& config,
                               const PromptTemplate& prompt, Split split = Split::kTrain);

/// Generates three distractors per sample, keeping input order. Samples
/// whose generation fails keep no distractors and get a failure record.
SynthesisResult AttachDistractors(std::span<const QASample> samples,
                                  CompletionEndpoint& endpoint, const EndpointConfig& config,
                                  const PromptTemplate& prompt);

/// The four candidate answers of a CloseQA sample in a seeded order that
/// depends only on (seed, clip_uid, question, answer).
std::vector<std::string> ShuffledChoices(const QASample& sample, std::uint64_t seed);

/// Runs fn(i) for i in [0, n) on `parallelism` threads. The first exception
/// thrown by any task is rethrown after all workers stop.
void ParallelFor(std::size_t n, int parallelism, const std::function<void(std::size_t)>& fn);

}  // namespace egoqa
