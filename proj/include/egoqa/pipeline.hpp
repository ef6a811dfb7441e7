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
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "egoqa/core_model.hpp"
#include "egoqa/endpoint.hpp"
#include "egoqa/narration_chunker.hpp"
#include "egoqa/qa_synthesis.hpp"
#include "egoqa/training_math.hpp"

namespace egoqa {

// Command implementations behind the egoqa CLI. Each throws egoqa::Error;
// the CLI maps codes to exit statuses with ExitCodeFor.

struct IngestOptions {
  std::string input;
  std::string output;
  std::optional<std::string> rejects;
};

struct IngestSummary {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
};

/// Parses a narration export into validated narrations.jsonl. Accepted
/// input, JSONL or a single JSON document {"clips": [...]}, with rows in
/// either this toolkit's narrations schema or the export schema
///   {clip_uid, clip_duration_sec | (clip_start_sec, clip_end_sec),
///    narrations: [{timestamp_sec, narration_text}]}
/// where export timestamps are video-relative when clip_start_sec is given.
/// A leading "#C"/"#O" speaker tag is stripped from narration text.
IngestSummary CmdIngest(const IngestOptions& options);

/// Converts one export or native row; throws Error(kSchemaMismatch).
NarrationTrack TrackFromExport(const nlohmann::json& row);

struct SynthesizeOptions {
  std::string narrations;
  std::string output;
  std::string records;
  std::optional<std::string> stats;
  std::optional<std::string> mock_fixture;
  EndpointConfig endpoint;
  TemplateId openqa_template = TemplateId::kOpenQALlama;
  TemplateId closeqa_template = TemplateId::kCloseQALlama;
  bool distractors = true;
  std::uint64_t seed = 0;
  ChunkBounds bounds;
  Split split = Split::kTrain;
  /// Clips are grouped into generation batches of about this many chunks.
  std::size_t batch_chunks = 512;
};

struct SynthesizeSummary {
  std::size_t clips = 0;
  std::size_t chunks = 0;
  std::size_t samples = 0;
  std::size_t openqa_failed = 0;
  std::size_t closeqa_failed = 0;
};

/// Window statistics, chunking, OpenQA generation and (optionally)
/// distractors. With `endpoint` null, a MockEndpoint is built from
/// `mock_fixture` or an HTTP client from `options.endpoint`. On endpoint
/// failure everything finished so far is written before the error is
/// rethrown.
SynthesizeSummary CmdSynthesize(const SynthesizeOptions& options,
                                CompletionEndpoint* endpoint = nullptr);

struct DistractOptions {
  std::string input;
  std::string output;
  std::string records;
  std::optional<std::string> mock_fixture;
  EndpointConfig endpoint;
  TemplateId closeqa_template = TemplateId::kCloseQALlama;
  std::uint64_t seed = 0;
  std::size_t batch = 512;
};

/// Adds distractors to an existing qa.jsonl (for example a manual benchmark).
SynthesizeSummary CmdDistract(const DistractOptions& options,
                              CompletionEndpoint* endpoint = nullptr);

struct FilterOptions {
  std::string input;
  std::string output;
  std::string report;
  std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  std::string answerer = "prior";  ///< prior | random | scripted
  std::optional<std::string> train;   ///< training qa.jsonl for "prior"
  std::optional<std::string> script;  ///< answer script for "scripted"
  int parallelism = 1;
  bool reshuffle = true;
  std::uint64_t shuffle_seed = 0;  ///< order of "choices" in the output
};

struct FilterSummary {
  std::size_t total = 0;
  std::size_t removed = 0;
  std::size_t kept = 0;
};

FilterSummary CmdFilterBlind(const FilterOptions& options);

struct EvalOptions {
  std::string task;  ///< vlg | openqa | closeqa
  std::string ground_truth;
  std::vector<std::string> predictions;  ///< five files for closeqa
  std::string output;
  std::string dataset_id;
  std::optional<EndpointConfig> embedder;  ///< remote embeddings; offline if unset
};

/// Writes report.json and returns the report.
EvalReport CmdEval(const EvalOptions& options);

struct StatsOptions {
  std::string input;
  std::optional<std::string> narrations;
  std::string output;
  std::optional<std::string> tsv_dir;
};

nlohmann::json CmdStats(const StatsOptions& options);

struct DecodeCommandOptions {
  std::string input;
  std::string output;
  DecodeOptions decode;
};

/// Returns the number of prediction rows written.
std::size_t CmdDecode(const DecodeCommandOptions& options);

/// value in [0,1] as a percentage with one decimal, "50.0" or "50.0±22.4".
std::string FormatPercent(double value, std::optional<double> dispersion = std::nullopt);

/// Query id for ground-truth rows: the row's "query_id", or its 0-based
/// ordinal among data rows when absent.
std::string QueryIdFor(const QASample& sample, std::size_t ordinal);

}  // namespace egoqa
