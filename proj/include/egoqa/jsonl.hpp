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
#include <fstream>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "egoqa/core_model.hpp"
#include "egoqa/training_math.hpp"

namespace egoqa {

inline constexpr std::string_view kToolVersion = "0.3.0";

// Row schemas (one JSON object per line):
//   narrations   {clip_uid, duration_s, narrations: [{text, t_s}]}
//   qa           {clip_uid, query_id?, question, answer, window: [s, e],
//                 wrong_answers?, choices?, split, source}
//   predictions  {clip_uid, query_id, windows: [[s, e, score]], answer_text}
//   head outputs {clip_uid, query_id, duration_s, scores: [..],
//                 offsets: [[left, right]], answer_text?}
// The first line of every file written by the toolkit is a metadata row
// {"_meta": {...}}; readers skip it.

nlohmann::json TrackToJson(const NarrationTrack& track);
NarrationTrack TrackFromJson(const nlohmann::json& row);

/// With a shuffle seed, CloseQA samples also carry the four choices in their
/// seeded order under "choices".
nlohmann::json SampleToJson(const QASample& sample,
                            std::optional<std::uint64_t> shuffle_seed = std::nullopt);
QASample SampleFromJson(const nlohmann::json& row);

nlohmann::json PredictionToJson(const PredictionSet& predictions);
PredictionSet PredictionFromJson(const nlohmann::json& row);

struct HeadOutputsRow {
  std::string clip_uid;
  std::string query_id;
  double duration_s = 0.0;
  HeadOutputs heads;
  std::string answer_text;
};

HeadOutputsRow HeadOutputsFromJson(const nlohmann::json& row);

/// {"_meta": {tool, version, command, config_hash, seed, config}}. The
/// config must not contain file paths so that equal settings hash equally.
nlohmann::json MetaRow(std::string_view command, const nlohmann::json& config,
                       std::optional<std::uint64_t> seed);
std::string ConfigHash(const nlohmann::json& config);
bool IsMetaRow(const nlohmann::json& row);

/// Line-oriented reader. Blank lines and metadata rows are skipped; a line
/// that is not a JSON object throws Error(kSchemaMismatch) naming its
/// 1-based line number.
class JsonlReader {
 public:
  explicit JsonlReader(const std::string& path);

  bool Next(nlohmann::json& row);
  /// 1-based line number of the row last returned.
  std::size_t line() const { return line_; }
  const std::optional<nlohmann::json>& meta() const { return meta_; }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::ifstream in_;
  std::size_t line_ = 0;
  std::optional<nlohmann::json> meta_;
};

class JsonlWriter {
 public:
  /// Truncates `path` and writes the metadata row when given.
  JsonlWriter(const std::string& path, const std::optional<nlohmann::json>& meta);

  void Write(const nlohmann::json& row);
  void Flush() { out_.flush(); }

 private:
  std::string path_;
  std::ofstream out_;
};

/// Wraps a row-level conversion failure as Error(kSchemaMismatch) with the
/// file and line.
[[noreturn]] void ThrowRowError(const JsonlReader& reader, const std::string& what);

}  // namespace egoqa
