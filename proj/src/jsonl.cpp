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

#include "egoqa/jsonl.hpp"

#include "egoqa/error.hpp"
#include "egoqa/qa_synthesis.hpp"
#include "egoqa/util.hpp"

namespace egoqa {

using nlohmann::json;

namespace {

template <typename T>
T Field(const json& row, const char* key) {
  if (!row.contains(key)) throw Error(ErrorCode::kSchemaMismatch, std::string("missing ") + key);
  try {
    return row.at(key).get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::kSchemaMismatch, std::string("bad type for ") + key);
  }
}

TemporalWindow WindowFromPair(const json& j) {
  if (!j.is_array() || j.size() < 2 || !j[0].is_number() || !j[1].is_number()) {
    throw Error(ErrorCode::kSchemaMismatch, "window must be [start, end]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

json TrackToJson(const NarrationTrack& track) {
  json ns = json::array();
  for (const Narration& n : track.narrations) ns.push_back({{"text", n.text}, {"t_s", n.t_s}});
  return {{"clip_uid", track.clip_uid}, {"duration_s", track.duration_s}, {"narrations", ns}};
}

NarrationTrack TrackFromJson(const json& row) {
  NarrationTrack track;
  track.clip_uid = Field<std::string>(row, "clip_uid");
  track.duration_s = Field<double>(row, "duration_s");
  const json ns = Field<json>(row, "narrations");
  if (!ns.is_array()) throw Error(ErrorCode::kSchemaMismatch, "narrations must be a list");
  for (const json& n : ns) {
    track.narrations.push_back({Field<std::string>(n, "text"), Field<double>(n, "t_s")});
  }
  return track;
}

json SampleToJson(const QASample& sample, std::optional<std::uint64_t> shuffle_seed) {
  json j = {{"clip_uid", sample.clip_uid}};
  if (!sample.query_id.empty()) j["query_id"] = sample.query_id;
  j["question"] = sample.question;
  j["answer"] = sample.answer;
  j["window"] = {sample.window.start_s, sample.window.end_s};
  if (sample.wrong_answers) {
    j["wrong_answers"] = *sample.wrong_answers;
    if (shuffle_seed) {
      j["choices"] = ShuffledChoices(sample, *shuffle_seed);
    }
  }
  j["split"] = SplitName(sample.split);
  j["source"] = SourceName(sample.source);
  return j;
}

QASample SampleFromJson(const json& row) {
  QASample s;
  s.clip_uid = Field<std::string>(row, "clip_uid");
  if (row.contains("query_id")) {
    const json& id = row.at("query_id");
    s.query_id = id.is_string() ? id.get<std::string>() : id.dump();
  }
  s.question = Field<std::string>(row, "question");
  s.answer = Field<std::string>(row, "answer");
  s.window = WindowFromPair(Field<json>(row, "window"));
  if (row.contains("wrong_answers") && !row.at("wrong_answers").is_null()) {
    const auto wrong = Field<std::vector<std::string>>(row, "wrong_answers");
    if (wrong.size() != 3) throw Error(ErrorCode::kSchemaMismatch, "wrong_answers needs 3 entries");
    s.wrong_answers = Distractors{wrong[0], wrong[1], wrong[2]};
  }
  const auto split = ParseSplit(Field<std::string>(row, "split"));
  const auto source = ParseSource(Field<std::string>(row, "source"));
  if (!split || !source) throw Error(ErrorCode::kSchemaMismatch, "bad split or source");
  s.split = *split;
  s.source = *source;
  return s;
}

json PredictionToJson(const PredictionSet& p) {
  json windows = json::array();
  for (const ScoredWindow& w : p.windows) {
    windows.push_back({w.window.start_s, w.window.end_s, w.score});
  }
  return {{"clip_uid", p.clip_uid},
          {"query_id", p.query_id},
          {"windows", windows},
          {"answer_text", p.answer_text}};
}

PredictionSet PredictionFromJson(const json& row) {
  PredictionSet p;
  p.clip_uid = Field<std::string>(row, "clip_uid");
  const json& id = row.contains("query_id") ? row.at("query_id") : json();
  if (id.is_null()) throw Error(ErrorCode::kSchemaMismatch, "missing query_id");
  p.query_id = id.is_string() ? id.get<std::string>() : id.dump();
  if (row.contains("windows")) {
    for (const json& w : row.at("windows")) {
      if (!w.is_array() || w.size() != 3) {
        throw Error(ErrorCode::kSchemaMismatch, "windows entries must be [s, e, score]");
      }
      try {
        p.windows.push_back({{w[0].get<double>(), w[1].get<double>()}, w[2].get<double>()});
      } catch (const json::exception&) {
        throw Error(ErrorCode::kSchemaMismatch, "non-numeric window entry");
      }
    }
  }
  if (row.contains("answer_text")) p.answer_text = Field<std::string>(row, "answer_text");
  return p;
}

HeadOutputsRow HeadOutputsFromJson(const json& row) {
  HeadOutputsRow out;
  out.clip_uid = Field<std::string>(row, "clip_uid");
  const json& id = row.contains("query_id") ? row.at("query_id") : json();
  if (id.is_null()) throw Error(ErrorCode::kSchemaMismatch, "missing query_id");
  out.query_id = id.is_string() ? id.get<std::string>() : id.dump();
  out.duration_s = Field<double>(row, "duration_s");
  if (!(out.duration_s > 0.0)) throw Error(ErrorCode::kSchemaMismatch, "duration_s must be > 0");
  out.heads.scores = Field<std::vector<double>>(row, "scores");
  for (const json& o : Field<json>(row, "offsets")) {
    if (!o.is_array() || o.size() != 2) {
      throw Error(ErrorCode::kSchemaMismatch, "offsets entries must be [left, right]");
    }
    try {
      out.heads.offsets.push_back({o[0].get<double>(), o[1].get<double>()});
    } catch (const json::exception&) {
      throw Error(ErrorCode::kSchemaMismatch, "non-numeric offset");
    }
  }
  try {
    out.heads.Validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::kSchemaMismatch, e.what());
  }
  if (row.contains("answer_text")) out.answer_text = Field<std::string>(row, "answer_text");
  return out;
}

std::string ConfigHash(const json& config) { return Hex64(Fnv1a64(config.dump())); }

json MetaRow(std::string_view command, const json& config, std::optional<std::uint64_t> seed) {
  json meta = {{"tool", "egoqa"},
               {"version", kToolVersion},
               {"command", command},
               {"config_hash", ConfigHash(config)},
               {"config", config}};
  meta["seed"] = seed ? json(*seed) : json();
  return {{"_meta", meta}};
}

bool IsMetaRow(const json& row) { return row.is_object() && row.contains("_meta"); }

JsonlReader::JsonlReader(const std::string& path) : path_(path), in_(path) {
  if (!in_) throw Error(ErrorCode::kUnreadableInput, path);
}

bool JsonlReader::Next(json& row) {
  std::string text;
  while (std::getline(in_, text)) {
    ++line_;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    row = json::parse(text, nullptr, false);
    if (row.is_discarded() || !row.is_object()) {
      throw Error(ErrorCode::kSchemaMismatch,
                  path_ + ":" + std::to_string(line_) + ": not a JSON object");
    }
    if (IsMetaRow(row)) {
      if (!meta_) meta_ = row.at("_meta");
      continue;
    }
    return true;
  }
  return false;
}

[[noreturn]] void ThrowRowError(const JsonlReader& reader, const std::string& what) {
  throw Error(ErrorCode::kSchemaMismatch,
              reader.path() + ":" + std::to_string(reader.line()) + ": " + what);
}

JsonlWriter::JsonlWriter(const std::string& path, const std::optional<json>& meta)
    : path_(path), out_(path, std::ios::binary | std::ios::trunc) {
  if (!out_) throw Error(ErrorCode::kUnreadableInput, "cannot write " + path);
  if (meta) Write(*meta);
}

void JsonlWriter::Write(const json& row) {
  out_ << row.dump() << '\n';
  if (!out_) throw Error(ErrorCode::kUnreadableInput, "write failed: " + path_);
}

}  // namespace egoqa
