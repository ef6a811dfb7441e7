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

#include "egoqa/pipeline.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>

#include "egoqa/blind_filter.hpp"
#include "egoqa/dataset_stats.hpp"
#include "egoqa/error.hpp"
#include "egoqa/eval_metrics.hpp"
#include "egoqa/jsonl.hpp"
#include "egoqa/util.hpp"
#include "egoqa/window_estimation.hpp"

namespace egoqa {

using nlohmann::json;

namespace {

std::string StripSpeakerTag(std::string text) {
  const auto b = text.find_first_not_of(" \t");
  if (b != std::string::npos && text.compare(b, 1, "#") == 0) {
    const auto tag_end = text.find_first_of(" \t", b);
    if (tag_end != std::string::npos) {
      const std::string tag = text.substr(b, tag_end - b);
      if (tag == "#C" || tag == "#c" || tag == "#O" || tag == "#o") {
        text = text.substr(text.find_first_not_of(" \t", tag_end) == std::string::npos
                               ? text.size()
                               : text.find_first_not_of(" \t", tag_end));
      }
    }
  }
  const auto s = text.find_first_not_of(" \t\r\n");
  if (s == std::string::npos) return {};
  const auto e = text.find_last_not_of(" \t\r\n");
  return text.substr(s, e - s + 1);
}

double Number(const json& row, const char* key) {
  if (!row.contains(key) || !row.at(key).is_number()) {
    throw Error(ErrorCode::kSchemaMismatch, std::string("missing numeric ") + key);
  }
  return row.at(key).get<double>();
}

std::unique_ptr<CompletionEndpoint> MakeEndpoint(const std::optional<std::string>& mock,
                                                 const EndpointConfig& config) {
  if (mock) return MockEndpoint::FromFile(*mock);
  return std::make_unique<HttpCompletionEndpoint>(config);
}

std::string FixtureHash(const std::optional<std::string>& path) {
  if (!path) return "";
  std::ifstream in(*path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return Hex64(Fnv1a64(ss.str()));
}

std::string Timestamp() {
  std::time_t t = std::time(nullptr);
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) t = std::strtoll(epoch, nullptr, 10);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

void WriteText(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kUnreadableInput, "cannot write " + path);
  out << text;
}

void WriteJson(const std::string& path, const json& doc) { WriteText(path, doc.dump(2) + "\n"); }

template <typename Fn>
auto ConvertRow(const JsonlReader& reader, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    ThrowRowError(reader, e.what());
  }
}

json SplitOrEmpty(Split s) { return SplitName(s); }

}  // namespace

std::string FormatPercent(double value, std::optional<double> dispersion) {
  char buf[64];
  if (dispersion) {
    std::snprintf(buf, sizeof(buf), "%.1f±%.1f", value * 100.0, *dispersion * 100.0);
  } else {
    std::snprintf(buf, sizeof(buf), "%.1f", value * 100.0);
  }
  return buf;
}

std::string QueryIdFor(const QASample& sample, std::size_t ordinal) {
  return sample.query_id.empty() ? std::to_string(ordinal) : sample.query_id;
}

// ---------------------------------------------------------------------------
// ingest

NarrationTrack TrackFromExport(const json& row) {
  if (!row.is_object()) throw Error(ErrorCode::kSchemaMismatch, "row is not an object");
  if (row.contains("duration_s")) {
    NarrationTrack t = TrackFromJson(row);
    for (Narration& n : t.narrations) n.text = StripSpeakerTag(n.text);
    return t;
  }
  NarrationTrack track;
  if (!row.contains("clip_uid") || !row.at("clip_uid").is_string()) {
    throw Error(ErrorCode::kSchemaMismatch, "missing clip_uid");
  }
  track.clip_uid = row.at("clip_uid").get<std::string>();
  double offset = 0.0;
  if (row.contains("clip_duration_sec")) {
    track.duration_s = Number(row, "clip_duration_sec");
  } else {
    offset = Number(row, "clip_start_sec");
    track.duration_s = Number(row, "clip_end_sec") - offset;
  }
  if (row.contains("clip_start_sec") && row.contains("clip_duration_sec")) {
    offset = Number(row, "clip_start_sec");
  }
  if (!row.contains("narrations") || !row.at("narrations").is_array()) {
    throw Error(ErrorCode::kSchemaMismatch, "missing narrations list");
  }
  for (const json& n : row.at("narrations")) {
    if (!n.contains("narration_text") || !n.at("narration_text").is_string()) {
      throw Error(ErrorCode::kSchemaMismatch, "missing narration_text");
    }
    track.narrations.push_back(
        {StripSpeakerTag(n.at("narration_text").get<std::string>()), Number(n, "timestamp_sec") - offset});
  }
  return track;
}

IngestSummary CmdIngest(const IngestOptions& options) {
  std::ifstream probe(options.input);
  if (!probe) throw Error(ErrorCode::kUnreadableInput, options.input);
  std::string first_line;
  while (std::getline(probe, first_line) &&
         first_line.find_first_not_of(" \t\r") == std::string::npos) {
  }
  const json first = json::parse(first_line, nullptr, false);
  const bool jsonl = !first.is_discarded() && first.is_object() &&
                     (first.contains("clip_uid") || IsMetaRow(first));
  probe.close();

  JsonlWriter out(options.output, MetaRow("ingest", json::object(), std::nullopt));
  std::optional<JsonlWriter> rejects;
  if (options.rejects) rejects.emplace(*options.rejects, std::nullopt);
  IngestSummary summary;

  auto handle = [&](const json& row, std::size_t line) {
    NarrationTrack track;
    std::vector<std::string> codes;
    std::string message;
    try {
      track = TrackFromExport(row);
      const ValidationResult v = ValidateTrack(track);
      for (const Violation& viol : v.violations) {
        codes.push_back(viol.code);
        message += (message.empty() ? "" : "; ") + viol.message;
      }
    } catch (const Error& e) {
      codes.push_back("schema");
      message = e.what();
    }
    if (codes.empty()) {
      out.Write(TrackToJson(track));
      ++summary.accepted;
      return;
    }
    ++summary.rejected;
    const std::string uid = row.is_object() && row.contains("clip_uid") && row["clip_uid"].is_string()
                                ? row["clip_uid"].get<std::string>()
                                : "";
    LogInfo("ingest: rejected line " + std::to_string(line) + " (" + uid + "): " + message);
    if (rejects) rejects->Write({{"line", line}, {"clip_uid", uid}, {"codes", codes}, {"message", message}});
  };

  if (jsonl) {
    JsonlReader reader(options.input);
    json row;
    while (true) {
      try {
        if (!reader.Next(row)) break;
      } catch (const Error& e) {
        // An unparseable line is a reject, not a fatal error.
        ++summary.rejected;
        LogInfo(std::string("ingest: ") + e.what());
        if (rejects) rejects->Write({{"line", reader.line()}, {"clip_uid", ""}, {"codes", {"schema"}}, {"message", e.what()}});
        continue;
      }
      handle(row, reader.line());
    }
  } else {
    std::ifstream in(options.input);
    const json doc = json::parse(in, nullptr, false);
    if (doc.is_discarded() || !doc.is_object() || !doc.contains("clips") ||
        !doc.at("clips").is_array()) {
      throw Error(ErrorCode::kSchemaMismatch, options.input + ": expected JSONL or {\"clips\": [...]}");
    }
    std::size_t index = 0;
    for (const json& row : doc.at("clips")) handle(row, ++index);
  }
  LogInfo("ingest: " + std::to_string(summary.accepted) + " clips accepted, " +
          std::to_string(summary.rejected) + " rejected");
  return summary;
}

// ---------------------------------------------------------------------------
// synthesize / distract

namespace {

struct NarrationPass {
  CorpusTimingStats stats;
  std::size_t clips = 0;
};

NarrationPass ScanNarrations(const std::string& path) {
  JsonlReader reader(path);
  TimingStatsAccumulator acc;
  NarrationPass pass;
  json row;
  while (reader.Next(row)) {
    acc.Add(ConvertRow(reader, [&] { return TrackFromJson(row); }));
    ++pass.clips;
  }
  if (pass.clips == 0) throw Error(ErrorCode::kEmptyCorpus, path + " has no narration rows");
  pass.stats = acc.Finish();
  return pass;
}

}  // namespace

SynthesizeSummary CmdSynthesize(const SynthesizeOptions& options, CompletionEndpoint* endpoint) {
  options.endpoint.Validate();
  std::unique_ptr<CompletionEndpoint> owned;
  if (!endpoint) {
    owned = MakeEndpoint(options.mock_fixture, options.endpoint);
    endpoint = owned.get();
  }
  const NarrationPass pass = ScanNarrations(options.narrations);

  json config = {{"endpoint", options.endpoint.ToJson()},
                 {"mock_fixture", FixtureHash(options.mock_fixture)},
                 {"openqa_template", TemplateName(options.openqa_template)},
                 {"closeqa_template", TemplateName(options.closeqa_template)},
                 {"distractors", options.distractors},
                 {"max_sentences", options.bounds.max_sentences},
                 {"max_span_s", options.bounds.max_span_s},
                 {"split", SplitOrEmpty(options.split)},
                 {"batch_chunks", options.batch_chunks},
                 {"alpha_s", pass.stats.alpha_s}};
  const std::optional<json> meta = MetaRow("synthesize", config, options.seed);
  JsonlWriter qa_out(options.output, meta);
  JsonlWriter records_out(options.records, meta);
  DatasetStatsBuilder stats_builder;

  SynthesizeSummary summary;
  summary.clips = pass.clips;
  std::optional<std::string> fatal;

  std::vector<NarrationTrack> batch_tracks;
  std::vector<NarrationChunk> batch_chunks;
  auto flush = [&] {
    if (batch_chunks.empty() || fatal) return;
    SynthesisResult open = GenerateOpenQA(batch_tracks, batch_chunks, *endpoint, options.endpoint,
                                          GetTemplate(options.openqa_template), options.split);
    summary.chunks += batch_chunks.size();
    summary.openqa_failed += open.failed();
    for (const GenerationRecord& r : open.records) records_out.Write(r.ToJson());
    std::vector<QASample> samples = std::move(open.samples);
    fatal = open.fatal_error;
    if (options.distractors && !fatal) {
      SynthesisResult close = AttachDistractors(samples, *endpoint, options.endpoint,
                                                GetTemplate(options.closeqa_template));
      summary.closeqa_failed += close.failed();
      for (const GenerationRecord& r : close.records) records_out.Write(r.ToJson());
      samples = std::move(close.samples);
      if (close.fatal_error) fatal = close.fatal_error;
    }
    for (const QASample& s : samples) {
      qa_out.Write(SampleToJson(s, options.seed));
      stats_builder.AddSample(s);
      ++summary.samples;
    }
    batch_tracks.clear();
    batch_chunks.clear();
  };

  JsonlReader reader(options.narrations);
  json row;
  while (!fatal && reader.Next(row)) {
    NarrationTrack track = ConvertRow(reader, [&] { return TrackFromJson(row); });
    stats_builder.AddTrack(track);
    if (track.narrations.empty()) continue;
    std::vector<NarrationChunk> chunks = ChunkTrack(track, pass.stats, options.bounds);
    batch_chunks.insert(batch_chunks.end(), std::make_move_iterator(chunks.begin()),
                        std::make_move_iterator(chunks.end()));
    batch_tracks.push_back(std::move(track));
    if (batch_chunks.size() >= options.batch_chunks) flush();
  }
  flush();
  qa_out.Flush();
  records_out.Flush();

  if (options.stats && summary.samples > 0) {
    json doc = stats_builder.Finish().ToJson();
    doc["_meta"] = meta->at("_meta");
    WriteJson(*options.stats, doc);
  }
  if (fatal) throw Error(ErrorCode::kEndpointUnavailable, *fatal);
  return summary;
}

SynthesizeSummary CmdDistract(const DistractOptions& options, CompletionEndpoint* endpoint) {
  options.endpoint.Validate();
  std::unique_ptr<CompletionEndpoint> owned;
  if (!endpoint) {
    owned = MakeEndpoint(options.mock_fixture, options.endpoint);
    endpoint = owned.get();
  }
  const json config = {{"endpoint", options.endpoint.ToJson()},
                       {"mock_fixture", FixtureHash(options.mock_fixture)},
                       {"closeqa_template", TemplateName(options.closeqa_template)},
                       {"batch", options.batch}};
  const std::optional<json> meta = MetaRow("distract", config, options.seed);
  JsonlWriter qa_out(options.output, meta);
  JsonlWriter records_out(options.records, meta);

  SynthesizeSummary summary;
  std::optional<std::string> fatal;
  std::vector<QASample> batch;
  auto flush = [&] {
    if (batch.empty() || fatal) return;
    SynthesisResult close = AttachDistractors(batch, *endpoint, options.endpoint,
                                              GetTemplate(options.closeqa_template));
    summary.closeqa_failed += close.failed();
    for (const GenerationRecord& r : close.records) records_out.Write(r.ToJson());
    for (const QASample& s : close.samples) {
      qa_out.Write(SampleToJson(s, options.seed));
      ++summary.samples;
    }
    fatal = close.fatal_error;
    batch.clear();
  };
  JsonlReader reader(options.input);
  json row;
  std::size_t ordinal = 0;
  while (!fatal && reader.Next(row)) {
    QASample s = ConvertRow(reader, [&] { return SampleFromJson(row); });
    s.query_id = QueryIdFor(s, ordinal++);
    s.wrong_answers.reset();
    batch.push_back(std::move(s));
    if (batch.size() >= options.batch) flush();
  }
  flush();
  if (ordinal == 0) throw Error(ErrorCode::kEmptyCorpus, options.input + " has no samples");
  if (fatal) throw Error(ErrorCode::kEndpointUnavailable, *fatal);
  return summary;
}

// ---------------------------------------------------------------------------
// filter-blind

FilterSummary CmdFilterBlind(const FilterOptions& options) {
  std::unique_ptr<BlindAnswerer> answerer;
  if (options.answerer == "prior") {
    if (!options.train) throw Error(ErrorCode::kInvalidArgument, "prior answerer needs --train");
    std::map<std::string, std::size_t> counts;
    JsonlReader reader(*options.train);
    json row;
    while (reader.Next(row)) {
      ++counts[NormalizeAnswer(ConvertRow(reader, [&] { return SampleFromJson(row); }).answer)];
    }
    answerer = std::make_unique<FrequencyPriorAnswerer>(std::move(counts));
  } else if (options.answerer == "random") {
    answerer = std::make_unique<UniformRandomAnswerer>();
  } else if (options.answerer == "scripted") {
    if (!options.script) throw Error(ErrorCode::kInvalidArgument, "scripted answerer needs --script");
    std::ifstream in(*options.script);
    if (!in) throw Error(ErrorCode::kUnreadableInput, *options.script);
    const json script = json::parse(in, nullptr, false);
    if (script.is_discarded()) throw Error(ErrorCode::kSchemaMismatch, *options.script);
    answerer = std::make_unique<ScriptedAnswerer>(script);
  } else {
    throw Error(ErrorCode::kInvalidArgument, "unknown answerer " + options.answerer);
  }

  std::vector<QASample> samples;
  {
    JsonlReader reader(options.input);
    json row;
    while (reader.Next(row)) {
      QASample s = ConvertRow(reader, [&] { return SampleFromJson(row); });
      s.query_id = QueryIdFor(s, samples.size());
      samples.push_back(std::move(s));
    }
  }
  FilterResult result =
      FilterTestSet(samples, *answerer, options.seeds, options.parallelism, options.reshuffle);

  const json config = {{"answerer", options.answerer},
                       {"train", FixtureHash(options.train)},
                       {"script", FixtureHash(options.script)},
                       {"seeds", options.seeds},
                       {"reshuffle", options.reshuffle},
                       {"shuffle_seed", options.shuffle_seed}};
  const std::optional<json> meta = MetaRow("filter-blind", config, options.shuffle_seed);
  JsonlWriter out(options.output, meta);
  for (const QASample& s : result.kept) out.Write(SampleToJson(s, options.shuffle_seed));
  json report = result.report.ToJson();
  report["_meta"] = meta->at("_meta");
  WriteJson(options.report, report);
  LogInfo("filter-blind: removed " + std::to_string(result.report.removed) + " of " +
          std::to_string(result.report.total));
  return {result.report.total, result.report.removed, result.report.kept};
}

// ---------------------------------------------------------------------------
// eval

namespace {

struct GroundTruth {
  std::map<std::string, QASample> by_id;
  std::vector<std::string> order;
};

GroundTruth LoadGroundTruth(const std::string& path) {
  GroundTruth gt;
  JsonlReader reader(path);
  json row;
  while (reader.Next(row)) {
    QASample s = ConvertRow(reader, [&] { return SampleFromJson(row); });
    const std::string id = QueryIdFor(s, gt.order.size());
    gt.order.push_back(id);
    gt.by_id[id] = std::move(s);
  }
  if (gt.order.empty()) throw Error(ErrorCode::kEmptyEvaluation, path + " has no samples");
  return gt;
}

std::map<std::string, PredictionSet> LoadPredictions(const std::string& path) {
  std::map<std::string, PredictionSet> preds;
  JsonlReader reader(path);
  json row;
  while (reader.Next(row)) {
    PredictionSet p = ConvertRow(reader, [&] { return PredictionFromJson(row); });
    std::string id = p.query_id;
    preds[id] = std::move(p);
  }
  return preds;
}

void RequireAll(const GroundTruth& gt, const std::map<std::string, PredictionSet>& preds) {
  std::string missing;
  for (const std::string& id : gt.order) {
    if (!preds.count(id)) missing += (missing.empty() ? "" : ",") + id;
  }
  if (!missing.empty()) throw Error(ErrorCode::kMissingQuery, missing);
}

json MetricJson(const MetricValue& m) {
  json j = {{"value", m.value}, {"percent", FormatPercent(m.value, m.dispersion)}};
  if (m.dispersion) j["dispersion"] = *m.dispersion;
  return j;
}

}  // namespace

EvalReport CmdEval(const EvalOptions& options) {
  const GroundTruth gt = LoadGroundTruth(options.ground_truth);
  EvalReport report;
  if (options.task == "vlg") {
    if (options.predictions.size() != 1) {
      throw Error(ErrorCode::kInvalidArgument, "vlg takes one predictions file");
    }
    const auto preds = LoadPredictions(options.predictions.front());
    RequireAll(gt, preds);
    std::map<std::string, TemporalWindow> windows;
    for (const auto& [id, s] : gt.by_id) windows[id] = s.window;
    const VLGResult r = VlgRecall(preds, windows);
    for (std::size_t k : kRecallKs) {
      for (double m : kRecallIous) {
        char name[32];
        std::snprintf(name, sizeof(name), "R@%zu,IoU=%.1f", k, m);
        report.metrics[name] = {r.recall(k, m), std::nullopt};
      }
    }
    report.metrics["Mean R@1"] = {r.mean_r1(), std::nullopt};
  } else if (options.task == "openqa") {
    if (options.predictions.size() != 1) {
      throw Error(ErrorCode::kInvalidArgument, "openqa takes one predictions file");
    }
    const auto preds = LoadPredictions(options.predictions.front());
    RequireAll(gt, preds);
    std::vector<AnswerPair> pairs;
    for (const std::string& id : gt.order) {
      pairs.emplace_back(preds.at(id).answer_text, gt.by_id.at(id).answer);
    }
    std::unique_ptr<Embedder> embedder;
    if (options.embedder) {
      embedder = std::make_unique<HttpEmbedder>(*options.embedder);
    } else {
      embedder = std::make_unique<TrigramEmbedder>();
    }
    report = OpenQAReport(pairs, *embedder);
  } else if (options.task == "closeqa") {
    if (options.predictions.size() != kCloseQARuns) {
      throw Error(ErrorCode::kRunLengthMismatch,
                  "closeqa takes 5 prediction files, got " + std::to_string(options.predictions.size()));
    }
    std::vector<std::vector<AnswerPair>> runs;
    for (const std::string& path : options.predictions) {
      const auto preds = LoadPredictions(path);
      if (preds.size() != gt.order.size()) {
        throw Error(ErrorCode::kRunLengthMismatch, path + " covers a different question set");
      }
      RequireAll(gt, preds);
      std::vector<AnswerPair> run;
      for (const std::string& id : gt.order) {
        run.emplace_back(preds.at(id).answer_text, gt.by_id.at(id).answer);
      }
      runs.push_back(std::move(run));
    }
    const AccuracySummary acc = CloseQAAccuracy(runs);
    report.metrics["Acc"] = {acc.mean, acc.std};
    for (std::size_t i = 0; i < acc.per_run.size(); ++i) {
      report.metrics["Acc.run" + std::to_string(i)] = {acc.per_run[i], std::nullopt};
    }
  } else {
    throw Error(ErrorCode::kInvalidArgument, "unknown task " + options.task);
  }
  for (const auto& [name, m] : report.metrics) {
    if (!std::isfinite(m.value)) throw Error(ErrorCode::kInvariantBreach, name + " is not finite");
  }

  report.metadata.dataset_id = options.dataset_id;
  report.metadata.timestamp = Timestamp();
  if (options.task == "closeqa") report.metadata.seeds = {0, 1, 2, 3, 4};

  const json config = {{"task", options.task},
                       {"dataset_id", options.dataset_id},
                       {"num_prediction_files", options.predictions.size()},
                       {"embedder", options.embedder ? options.embedder->ToJson() : json("offline-sim")}};
  json metrics = json::object();
  for (const auto& [name, m] : report.metrics) metrics[name] = MetricJson(m);
  json doc = {{"_meta", MetaRow("eval", config, std::nullopt).at("_meta")},
              {"task", options.task},
              {"metrics", metrics},
              {"metadata",
               {{"dataset_id", report.metadata.dataset_id},
                {"timestamp", report.metadata.timestamp},
                {"seeds", report.metadata.seeds},
                {"tags", report.metadata.tags}}}};
  WriteJson(options.output, doc);
  return report;
}

// ---------------------------------------------------------------------------
// stats

json CmdStats(const StatsOptions& options) {
  DatasetStatsBuilder builder;
  {
    JsonlReader reader(options.input);
    json row;
    while (reader.Next(row)) builder.AddSample(ConvertRow(reader, [&] { return SampleFromJson(row); }));
  }
  if (options.narrations) {
    JsonlReader reader(*options.narrations);
    json row;
    while (reader.Next(row)) builder.AddTrack(ConvertRow(reader, [&] { return TrackFromJson(row); }));
  }
  const DatasetStats stats = builder.Finish();
  json doc = stats.ToJson();
  doc["_meta"] = MetaRow("stats", json::object(), std::nullopt).at("_meta");
  WriteJson(options.output, doc);
  if (options.tsv_dir) {
    const std::filesystem::path dir(*options.tsv_dir);
    std::filesystem::create_directories(dir);
    WriteText((dir / "window_duration_s.tsv").string(), HistogramTsv(stats.window_duration_s, "seconds"));
    WriteText((dir / "question_words.tsv").string(), HistogramTsv(stats.question_words, "words"));
    WriteText((dir / "answer_words.tsv").string(), HistogramTsv(stats.answer_words, "words"));
    WriteText((dir / "distractor_words.tsv").string(), HistogramTsv(stats.distractor_words, "words"));
    WriteText((dir / "question_prefixes.tsv").string(), FrequencyTsv(stats.question_prefixes, "prefix"));
    WriteText((dir / "top_answers.tsv").string(), FrequencyTsv(stats.top_answers, "answer"));
    WriteText((dir / "top_distractors.tsv").string(), FrequencyTsv(stats.top_distractors, "answer"));
  }
  return doc;
}

// ---------------------------------------------------------------------------
// decode

std::size_t CmdDecode(const DecodeCommandOptions& options) {
  const json config = {{"score_threshold", options.decode.score_threshold},
                       {"nms_iou", options.decode.nms_iou},
                       {"top_k", options.decode.top_k}};
  JsonlReader reader(options.input);
  JsonlWriter out(options.output, MetaRow("decode", config, std::nullopt));
  std::size_t rows = 0;
  json row;
  while (reader.Next(row)) {
    const HeadOutputsRow heads = ConvertRow(reader, [&] { return HeadOutputsFromJson(row); });
    PredictionSet p;
    p.clip_uid = heads.clip_uid;
    p.query_id = heads.query_id;
    p.windows = DecodeWindows(heads.heads, heads.duration_s, options.decode);
    p.answer_text = heads.answer_text;
    out.Write(PredictionToJson(p));
    ++rows;
  }
  return rows;
}

}  // namespace egoqa
