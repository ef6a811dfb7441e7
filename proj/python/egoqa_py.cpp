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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "egoqa/blind_filter.hpp"
#include "egoqa/core_model.hpp"
#include "egoqa/error.hpp"
#include "egoqa/eval_metrics.hpp"
#include "egoqa/jsonl.hpp"
#include "egoqa/narration_chunker.hpp"
#include "egoqa/pipeline.hpp"
#include "egoqa/qa_synthesis.hpp"
#include "egoqa/training_math.hpp"
#include "egoqa/util.hpp"
#include "egoqa/window_estimation.hpp"

namespace py = pybind11;
using namespace egoqa;

namespace {

// JSON crosses the boundary as text; the Python side wraps it with json.
std::string Dump(const nlohmann::json& j) { return j.dump(); }

py::dict ReportDict(const EvalReport& r) {
  py::dict metrics;
  for (const auto& [name, m] : r.metrics) {
    py::dict d;
    d["value"] = m.value;
    d["dispersion"] = m.dispersion ? py::cast(*m.dispersion) : py::none();
    d["percent"] = FormatPercent(m.value, m.dispersion);
    metrics[py::str(name)] = d;
  }
  py::dict meta;
  meta["dataset_id"] = r.metadata.dataset_id;
  meta["timestamp"] = r.metadata.timestamp;
  meta["seeds"] = r.metadata.seeds;
  meta["tags"] = r.metadata.tags;
  py::dict out;
  out["metrics"] = metrics;
  out["metadata"] = meta;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "egoqa core bindings";
  m.attr("__version__") = std::string(kToolVersion);

  // Messages carry the error code name as a prefix.
  py::register_exception<Error>(m, "EgoqaError", PyExc_RuntimeError);

  py::class_<Narration>(m, "Narration")
      .def(py::init([](std::string text, double t_s) { return Narration{std::move(text), t_s}; }), py::arg("text"),
           py::arg("t_s"))
      .def_readwrite("text", &Narration::text)
      .def_readwrite("t_s", &Narration::t_s);

  py::class_<NarrationTrack>(m, "NarrationTrack")
      .def(py::init([](std::string uid, double duration, std::vector<Narration> ns) {
             return NarrationTrack{std::move(uid), duration, std::move(ns)};
           }),
           py::arg("clip_uid"), py::arg("duration_s"), py::arg("narrations"))
      .def_readwrite("clip_uid", &NarrationTrack::clip_uid)
      .def_readwrite("duration_s", &NarrationTrack::duration_s)
      .def_readwrite("narrations", &NarrationTrack::narrations)
      .def("validate", [](const NarrationTrack& t) {
        std::vector<std::string> codes;
        for (const auto& v : ValidateTrack(t).violations) codes.push_back(v.code);
        return codes;
      });

  py::class_<TemporalWindow>(m, "TemporalWindow")
      .def(py::init([](double s, double e) { return TemporalWindow{s, e}; }), py::arg("start_s"), py::arg("end_s"))
      .def_readwrite("start_s", &TemporalWindow::start_s)
      .def_readwrite("end_s", &TemporalWindow::end_s)
      .def_property_readonly("length", &TemporalWindow::length)
      .def("__eq__", [](const TemporalWindow& a, const TemporalWindow& b) { return a == b; })
      .def("__repr__", [](const TemporalWindow& w) {
        return "TemporalWindow(" + std::to_string(w.start_s) + ", " + std::to_string(w.end_s) + ")";
      });

  py::class_<ScoredWindow>(m, "ScoredWindow")
      .def(py::init([](TemporalWindow w, double s) { return ScoredWindow{w, s}; }), py::arg("window"),
           py::arg("score"))
      .def_readwrite("window", &ScoredWindow::window)
      .def_readwrite("score", &ScoredWindow::score);

  py::class_<CorpusTimingStats>(m, "CorpusTimingStats")
      .def_readonly("alpha_s", &CorpusTimingStats::alpha_s)
      .def("beta", &CorpusTimingStats::beta, py::arg("clip_uid"));

  m.def("compute_timing_stats", [](const std::vector<NarrationTrack>& tracks) { return ComputeTimingStats(tracks); },
        py::arg("tracks"));
  m.def("narration_window", &NarrationWindow, py::arg("t_s"), py::arg("clip_uid"), py::arg("stats"),
        py::arg("duration_s"));

  m.def(
      "chunk_track",
      [](const NarrationTrack& t, const CorpusTimingStats& stats, std::size_t max_sentences, double max_span_s) {
        std::vector<py::dict> out;
        for (const auto& c : ChunkTrack(t, stats, {max_sentences, max_span_s})) {
          py::dict d;
          d["members"] = c.members;
          d["span"] = c.span;
          d["chunk_index"] = c.chunk_index;
          out.push_back(d);
        }
        return out;
      },
      py::arg("track"), py::arg("stats"), py::arg("max_sentences") = 5, py::arg("max_span_s") = 30.0);

  m.def("template_text", [](const std::string& name) {
    const auto id = ParseTemplateId(name);
    if (!id) throw Error(ErrorCode::kInvalidArgument, "unknown template " + name);
    return std::string(GetTemplate(*id).text);
  });
  m.def(
      "render_openqa_prompt",
      [](const std::vector<std::string>& narrations, const std::string& template_name) {
        NarrationTrack t{"clip", 1e9, {}};
        NarrationChunk c{"clip", {}, {0, 1}, 0};
        for (std::size_t i = 0; i < narrations.size(); ++i) {
          t.narrations.push_back({narrations[i], static_cast<double>(i)});
          c.members.push_back(i);
        }
        const auto id = ParseTemplateId(template_name);
        if (!id) throw Error(ErrorCode::kInvalidArgument, "unknown template " + template_name);
        return RenderOpenQAPrompt(c, t, GetTemplate(*id));
      },
      py::arg("narrations"), py::arg("template") = "openqa_llama");
  m.def(
      "render_closeqa_prompt",
      [](const std::string& q, const std::string& a) {
        return RenderCloseQAPrompt(q, a, GetTemplate(TemplateId::kCloseQALlama));
      },
      py::arg("question"), py::arg("answer"));
  m.def("parse_openqa_completion", [](const std::string& raw) {
    const OpenQAParse p = ParseOpenQACompletion(raw);
    return py::make_tuple(std::string(ParseStatusName(p.status)), p.question, p.answer);
  });
  m.def("prompt_hash", &PromptHash);

  m.def(
      "focal_loss",
      [](const std::vector<double>& scores, const std::vector<bool>& labels, double gamma, double alpha) {
        const auto r = FocalLoss(scores, labels, {gamma, alpha});
        return py::make_tuple(r.value, r.gradient);
      },
      py::arg("scores"), py::arg("labels"), py::arg("gamma") = 2.0, py::arg("alpha") = 0.25);
  m.def(
      "diou_loss",
      [](const TemporalWindow& pred, const TemporalWindow& gt) {
        const auto r = DiouLoss1D(pred, gt);
        return py::make_tuple(r.value, r.d_start, r.d_end);
      },
      py::arg("pred"), py::arg("gt"));
  m.def(
      "token_cross_entropy",
      [](const std::vector<std::vector<double>>& dists, const std::vector<std::size_t>& targets) {
        const auto r = TokenCrossEntropy(dists, targets);
        return py::make_tuple(r.value, r.gradient);
      },
      py::arg("distributions"), py::arg("targets"));
  m.def(
      "combine_losses",
      [](double f, double d, double q) {
        const auto b = CombineLosses(f, d, q);
        py::dict out;
        out["focal"] = b.focal;
        out["diou"] = b.diou;
        out["vlg"] = b.vlg;
        out["qa"] = b.qa;
        out["total"] = b.total;
        return out;
      },
      py::arg("focal"), py::arg("diou"), py::arg("qa"));
  m.def(
      "decode_windows",
      [](const std::vector<double>& scores, const std::vector<std::array<double, 2>>& offsets, double duration_s,
         double score_threshold, double nms_iou, std::size_t top_k) {
        return DecodeWindows(HeadOutputs{scores, offsets}, duration_s, {score_threshold, nms_iou, top_k});
      },
      py::arg("scores"), py::arg("offsets"), py::arg("duration_s"), py::arg("score_threshold") = 0.05,
      py::arg("nms_iou") = 0.5, py::arg("top_k") = 5);

  m.def("iou", &Iou1D);
  m.def("rouge_l", [](const std::string& h, const std::string& r) { return RougeLF(h, r); });
  m.def("meteor", [](const std::string& h, const std::string& r) { return MeteorExact(h, r); });
  m.def("sentence_similarity", [](const std::string& h, const std::string& r) {
    return SentenceSimilarity(h, r, TrigramEmbedder());
  });
  m.def(
      "closeqa_accuracy",
      [](const std::vector<std::vector<AnswerPair>>& runs) {
        const auto a = CloseQAAccuracy(runs);
        return py::make_tuple(a.mean, a.std);
      },
      py::arg("runs"));
  m.def(
      "shuffled_choices",
      [](const std::string& answer, const std::array<std::string, 3>& wrong, std::uint64_t seed) {
        QASample s{"clip", "", "?", answer, {0, 1}};
        s.wrong_answers = wrong;
        return ShuffledChoices(s, seed);
      },
      py::arg("answer"), py::arg("wrong_answers"), py::arg("seed"));

  // File-level commands mirror the CLI subcommands.
  m.def(
      "ingest",
      [](const std::string& input, const std::string& output, std::optional<std::string> rejects) {
        const auto s = CmdIngest({input, output, rejects});
        return py::make_tuple(s.accepted, s.rejected);
      },
      py::arg("input"), py::arg("output"), py::arg("rejects") = py::none());
  m.def(
      "synthesize",
      [](const std::string& narrations, const std::string& output, const std::string& records,
         std::optional<std::string> mock, std::optional<std::string> base_url, std::uint64_t seed, int parallelism,
         bool distractors) {
        SynthesizeOptions o;
        o.narrations = narrations;
        o.output = output;
        o.records = records;
        o.mock_fixture = mock;
        if (base_url) o.endpoint.base_url = *base_url;
        o.seed = seed;
        o.endpoint.parallelism = parallelism;
        o.distractors = distractors;
        SynthesizeSummary s;
        {
          py::gil_scoped_release release;
          s = CmdSynthesize(o);
        }
        py::dict d;
        d["clips"] = s.clips;
        d["chunks"] = s.chunks;
        d["samples"] = s.samples;
        d["openqa_failed"] = s.openqa_failed;
        d["closeqa_failed"] = s.closeqa_failed;
        return d;
      },
      py::arg("narrations"), py::arg("output"), py::arg("records"), py::arg("mock") = py::none(),
      py::arg("base_url") = py::none(), py::arg("seed") = 0, py::arg("parallelism") = 1,
      py::arg("distractors") = true);
  m.def(
      "filter_blind",
      [](const std::string& input, const std::string& output, const std::string& report, const std::string& answerer,
         std::optional<std::string> train, std::optional<std::string> script) {
        FilterOptions f;
        f.input = input;
        f.output = output;
        f.report = report;
        f.answerer = answerer;
        f.train = train;
        f.script = script;
        const auto s = CmdFilterBlind(f);
        return py::make_tuple(s.total, s.removed, s.kept);
      },
      py::arg("input"), py::arg("output"), py::arg("report"), py::arg("answerer") = "prior",
      py::arg("train") = py::none(), py::arg("script") = py::none());
  m.def(
      "evaluate",
      [](const std::string& task, const std::string& gt, const std::vector<std::string>& preds,
         const std::string& output, const std::string& dataset_id) {
        return ReportDict(CmdEval({task, gt, preds, output, dataset_id, std::nullopt}));
      },
      py::arg("task"), py::arg("ground_truth"), py::arg("predictions"), py::arg("output"),
      py::arg("dataset_id") = "");
  m.def(
      "stats",
      [](const std::string& input, const std::string& output, std::optional<std::string> narrations) {
        return Dump(CmdStats({input, narrations, output, std::nullopt}));
      },
      py::arg("input"), py::arg("output"), py::arg("narrations") = py::none());
  m.def(
      "decode",
      [](const std::string& input, const std::string& output) { return CmdDecode({input, output, {}}); },
      py::arg("input"), py::arg("output"));
  m.def("format_percent", &FormatPercent, py::arg("value"), py::arg("dispersion") = py::none());
  m.def("set_quiet", &SetLogMuted);
}
