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

// egoqa: grounded egocentric QA dataset synthesis and evaluation.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "egoqa/error.hpp"
#include "egoqa/pipeline.hpp"
#include "egoqa/util.hpp"

namespace {

using egoqa::Error;
using egoqa::ErrorCode;

// Precedence is flag > environment > config file. Options missing from the
// command line are appended from the environment first, then from the config
// file, so anything given explicitly wins.
const std::map<std::string, std::string> kEnvOptions = {{"base-url", "EGOQA_BASE_URL"}};

std::vector<std::string> ResolveArgs(CLI::App& app, int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  std::string config_path;
  CLI::App* sub = nullptr;
  std::set<std::string> given;
  for (std::size_t i = 1; i < args.size(); ++i) {
    const std::string& arg = args[i];
    if (arg.rfind("--", 0) == 0) {
      const auto eq = arg.find('=');
      const std::string name = arg.substr(2, eq == std::string::npos ? std::string::npos : eq - 2);
      given.insert(name);
      if (name == "config") {
        if (eq != std::string::npos) {
          config_path = arg.substr(eq + 1);
        } else if (i + 1 < args.size()) {
          config_path = args[i + 1];
        }
      }
    } else if (!sub) {
      for (CLI::App* candidate : app.get_subcommands({})) {
        if (candidate->get_name() == arg) sub = candidate;
      }
    }
  }
  if (!sub) return args;

  nlohmann::json config = nlohmann::json::object();
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw Error(ErrorCode::kUnreadableInput, "config " + config_path);
    config = nlohmann::json::parse(in, nullptr, false);
    if (config.is_discarded() || !config.is_object()) {
      throw Error(ErrorCode::kSchemaMismatch, "config must be a JSON object: " + config_path);
    }
  }
  const nlohmann::json* section =
      config.contains(sub->get_name()) && config[sub->get_name()].is_object()
          ? &config[sub->get_name()]
          : nullptr;

  for (CLI::Option* opt : sub->get_options()) {
    for (const std::string& name : opt->get_lnames()) {
      if (given.count(name)) continue;
      if (auto env = kEnvOptions.find(name); env != kEnvOptions.end()) {
        if (const char* v = std::getenv(env->second.c_str())) {
          args.push_back("--" + name);
          args.push_back(v);
          continue;
        }
      }
      const nlohmann::json* value = nullptr;
      if (section && section->contains(name)) {
        value = &(*section)[name];
      } else if (config.contains(name) && !config[name].is_object()) {
        value = &config[name];
      }
      if (!value) continue;
      if (value->is_boolean()) {
        if (value->get<bool>()) args.push_back("--" + name);
        continue;
      }
      args.push_back("--" + name);
      auto push = [&](const nlohmann::json& v) {
        args.push_back(v.is_string() ? v.get<std::string>() : v.dump());
      };
      if (value->is_array()) {
        for (const auto& v : *value) push(v);
      } else {
        push(*value);
      }
    }
  }
  return args;
}

void AddEndpointFlags(CLI::App* cmd, egoqa::EndpointConfig& ep, std::string& style) {
  cmd->add_option("--base-url", ep.base_url, "Completion endpoint base URL (EGOQA_BASE_URL)")
      ->capture_default_str();
  cmd->add_option("--model", ep.model, "Model name")->capture_default_str();
  cmd->add_option("--temperature", ep.temperature)->capture_default_str();
  cmd->add_option("--max-tokens", ep.max_tokens)->capture_default_str();
  cmd->add_option("--timeout", ep.request_timeout_s, "Request timeout in seconds")->capture_default_str();
  cmd->add_option("--max-retries", ep.max_retries)->capture_default_str()->check(CLI::NonNegativeNumber);
  cmd->add_option("--parallelism", ep.parallelism)->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--api-style", style, "chat or completion")
      ->capture_default_str()
      ->check(CLI::IsMember({"chat", "completion"}));
}

void FinishEndpoint(egoqa::EndpointConfig& ep, const std::string& style) {
  ep.style = style == "completion" ? egoqa::ApiStyle::kCompletion : egoqa::ApiStyle::kChat;
  if (const char* key = std::getenv("EGOQA_API_KEY")) ep.api_key = key;
}

egoqa::TemplateId TemplateOrThrow(const std::string& name) {
  auto id = egoqa::ParseTemplateId(name);
  if (!id) throw Error(ErrorCode::kInvalidArgument, "unknown template " + name);
  return *id;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"egoqa: grounded QA synthesis and evaluation for egocentric narrations"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path;
  app.add_option("--config", config_path, "JSON config file (per-subcommand sections allowed)");
  bool quiet = false;
  app.add_flag("-q,--quiet", quiet, "Suppress progress logging");

  // ingest
  egoqa::IngestOptions ingest;
  std::string ingest_rejects;
  auto* c_ingest = app.add_subcommand("ingest", "Validate a narration export into narrations.jsonl");
  c_ingest->add_option("input", ingest.input)->required();
  c_ingest->add_option("-o,--output", ingest.output)->required();
  c_ingest->add_option("--rejects", ingest_rejects, "Write rejected rows with reasons");

  // synthesize
  egoqa::SynthesizeOptions synth;
  std::string synth_style = "chat", synth_openqa = "openqa_llama", synth_closeqa = "closeqa_llama";
  std::string synth_mock, synth_stats, synth_split = "train";
  bool synth_no_distractors = false;
  auto* c_synth = app.add_subcommand("synthesize", "Generate OpenQA/CloseQA samples from narrations");
  c_synth->add_option("narrations", synth.narrations)->required();
  c_synth->add_option("-o,--output", synth.output)->required();
  c_synth->add_option("--records", synth.records, "Generation audit records")->required();
  c_synth->add_option("--stats", synth_stats, "Dataset statistics JSON");
  c_synth->add_option("--mock", synth_mock, "Scripted completion fixture instead of a live endpoint");
  c_synth->add_option("--template", synth_openqa)->capture_default_str()
      ->check(CLI::IsMember({"openqa_llama", "openqa_chat"}));
  c_synth->add_option("--closeqa-template", synth_closeqa)->capture_default_str();
  c_synth->add_flag("--no-distractors", synth_no_distractors);
  c_synth->add_option("--seed", synth.seed)->capture_default_str();
  c_synth->add_option("--max-sentences", synth.bounds.max_sentences)->capture_default_str();
  c_synth->add_option("--max-span", synth.bounds.max_span_s, "Seconds")->capture_default_str();
  c_synth->add_option("--split", synth_split)->capture_default_str()
      ->check(CLI::IsMember({"train", "val", "test"}));
  c_synth->add_option("--batch-chunks", synth.batch_chunks)->capture_default_str();
  AddEndpointFlags(c_synth, synth.endpoint, synth_style);

  // distract
  egoqa::DistractOptions distract;
  std::string distract_style = "chat", distract_mock, distract_template = "closeqa_llama";
  auto* c_distract = app.add_subcommand("distract", "Add distractors to an existing qa.jsonl");
  c_distract->add_option("input", distract.input)->required();
  c_distract->add_option("-o,--output", distract.output)->required();
  c_distract->add_option("--records", distract.records)->required();
  c_distract->add_option("--mock", distract_mock);
  c_distract->add_option("--template", distract_template)->capture_default_str();
  c_distract->add_option("--seed", distract.seed)->capture_default_str();
  AddEndpointFlags(c_distract, distract.endpoint, distract_style);

  // filter-blind
  egoqa::FilterOptions filter;
  std::string filter_train, filter_script;
  bool filter_reuse_shuffle = false;
  auto* c_filter = app.add_subcommand("filter-blind", "Remove questions a blind answerer always gets right");
  c_filter->add_option("input", filter.input)->required();
  c_filter->add_option("-o,--output", filter.output)->required();
  c_filter->add_option("--report", filter.report)->required();
  c_filter->add_option("--seeds", filter.seeds, "Exactly ten trial seeds")->expected(10)->capture_default_str();
  c_filter->add_option("--answerer", filter.answerer)->capture_default_str()
      ->check(CLI::IsMember({"prior", "random", "scripted"}));
  c_filter->add_option("--train", filter_train, "Training qa.jsonl for the frequency prior");
  c_filter->add_option("--script", filter_script, "Answer script for the scripted answerer");
  c_filter->add_option("--parallelism", filter.parallelism)->capture_default_str()->check(CLI::PositiveNumber);
  c_filter->add_flag("--reuse-shuffle", filter_reuse_shuffle, "Use one choice order for all trials");
  c_filter->add_option("--shuffle-seed", filter.shuffle_seed)->capture_default_str();

  // eval
  egoqa::EvalOptions eval;
  std::string eval_embed_url, eval_embed_model = "all-MiniLM-L6-v2";
  auto* c_eval = app.add_subcommand("eval", "Score predictions against ground truth");
  c_eval->add_option("--task", eval.task)->required()->check(CLI::IsMember({"vlg", "openqa", "closeqa"}));
  c_eval->add_option("--gt", eval.ground_truth, "Ground-truth qa.jsonl")->required();
  c_eval->add_option("--pred", eval.predictions, "Predictions (repeat 5x for closeqa)")->required();
  c_eval->add_option("-o,--output", eval.output)->required();
  c_eval->add_option("--dataset-id", eval.dataset_id);
  c_eval->add_option("--embed-url", eval_embed_url, "Remote embeddings base URL; offline if unset");
  c_eval->add_option("--embed-model", eval_embed_model)->capture_default_str();

  // stats
  egoqa::StatsOptions stats;
  std::string stats_narrations, stats_tsv;
  auto* c_stats = app.add_subcommand("stats", "Dataset statistics and plot data");
  c_stats->add_option("input", stats.input)->required();
  c_stats->add_option("-o,--output", stats.output)->required();
  c_stats->add_option("--narrations", stats_narrations, "narrations.jsonl for sentence density");
  c_stats->add_option("--tsv-dir", stats_tsv, "Directory for histogram TSVs");

  // decode
  egoqa::DecodeCommandOptions decode;
  auto* c_decode = app.add_subcommand("decode", "Turn exported head outputs into ranked windows");
  c_decode->add_option("input", decode.input)->required();
  c_decode->add_option("-o,--output", decode.output)->required();
  c_decode->add_option("--score-threshold", decode.decode.score_threshold)->capture_default_str();
  c_decode->add_option("--nms-iou", decode.decode.nms_iou)->capture_default_str();
  c_decode->add_option("--top-k", decode.decode.top_k)->capture_default_str();

  try {
    std::vector<std::string> args = ResolveArgs(app, argc, argv);
    std::vector<char*> cargs;
    for (std::string& a : args) cargs.push_back(a.data());
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const Error& e) {
    std::cerr << "egoqa: " << e.what() << '\n';
    return egoqa::ExitCodeFor(e.code());
  }
  egoqa::SetLogMuted(quiet);

  try {
    if (*c_ingest) {
      if (!ingest_rejects.empty()) ingest.rejects = ingest_rejects;
      egoqa::CmdIngest(ingest);
    } else if (*c_synth) {
      FinishEndpoint(synth.endpoint, synth_style);
      if (!synth_mock.empty()) synth.mock_fixture = synth_mock;
      if (!synth_stats.empty()) synth.stats = synth_stats;
      synth.openqa_template = TemplateOrThrow(synth_openqa);
      synth.closeqa_template = TemplateOrThrow(synth_closeqa);
      synth.distractors = !synth_no_distractors;
      synth.split = *egoqa::ParseSplit(synth_split);
      const auto s = egoqa::CmdSynthesize(synth);
      egoqa::LogInfo("synthesize: " + std::to_string(s.samples) + " samples from " +
                     std::to_string(s.chunks) + " chunks over " + std::to_string(s.clips) + " clips");
    } else if (*c_distract) {
      FinishEndpoint(distract.endpoint, distract_style);
      if (!distract_mock.empty()) distract.mock_fixture = distract_mock;
      distract.closeqa_template = TemplateOrThrow(distract_template);
      egoqa::CmdDistract(distract);
    } else if (*c_filter) {
      if (!filter_train.empty()) filter.train = filter_train;
      if (!filter_script.empty()) filter.script = filter_script;
      filter.reshuffle = !filter_reuse_shuffle;
      egoqa::CmdFilterBlind(filter);
    } else if (*c_eval) {
      if (!eval_embed_url.empty()) {
        egoqa::EndpointConfig ep;
        ep.base_url = eval_embed_url;
        ep.model = eval_embed_model;
        FinishEndpoint(ep, "chat");
        eval.embedder = ep;
      }
      const auto report = egoqa::CmdEval(eval);
      for (const auto& [name, m] : report.metrics) {
        std::cout << name << '\t' << egoqa::FormatPercent(m.value, m.dispersion) << '\n';
      }
    } else if (*c_stats) {
      if (!stats_narrations.empty()) stats.narrations = stats_narrations;
      if (!stats_tsv.empty()) stats.tsv_dir = stats_tsv;
      egoqa::CmdStats(stats);
    } else if (*c_decode) {
      egoqa::CmdDecode(decode);
    }
  } catch (const Error& e) {
    std::cerr << "egoqa: " << e.what() << '\n';
    return egoqa::ExitCodeFor(e.code());
  } catch (const std::exception& e) {
    std::cerr << "egoqa: internal error: " << e.what() << '\n';
    return 4;
  }
  return 0;
}
