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

#include "egoqa/qa_synthesis.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <exception>
#include <thread>

#include "egoqa/error.hpp"
#include "egoqa/util.hpp"

namespace egoqa {

namespace {

constexpr std::string_view kOpenQALlamaText =
    R"PROMPT(<s>[INST] <<SYS>>
You are an AI Assistant and always write the output of your response in JSON. I will provide you with a series of narrations that depict my behavior. You should generate one QA pair based on the narrations in the format of {"Q": <question>, "A": <answer>}. In the narrations, "C" represents me, and "O" represents someone else. Use as much information as possible from narrations to generate the question, and the question you generate should be able to be answered using the information provided in the narrations. The question should be in the past tense. The question should be within 10 words, and the answer should be within 5 words. <</SYS>>

C pours hot water from the frying pan in his left hand into the bowl in his right hand. [/INST] {"Q": "What did I pour in the bowl?", "A": "boiling water"} </s>
<s>[INST] C searches through the cabinet. C closes the cabinet. C picks the tin from the cabinet. C places the tin on the counter. [/INST] {"Q": "Where was the tin before I took it?", "A": "at the cabinet"} </s>
<s>[INST] C turns on sink knob. C washes the cucumber on the sink. C turns off sink knob. [/INST] {"Q": "Did I wash the cucumber?", "A": "yes"} </s>
<s>[INST] <narrations> [/INST])PROMPT";

constexpr std::string_view kOpenQAChatText =
    R"PROMPT(You're an AI Assistant, outputting responses in JSON. I'll give behavior narrations, in which "C" is me, "O" is someone else. Generate a QA pair like {"Q": <question>, "A": <answer>} based on them. The question should use the narration info, be in the past tense, <= 10 words, and the answer <= 5 words.

User: C pours hot water from the frying pan in his left hand into the bowl in his right hand
Assistant: {"Q": "What did I pour in the bowl?", "A": "boiling water"}

User: C searches through the cabinet. C closes the cabinet. C picks the tin from the cabinet. C places the tin on the counter.
Assistant: {"Q": "Where was the tin before I took it?", "A": "at the cabinet"}

User: C turns on sink knob. C washes the cucumber on the sink. C turns off sink knob.
Assistant: {"Q": "Did I wash the cucumber?", "A": "yes"}

User: <narrations>)PROMPT";

constexpr std::string_view kCloseQALlamaText =
    R"PROMPT(<s>[INST] <<SYS>>
I'll provide a question and its correct answer. Generate three plausible, but incorrect, answers that closely resemble the correct one Make it challenging to identify the right answer. No preamble, get right to the three wrong answers and present them in a list format. <</SYS>>

Question: How many frying pans can i see on the shelf? Correct Answer: two pieces. Wrong Answers: [/INST] ["one piece", "three piece", "five pieces"] </s>
<s>[INST] Question: What colour bowl did i carry from the plate stand? Correct Answer: green. Wrong Answers: [/INST] ["blue", "black", "white"] </s>
<s>[INST] Question: What did i pour in the bowl? Correct Answer: boiling water. Wrong Answers: [/INST] ["hot oil", "steamed milk", "warm broth"] </s>
<s>[INST] Question: <question> Correct Answer: <answer>. Wrong Answers: [/INST])PROMPT";

const PromptTemplate kTemplates[] = {
    {TemplateId::kOpenQALlama, kOpenQALlamaText},
    {TemplateId::kOpenQAChat, kOpenQAChatText},
    {TemplateId::kCloseQALlama, kCloseQALlamaText},
};

// Each slot occurs once in the variable tail. The OpenQA instruction text
// also says <question>/<answer> literally; those are not slots there.
std::string FillSlot(std::string_view text, std::string_view slot, std::string_view value) {
  const auto pos = text.rfind(slot);
  if (pos == std::string_view::npos) {
    throw Error(ErrorCode::kTemplateMismatch, "template has no slot " + std::string(slot));
  }
  std::string out(text.substr(0, pos));
  out += value;
  out += text.substr(pos + slot.size());
  return out;
}

}  // namespace

const PromptTemplate& GetTemplate(TemplateId id) {
  for (const PromptTemplate& t : kTemplates) {
    if (t.id == id) return t;
  }
  return kTemplates[0];
}

std::string_view TemplateName(TemplateId id) {
  switch (id) {
    case TemplateId::kOpenQALlama: return "openqa_llama";
    case TemplateId::kOpenQAChat: return "openqa_chat";
    case TemplateId::kCloseQALlama: return "closeqa_llama";
  }
  return "openqa_llama";
}

std::optional<TemplateId> ParseTemplateId(std::string_view name) {
  for (const PromptTemplate& t : kTemplates) {
    if (TemplateName(t.id) == name) return t.id;
  }
  return std::nullopt;
}

std::string RenderOpenQAPrompt(const NarrationChunk& chunk, const NarrationTrack& track,
                               const PromptTemplate& prompt) {
  if (!prompt.is_openqa()) {
    throw Error(ErrorCode::kTemplateMismatch, "expected an openqa template");
  }
  if (chunk.members.empty()) throw Error(ErrorCode::kTemplateMismatch, "chunk has no members");
  if (chunk.clip_uid != track.clip_uid) {
    throw Error(ErrorCode::kTemplateMismatch, "chunk does not belong to " + track.clip_uid);
  }
  std::string joined;
  for (std::size_t idx : chunk.members) {
    if (idx >= track.narrations.size()) {
      throw Error(ErrorCode::kTemplateMismatch, "chunk member out of range");
    }
    if (!joined.empty()) joined.push_back(' ');
    joined += track.narrations[idx].text;
  }
  return FillSlot(prompt.text, "<narrations>", joined);
}

std::string RenderCloseQAPrompt(std::string_view question, std::string_view answer,
                                const PromptTemplate& prompt) {
  if (prompt.is_openqa()) throw Error(ErrorCode::kTemplateMismatch, "expected a closeqa template");
  if (question.empty() || answer.empty()) {
    throw Error(ErrorCode::kTemplateMismatch, "question and answer must be non-empty");
  }
  const std::string_view text = prompt.text;
  const auto qpos = text.rfind("<question>");
  const auto apos = text.rfind("<answer>");
  if (qpos == std::string_view::npos || apos == std::string_view::npos || apos < qpos) {
    throw Error(ErrorCode::kTemplateMismatch, "closeqa template lacks its slots");
  }
  std::string out(text.substr(0, qpos));
  out += question;
  out += text.substr(qpos + 10, apos - qpos - 10);
  out += answer;
  out += text.substr(apos + 8);
  return out;
}

std::string_view ParseStatusName(ParseStatus status) {
  switch (status) {
    case ParseStatus::kOk: return "ok";
    case ParseStatus::kMalformed: return "malformed";
    case ParseStatus::kConstraintViolation: return "constraint_violation";
  }
  return "malformed";
}

namespace {

// End (exclusive) of the bracketed JSON value opening at `open`, honouring
// string literals, or npos when unbalanced.
std::size_t MatchBracket(std::string_view raw, std::size_t open) {
  const char opener = raw[open];
  const char closer = opener == '{' ? '}' : ']';
  int depth = 0;
  bool in_string = false;
  for (std::size_t i = open; i < raw.size(); ++i) {
    const char c = raw[i];
    if (in_string) {
      if (c == '\\') {
        ++i;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
    } else if (c == opener) {
      ++depth;
    } else if (c == closer && --depth == 0) {
      return i + 1;
    }
  }
  return std::string_view::npos;
}

// First JSON value of the given bracket kind accepted by `accept`.
template <typename Accept>
std::optional<nlohmann::json> FindJson(std::string_view raw, char opener, Accept accept) {
  for (std::size_t pos = raw.find(opener); pos != std::string_view::npos;
       pos = raw.find(opener, pos + 1)) {
    const std::size_t end = MatchBracket(raw, pos);
    if (end == std::string_view::npos) continue;
    auto value = nlohmann::json::parse(raw.substr(pos, end - pos), nullptr, false);
    if (!value.is_discarded() && accept(value)) return value;
  }
  return std::nullopt;
}

std::string Trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

OpenQAParse ParseOpenQACompletion(std::string_view raw) {
  OpenQAParse out;
  auto obj = FindJson(raw, '{', [](const nlohmann::json& v) {
    return v.is_object() && v.contains("Q") && v.contains("A") && v["Q"].is_string() &&
           v["A"].is_string();
  });
  if (!obj) {
    out.detail = "no object with string fields Q and A";
    return out;
  }
  out.question = Trim((*obj)["Q"].get<std::string>());
  out.answer = Trim((*obj)["A"].get<std::string>());
  out.status = ParseStatus::kConstraintViolation;
  if (out.question.empty() || out.answer.empty()) {
    out.detail = "empty question or answer";
  } else if (out.question.back() != '?') {
    out.detail = "question does not end with '?'";
  } else if (WordCount(out.question) > kMaxQuestionWords) {
    out.detail = "question longer than 10 words";
  } else if (WordCount(out.answer) > kMaxAnswerWords) {
    out.detail = "answer longer than 5 words";
  } else {
    out.status = ParseStatus::kOk;
  }
  return out;
}

CloseQAParse ParseCloseQACompletion(std::string_view raw, std::string_view correct_answer) {
  CloseQAParse out;
  auto arr = FindJson(raw, '[', [](const nlohmann::json& v) {
    return v.is_array() &&
           std::all_of(v.begin(), v.end(), [](const nlohmann::json& e) { return e.is_string(); });
  });
  if (!arr) {
    out.detail = "no list of strings";
    return out;
  }
  if (arr->size() != 3) {
    out.detail = "expected 3 distractors, got " + std::to_string(arr->size());
    return out;
  }
  std::vector<std::string> seen{NormalizeAnswer(correct_answer)};
  for (std::size_t i = 0; i < 3; ++i) {
    out.distractors[i] = Trim((*arr)[i].get<std::string>());
    std::string norm = NormalizeAnswer(out.distractors[i]);
    if (norm.empty() || std::find(seen.begin(), seen.end(), norm) != seen.end()) {
      out.status = ParseStatus::kConstraintViolation;
      out.detail = "distractor '" + out.distractors[i] + "' is empty or duplicates another choice";
      return out;
    }
    seen.push_back(std::move(norm));
  }
  out.status = ParseStatus::kOk;
  return out;
}

nlohmann::json GenerationRecord::ToJson() const {
  nlohmann::json j = {{"kind", kind}, {"clip_uid", clip_uid}};
  if (chunk_index) j["chunk_index"] = *chunk_index;
  if (!question.empty()) j["question"] = question;
  if (!answer.empty()) j["answer"] = answer;
  j["prompt_hash"] = prompt_hash;
  j["raw_completion"] = raw_completion;
  j["parse_status"] = ParseStatusName(status);
  j["attempt"] = attempts;
  if (status == ParseStatus::kOk) j["payload"] = payload;
  return j;
}

std::size_t SynthesisResult::failed() const {
  return static_cast<std::size_t>(std::count_if(
      records.begin(), records.end(),
      [](const GenerationRecord& r) { return r.status != ParseStatus::kOk; }));
}

double SynthesisResult::error_rate() const {
  return records.empty() ? 0.0
                         : static_cast<double>(failed()) / static_cast<double>(records.size());
}

void ParallelFor(std::size_t n, int parallelism, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers =
      std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, parallelism)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mu;
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&] {
      for (std::size_t i = next++; i < n && !failed.load(); i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mu);
          if (!first_error) first_error = std::current_exception();
          failed.store(true);
        }
      }
    });
  }
  for (auto& t : threads) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

namespace {

struct Attempted {
  std::string raw;
  int attempts = 0;
};

// Calls the endpoint until `parse_ok(raw)` holds or the retry budget runs
// out. Transport failures have their own budget and end the batch.
template <typename ParseOk>
Attempted RequestWithRetries(CompletionEndpoint& endpoint, const std::string& prompt,
                             int max_retries, ParseOk parse_ok) {
  Attempted out;
  int transport_failures = 0;
  while (true) {
    try {
      out.raw = endpoint.Complete(prompt);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kEndpointUnavailable || ++transport_failures > max_retries) {
        throw;
      }
      continue;
    }
    ++out.attempts;
    if (parse_ok(out.raw) || out.attempts > max_retries) return out;
  }
}

double Seconds(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - since).count();
}

void LogThroughput(std::string_view what, std::size_t produced, std::size_t failed, double secs) {
  char line[160];
  std::snprintf(line, sizeof(line), "%.*s: %zu ok, %zu failed in %.3f s (%.0f per hour)",
                static_cast<int>(what.size()), what.data(), produced, failed, secs,
                secs > 0 ? static_cast<double>(produced) * 3600.0 / secs : 0.0);
  LogInfo(line);
}

}  // namespace

SynthesisResult GenerateOpenQA(std::span<const NarrationTrack> tracks,
                               std::span<const NarrationChunk> chunks,
                               CompletionEndpoint& endpoint, const EndpointConfig& config,
                               const PromptTemplate& prompt, Split split) {
  config.Validate();
  if (!prompt.is_openqa()) throw Error(ErrorCode::kTemplateMismatch, "expected openqa template");
  std::map<std::string_view, const NarrationTrack*> by_uid;
  for (const NarrationTrack& t : tracks) by_uid[t.clip_uid] = &t;

  // Render up front so template errors surface before any request.
  std::vector<std::string> prompts(chunks.size());
  for (std::size_t i = 0; i < chunks.size(); ++i) {
    auto it = by_uid.find(chunks[i].clip_uid);
    if (it == by_uid.end()) throw Error(ErrorCode::kUnknownClip, chunks[i].clip_uid);
    prompts[i] = RenderOpenQAPrompt(chunks[i], *it->second, prompt);
  }

  const auto started = std::chrono::steady_clock::now();
  std::vector<std::optional<GenerationRecord>> records(chunks.size());
  std::vector<std::optional<QASample>> samples(chunks.size());
  SynthesisResult result;
  try {
    ParallelFor(chunks.size(), config.parallelism, [&](std::size_t i) {
      OpenQAParse parsed;
      Attempted got = RequestWithRetries(endpoint, prompts[i], config.max_retries,
                                         [&](const std::string& raw) {
                                           parsed = ParseOpenQACompletion(raw);
                                           return parsed.status == ParseStatus::kOk;
                                         });
      GenerationRecord rec;
      rec.kind = "openqa";
      rec.clip_uid = chunks[i].clip_uid;
      rec.chunk_index = chunks[i].chunk_index;
      rec.prompt_hash = PromptHash(prompts[i]);
      rec.raw_completion = std::move(got.raw);
      rec.status = parsed.status;
      rec.attempts = got.attempts;
      if (parsed.status == ParseStatus::kOk) {
        rec.payload = {{"Q", parsed.question}, {"A", parsed.answer}};
        QASample s;
        s.clip_uid = chunks[i].clip_uid;
        s.question = parsed.question;
        s.answer = parsed.answer;
        s.window = chunks[i].span;
        s.split = split;
        s.source = Source::kSynthesized;
        samples[i] = std::move(s);
      } else {
        rec.payload = {{"detail", parsed.detail}};
      }
      records[i] = std::move(rec);
    });
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kEndpointUnavailable) throw;
    result.fatal_error = e.what();
  }

  std::vector<std::size_t> order(chunks.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (chunks[a].clip_uid != chunks[b].clip_uid) return chunks[a].clip_uid < chunks[b].clip_uid;
    return chunks[a].chunk_index < chunks[b].chunk_index;
  });
  for (std::size_t i : order) {
    if (samples[i]) result.samples.push_back(std::move(*samples[i]));
    if (records[i]) result.records.push_back(std::move(*records[i]));
  }
  result.elapsed_s = Seconds(started);
  LogThroughput("openqa pairs", result.samples.size(), result.failed(), result.elapsed_s);
  return result;
}

SynthesisResult AttachDistractors(std::span<const QASample> samples,
                                  CompletionEndpoint& endpoint, const EndpointConfig& config,
                                  const PromptTemplate& prompt) {
  config.Validate();
  std::vector<std::string> prompts(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].wrong_answers) {
      throw Error(ErrorCode::kInvalidArgument, "sample already has distractors");
    }
    prompts[i] = RenderCloseQAPrompt(samples[i].question, samples[i].answer, prompt);
  }

  const auto started = std::chrono::steady_clock::now();
  SynthesisResult result;
  result.samples.assign(samples.begin(), samples.end());
  std::vector<std::optional<GenerationRecord>> records(samples.size());
  try {
    ParallelFor(samples.size(), config.parallelism, [&](std::size_t i) {
      CloseQAParse parsed;
      Attempted got = RequestWithRetries(endpoint, prompts[i], config.max_retries,
                                         [&](const std::string& raw) {
                                           parsed = ParseCloseQACompletion(raw, samples[i].answer);
                                           return parsed.status == ParseStatus::kOk;
                                         });
      GenerationRecord rec;
      rec.kind = "closeqa";
      rec.clip_uid = samples[i].clip_uid;
      rec.question = samples[i].question;
      rec.answer = samples[i].answer;
      rec.prompt_hash = PromptHash(prompts[i]);
      rec.raw_completion = std::move(got.raw);
      rec.status = parsed.status;
      rec.attempts = got.attempts;
      if (parsed.status == ParseStatus::kOk) {
        rec.payload = parsed.distractors;
        result.samples[i].wrong_answers = parsed.distractors;
      } else {
        rec.payload = {{"detail", parsed.detail}};
      }
      records[i] = std::move(rec);
    });
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kEndpointUnavailable) throw;
    result.fatal_error = e.what();
  }
  for (auto& r : records) {
    if (r) result.records.push_back(std::move(*r));
  }
  result.elapsed_s = Seconds(started);
  LogThroughput("closeqa samples", result.records.size() - result.failed(), result.failed(),
                result.elapsed_s);
  return result;
}

std::vector<std::string> ShuffledChoices(const QASample& sample, std::uint64_t seed) {
  if (!sample.wrong_answers) throw Error(ErrorCode::kMissingDistractors, sample.question);
  std::vector<std::string> choices{sample.answer};
  choices.insert(choices.end(), sample.wrong_answers->begin(), sample.wrong_answers->end());
  std::uint64_t key = Fnv1a64(sample.clip_uid);
  key = Fnv1a64("\x1f", key);
  key = Fnv1a64(sample.question, key);
  key = Fnv1a64("\x1f", key);
  key = Fnv1a64(sample.answer, key);
  Rng rng(SplitMix64(seed) ^ key);
  rng.Shuffle(choices);
  return choices;
}

}  // namespace egoqa
