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

#include "egoqa/eval_metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <unordered_map>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "egoqa/error.hpp"
#include "egoqa/util.hpp"

namespace egoqa {

double Iou1D(const TemporalWindow& a, const TemporalWindow& b) {
  const double inter = std::max(0.0, std::min(a.end_s, b.end_s) - std::max(a.start_s, b.start_s));
  const double uni = a.length() + b.length() - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

VLGResult::VLGResult(const std::array<std::array<double, 2>, 2>& recall) : recall_(recall) {
  for (std::size_t m = 0; m < 2; ++m) {
    if (recall_[1][m] < recall_[0][m]) {
      throw Error(ErrorCode::kInvariantBreach, "recall@5 below recall@1");
    }
  }
  for (std::size_t k = 0; k < 2; ++k) {
    if (recall_[k][1] > recall_[k][0]) {
      throw Error(ErrorCode::kInvariantBreach, "recall at IoU 0.5 above IoU 0.3");
    }
  }
}

double VLGResult::recall(std::size_t k, double iou) const {
  const std::size_t ki = k == 1 ? 0 : 1;
  const std::size_t mi = iou < 0.4 ? 0 : 1;
  return recall_[ki][mi];
}

VLGResult VlgRecall(const std::map<std::string, PredictionSet>& predictions,
                    const std::map<std::string, TemporalWindow>& ground_truth) {
  std::string missing;
  for (const auto& [id, gt] : ground_truth) {
    if (!predictions.count(id)) missing += (missing.empty() ? "" : ",") + id;
  }
  if (!missing.empty()) throw Error(ErrorCode::kMissingQuery, missing);

  std::array<std::array<double, 2>, 2> hits{};
  for (const auto& [id, gt] : ground_truth) {
    const auto& windows = predictions.at(id).windows;
    // Best IoU within the top 1 and top 5; recall at m is best >= m.
    double best1 = -1.0, best5 = -1.0;
    for (std::size_t r = 0; r < windows.size() && r < 5; ++r) {
      const double iou = Iou1D(windows[r].window, gt);
      if (r == 0) best1 = iou;
      best5 = std::max(best5, iou);
    }
    for (std::size_t mi = 0; mi < 2; ++mi) {
      if (best1 >= kRecallIous[mi]) hits[0][mi] += 1.0;
      if (best5 >= kRecallIous[mi]) hits[1][mi] += 1.0;
    }
  }
  if (!ground_truth.empty()) {
    const double n = static_cast<double>(ground_truth.size());
    for (auto& row : hits) {
      for (double& h : row) h /= n;
    }
  }
  return VLGResult(hits);
}

std::vector<std::string> MetricTokens(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (unsigned char c : text) {
    if (std::isalnum(c) || c >= 0x80) {
      current.push_back(static_cast<char>(std::tolower(c)));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

namespace {

std::size_t LcsLength(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

struct Alignment {
  int matches = 0;
  int chunks = 0;
};

bool Better(const Alignment& x, const Alignment& y) {
  return x.matches != y.matches ? x.matches > y.matches : x.chunks < y.chunks;
}

// Exhaustive memoized search over injective hyp->ref token matchings. State:
// next hyp position, set of used ref positions, ref position matched to the
// previous hyp token (or -1).
class AlignmentSearch {
 public:
  static constexpr std::size_t kStateBudget = 1 << 21;

  AlignmentSearch(const std::vector<std::string>& hyp, const std::vector<std::string>& ref)
      : hyp_(hyp), ref_(ref) {}

  std::optional<Alignment> Run() {
    if (ref_.size() > 63) return std::nullopt;
    Alignment a = Solve(0, 0, -1);
    if (exhausted_) return std::nullopt;
    return a;
  }

 private:
  Alignment Solve(std::size_t i, std::uint64_t used, int prev) {
    if (i == hyp_.size() || exhausted_) return {};
    const std::uint64_t key = (static_cast<std::uint64_t>(i) * 65 + static_cast<std::uint64_t>(prev + 1));
    auto& per_pos = memo_[key];
    if (auto it = per_pos.find(used); it != per_pos.end()) return it->second;
    if (++states_ > kStateBudget) {
      exhausted_ = true;
      return {};
    }
    Alignment best = Solve(i + 1, used, -1);
    for (std::size_t j = 0; j < ref_.size(); ++j) {
      if ((used >> j & 1U) || ref_[j] != hyp_[i]) continue;
      Alignment rest = Solve(i + 1, used | (std::uint64_t{1} << j), static_cast<int>(j));
      rest.matches += 1;
      rest.chunks += (prev >= 0 && static_cast<int>(j) == prev + 1) ? 0 : 1;
      if (Better(rest, best)) best = rest;
    }
    memo_[key][used] = best;
    return best;
  }

  const std::vector<std::string>& hyp_;
  const std::vector<std::string>& ref_;
  std::unordered_map<std::uint64_t, std::unordered_map<std::uint64_t, Alignment>> memo_;
  std::size_t states_ = 0;
  bool exhausted_ = false;
};

// Left-to-right fallback for inputs too large for the exhaustive search:
// extend the current chunk when possible, otherwise take the earliest free
// matching reference token. Always reaches the maximum match count.
Alignment GreedyAlignment(const std::vector<std::string>& hyp,
                          const std::vector<std::string>& ref) {
  std::vector<bool> used(ref.size(), false);
  Alignment a;
  int prev = -1;
  for (const std::string& h : hyp) {
    int pick = -1;
    if (prev >= 0 && prev + 1 < static_cast<int>(ref.size()) && !used[prev + 1] &&
        ref[prev + 1] == h) {
      pick = prev + 1;
    } else {
      for (std::size_t j = 0; j < ref.size(); ++j) {
        if (!used[j] && ref[j] == h) {
          pick = static_cast<int>(j);
          break;
        }
      }
    }
    if (pick < 0) {
      prev = -1;
      continue;
    }
    used[pick] = true;
    a.matches += 1;
    a.chunks += (prev >= 0 && pick == prev + 1) ? 0 : 1;
    prev = pick;
  }
  return a;
}

}  // namespace

double RougeLF(std::string_view hypothesis, std::string_view reference) {
  const auto h = MetricTokens(hypothesis);
  const auto r = MetricTokens(reference);
  if (h.empty() || r.empty()) return 0.0;
  const double lcs = static_cast<double>(LcsLength(h, r));
  if (lcs == 0.0) return 0.0;
  const double p = lcs / static_cast<double>(h.size());
  const double rec = lcs / static_cast<double>(r.size());
  return 2.0 * p * rec / (p + rec);
}

MeteorDetail MeteorExactDetail(std::string_view hypothesis, std::string_view reference) {
  const auto h = MetricTokens(hypothesis);
  const auto r = MetricTokens(reference);
  MeteorDetail out;
  if (h.empty() || r.empty()) return out;
  AlignmentSearch search(h, r);
  const Alignment a = search.Run().value_or(GreedyAlignment(h, r));
  out.matches = static_cast<std::size_t>(a.matches);
  out.chunks = static_cast<std::size_t>(a.chunks);
  if (a.matches == 0) return out;
  const double m = a.matches;
  const double p = m / static_cast<double>(h.size());
  const double rec = m / static_cast<double>(r.size());
  const double f_mean = 10.0 * p * rec / (rec + 9.0 * p);
  const double penalty = 0.5 * std::pow(static_cast<double>(a.chunks) / m, 3.0);
  out.score = f_mean * (1.0 - penalty);
  return out;
}

double MeteorExact(std::string_view hypothesis, std::string_view reference) {
  return MeteorExactDetail(hypothesis, reference).score;
}

std::vector<double> TrigramEmbedder::Embed(const std::string& text) const {
  std::string padded = " ";
  for (unsigned char c : text) padded.push_back(static_cast<char>(std::tolower(c)));
  padded.push_back(' ');
  std::vector<double> v(kDims, 0.0);
  const std::string_view s = padded;
  if (s.size() < 3) {
    v[Fnv1a64(s) % kDims] += 1.0;
  } else {
    for (std::size_t i = 0; i + 3 <= s.size(); ++i) v[Fnv1a64(s.substr(i, 3)) % kDims] += 1.0;
  }
  double norm = 0.0;
  for (double x : v) norm += x * x;
  norm = std::sqrt(norm);
  for (double& x : v) x /= norm;
  return v;
}

std::vector<double> HttpEmbedder::Embed(const std::string& text) const {
  const auto scheme_end = config_.base_url.find("://");
  const auto path_start = scheme_end == std::string::npos
                              ? std::string::npos
                              : config_.base_url.find('/', scheme_end + 3);
  const std::string origin = config_.base_url.substr(0, path_start);
  std::string path = path_start == std::string::npos ? "" : config_.base_url.substr(path_start);
  while (!path.empty() && path.back() == '/') path.pop_back();

  httplib::Client client(origin);
  httplib::Headers headers;
  if (!config_.api_key.empty()) headers.emplace("Authorization", "Bearer " + config_.api_key);
  const nlohmann::json body = {{"model", config_.model}, {"input", text}};
  auto res = client.Post(path + "/embeddings", headers, body.dump(), "application/json");
  if (!res || res->status != 200) {
    throw Error(ErrorCode::kEmbedderUnavailable,
                config_.base_url + (res ? ": HTTP " + std::to_string(res->status) : ": no reply"));
  }
  std::vector<double> v;
  try {
    v = nlohmann::json::parse(res->body).at("data").at(0).at("embedding").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kEmbedderUnavailable, e.what());
  }
  double norm = 0.0;
  for (double x : v) norm += x * x;
  if (norm <= 0.0) throw Error(ErrorCode::kEmbedderUnavailable, "zero embedding");
  norm = std::sqrt(norm);
  for (double& x : v) x /= norm;
  return v;
}

double SentenceSimilarity(const std::string& hypothesis, const std::string& reference,
                          const Embedder& embedder) {
  const auto a = embedder.Embed(hypothesis);
  const auto b = embedder.Embed(reference);
  if (a.size() != b.size()) throw Error(ErrorCode::kEmbedderUnavailable, "dimension mismatch");
  double dot = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
  return std::clamp(dot, -1.0, 1.0);
}

AccuracySummary SummarizeRuns(std::vector<double> per_run) {
  AccuracySummary out;
  out.per_run = std::move(per_run);
  if (out.per_run.empty()) return out;
  double sum = 0.0;
  for (double a : out.per_run) sum += a;
  const double n = static_cast<double>(out.per_run.size());
  out.mean = sum / n;
  if (out.per_run.size() > 1) {
    double ss = 0.0;
    for (double a : out.per_run) ss += (a - out.mean) * (a - out.mean);
    out.std = std::sqrt(ss / (n - 1.0));
  }
  return out;
}

AccuracySummary CloseQAAccuracy(std::span<const std::vector<AnswerPair>> runs) {
  if (runs.size() != kCloseQARuns) {
    throw Error(ErrorCode::kRunLengthMismatch,
                "expected 5 runs, got " + std::to_string(runs.size()));
  }
  for (const auto& run : runs) {
    if (run.size() != runs.front().size()) {
      throw Error(ErrorCode::kRunLengthMismatch, "runs cover different question counts");
    }
    for (std::size_t i = 0; i < run.size(); ++i) {
      if (NormalizeAnswer(run[i].second) != NormalizeAnswer(runs.front()[i].second)) {
        throw Error(ErrorCode::kRunLengthMismatch, "runs disagree on question " + std::to_string(i));
      }
    }
  }
  if (runs.front().empty()) throw Error(ErrorCode::kEmptyEvaluation, "no questions");
  std::vector<double> per_run;
  for (const auto& run : runs) {
    std::size_t correct = 0;
    for (const auto& [pred, gold] : run) correct += NormalizeAnswer(pred) == NormalizeAnswer(gold);
    per_run.push_back(static_cast<double>(correct) / static_cast<double>(run.size()));
  }
  return SummarizeRuns(std::move(per_run));
}

EvalReport OpenQAReport(std::span<const AnswerPair> pairs, const Embedder& embedder) {
  if (pairs.empty()) throw Error(ErrorCode::kEmptyEvaluation, "no answer pairs");
  double sim = 0.0, rouge = 0.0, meteor = 0.0;
  for (const auto& [hyp, ref] : pairs) {
    sim += SentenceSimilarity(hyp, ref, embedder);
    rouge += RougeLF(hyp, ref);
    meteor += MeteorExact(hyp, ref);
  }
  const double n = static_cast<double>(pairs.size());
  EvalReport report;
  report.metrics["sim"] = {sim / n, std::nullopt};
  report.metrics["rouge_l"] = {rouge / n, std::nullopt};
  report.metrics["meteor"] = {meteor / n, std::nullopt};
  report.metadata.tags["num_pairs"] = std::to_string(pairs.size());
  if (embedder.offline()) report.metadata.tags["similarity"] = "offline-sim";
  return report;
}

}  // namespace egoqa
