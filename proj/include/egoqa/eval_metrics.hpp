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

#include <array>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "egoqa/core_model.hpp"
#include "egoqa/endpoint.hpp"

namespace egoqa {

/// Interval IoU; 0 when the union has zero length.
double Iou1D(const TemporalWindow& a, const TemporalWindow& b);

inline constexpr std::size_t kRecallKs[] = {1, 5};
inline constexpr double kRecallIous[] = {0.3, 0.5};

/// Recall@k, IoU=m for k in {1, 5} and m in {0.3, 0.5}.
class VLGResult {
 public:
  /// recall[ki][mi] indexed like kRecallKs / kRecallIous. Throws
  /// Error(kInvariantBreach) when recall is not monotone in k and m.
  explicit VLGResult(const std::array<std::array<double, 2>, 2>& recall);

  double recall(std::size_t k, double iou) const;
  /// Average of Recall@1 at IoU 0.3 and 0.5.
  double mean_r1() const { return 0.5 * (recall_[0][0] + recall_[0][1]); }
  const std::array<std::array<double, 2>, 2>& table() const { return recall_; }

 private:
  std::array<std::array<double, 2>, 2> recall_;
};

/// Throws Error(kMissingQuery) naming ground-truth ids without predictions.
VLGResult VlgRecall(const std::map<std::string, PredictionSet>& predictions,
                    const std::map<std::string, TemporalWindow>& ground_truth);

/// Lowercased tokens split on runs of non-alphanumeric ASCII. Bytes >= 0x80
/// count as alphanumeric so UTF-8 words stay whole.
std::vector<std::string> MetricTokens(std::string_view text);

/// ROUGE-L F1 (beta = 1) over MetricTokens.
double RougeLF(std::string_view hypothesis, std::string_view reference);

struct MeteorDetail {
  std::size_t matches = 0;
  std::size_t chunks = 0;
  double score = 0.0;
};

/// METEOR restricted to exact unigram matching. The alignment maximizes the
/// number of matches and, among those, minimizes the number of chunks.
MeteorDetail MeteorExactDetail(std::string_view hypothesis, std::string_view reference);
double MeteorExact(std::string_view hypothesis, std::string_view reference);

/// Text to unit vector. Implementations are called concurrently.
class Embedder {
 public:
  virtual ~Embedder() = default;
  virtual std::vector<double> Embed(const std::string& text) const = 0;
  virtual bool offline() const { return false; }
};

/// Deterministic offline embedder: character trigrams of " text " (lowercase)
/// hashed into 256 buckets, L2-normalized.
class TrigramEmbedder : public Embedder {
 public:
  static constexpr std::size_t kDims = 256;
  std::vector<double> Embed(const std::string& text) const override;
  bool offline() const override { return true; }
};

/// OpenAI-compatible embeddings client: POST {base_url}/embeddings.
/// Failures throw Error(kEmbedderUnavailable).
class HttpEmbedder : public Embedder {
 public:
  explicit HttpEmbedder(EndpointConfig config) : config_(std::move(config)) {}
  std::vector<double> Embed(const std::string& text) const override;

 private:
  EndpointConfig config_;
};

/// Cosine of the two embeddings.
double SentenceSimilarity(const std::string& hypothesis, const std::string& reference,
                          const Embedder& embedder);

struct AccuracySummary {
  double mean = 0.0;
  double std = 0.0;  ///< sample standard deviation (n - 1)
  std::vector<double> per_run;
};

inline constexpr std::size_t kCloseQARuns = 5;

using AnswerPair = std::pair<std::string, std::string>;  ///< (predicted, correct)

/// Accuracy over five seeded runs on one question set, matching answers by
/// NormalizeAnswer equality. Throws Error(kRunLengthMismatch).
AccuracySummary CloseQAAccuracy(std::span<const std::vector<AnswerPair>> runs);

/// Mean and sample standard deviation of per-run accuracies.
AccuracySummary SummarizeRuns(std::vector<double> per_run);

/// Mean Sim., ROUGE-L and METEOR as fractions under keys "sim", "rouge_l",
/// "meteor". Throws Error(kEmptyEvaluation).
EvalReport OpenQAReport(std::span<const AnswerPair> pairs, const Embedder& embedder);

}  // namespace egoqa
