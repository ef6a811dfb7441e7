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
#include <cstdint>
#include <span>
#include <vector>

#include "egoqa/core_model.hpp"

namespace egoqa {

/// Probabilities are clamped to [eps, 1 - eps] before taking logs.
inline constexpr double kProbEpsilon = 1e-7;

double ClampProbability(double p);

/// Outputs of the localizer's two heads over N timesteps. Offsets are the
/// (left, right) distances from each timestep centre to the predicted
/// boundaries, in feature-index units.
struct HeadOutputs {
  std::vector<double> scores;
  std::vector<std::array<double, 2>> offsets;

  /// Throws Error(kLengthMismatch) or Error(kInvalidArgument).
  void Validate() const;
};

struct LabelAssignment {
  std::vector<bool> positives;
  /// (left, right) regression targets; zero for negative timesteps.
  std::vector<std::array<double, 2>> targets;
  /// Set when the window covers no timestep centre.
  bool no_positives = false;
};

struct LossAndGradient {
  double value = 0.0;
  std::vector<double> gradient;
};

struct FocalParams {
  double gamma = 2.0;
  double alpha = 0.25;
};

/// Mean binary focal loss over timesteps and its gradient w.r.t. the
/// (clamped) scores. Throws Error(kLengthMismatch).
LossAndGradient FocalLoss(std::span<const double> scores, const std::vector<bool>& positives,
                          const FocalParams& params = {});

struct DiouResult {
  double value = 0.0;
  double d_start = 0.0;  ///< dL/d pred.start_s
  double d_end = 0.0;    ///< dL/d pred.end_s
  /// Both windows are the same zero-length point; value is defined as 0.
  bool degenerate = false;
};

/// 1 - IoU + d^2 / c^2 for intervals, with d the centre distance and c the
/// enclosing length. At kinks (coinciding endpoints) the gradient is the
/// right-hand limit.
DiouResult DiouLoss1D(const TemporalWindow& pred, const TemporalWindow& gt);

/// True when some pred endpoint lies within `tol` of a gt endpoint, where
/// the loss is not differentiable.
bool DiouNearKink(const TemporalWindow& pred, const TemporalWindow& gt, double tol);

struct CrossEntropyResult {
  double value = 0.0;
  /// dL/dp for every entry of every distribution.
  std::vector<std::vector<double>> gradient;
};

/// Mean negative log-probability of the target ids. Each distribution must
/// sum to 1 within 1e-6. Throws Error(kLengthMismatch) and
/// Error(kNotADistribution).
CrossEntropyResult TokenCrossEntropy(std::span<const std::vector<double>> distributions,
                                     std::span<const std::size_t> targets);

struct LossBreakdown {
  double focal = 0.0;
  double diou = 0.0;
  double vlg = 0.0;
  double qa = 0.0;
  double total = 0.0;
};

/// vlg = focal + diou; total = 0.5 vlg + 0.5 qa.
LossBreakdown CombineLosses(double focal, double diou, double qa);

/// Timestep t is centred at (t + 0.5) * duration / N and is positive when
/// that centre lies inside gt.
LabelAssignment AssignLabels(std::size_t num_steps, const TemporalWindow& gt, double duration_s);

struct DecodeOptions {
  double score_threshold = 0.05;
  double nms_iou = 0.5;
  std::size_t top_k = 5;
};

/// One candidate per timestep, [centre - left, centre + right] scaled to
/// seconds and clamped to the clip. Candidates under the score floor are
/// dropped, then greedy hard NMS keeps at most top_k, best first. Ties are
/// broken by earlier start, then lower timestep index.
std::vector<ScoredWindow> DecodeWindows(const HeadOutputs& heads, double duration_s,
                                        const DecodeOptions& options = {});

struct JitterOptions {
  double scale_min = 0.8;
  double scale_max = 1.25;
  double shift_min = -0.25;
  double shift_max = 0.25;
};

/// Random rescale and shift of a window: the half length becomes
/// sigma * (e - s) / 2 and the centre moves by delta * (e - s), with sigma
/// and delta uniform in the configured ranges. Result clamped to the clip.
TemporalWindow JitterWindow(const TemporalWindow& window, double duration_s, std::uint64_t seed,
                            const JitterOptions& options = {});

/// floor(k * n_in / n_out) for k = 0..n_out-1.
std::vector<std::size_t> ResampleIndices(std::size_t n_in, std::size_t n_out = 1200);

inline double IndexToSeconds(double index, std::size_t num_steps, double duration_s) {
  return index * duration_s / static_cast<double>(num_steps);
}

inline double SecondsToIndex(double t_s, std::size_t num_steps, double duration_s) {
  return t_s * static_cast<double>(num_steps) / duration_s;
}

}  // namespace egoqa
