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

#include "egoqa/training_math.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "egoqa/error.hpp"
#include "egoqa/eval_metrics.hpp"
#include "egoqa/util.hpp"

namespace egoqa {

double ClampProbability(double p) { return std::clamp(p, kProbEpsilon, 1.0 - kProbEpsilon); }

void HeadOutputs::Validate() const {
  if (scores.size() != offsets.size()) {
    throw Error(ErrorCode::kLengthMismatch, "scores and offsets differ in length");
  }
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!std::isfinite(scores[i]) || scores[i] < 0.0 || scores[i] > 1.0) {
      throw Error(ErrorCode::kInvalidArgument, "score " + std::to_string(i) + " outside [0,1]");
    }
    for (double d : offsets[i]) {
      if (!std::isfinite(d) || d < 0.0) {
        throw Error(ErrorCode::kInvalidArgument,
                    "offset " + std::to_string(i) + " must be finite and >= 0");
      }
    }
  }
}

LossAndGradient FocalLoss(std::span<const double> scores, const std::vector<bool>& positives,
                          const FocalParams& params) {
  if (scores.size() != positives.size()) {
    throw Error(ErrorCode::kLengthMismatch, "scores and labels differ in length");
  }
  LossAndGradient out;
  out.gradient.resize(scores.size());
  if (scores.empty()) return out;
  const double n = static_cast<double>(scores.size());
  const double g = params.gamma;
  const double a = params.alpha;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const double p = ClampProbability(scores[i]);
    if (positives[i]) {
      const double q = 1.0 - p;
      out.value += -a * std::pow(q, g) * std::log(p);
      // d/dp of -a q^g log p
      const double dq = g == 0.0 ? 0.0 : g * std::pow(q, g - 1.0) * std::log(p);
      out.gradient[i] = a * (dq - std::pow(q, g) / p) / n;
    } else {
      out.value += -(1.0 - a) * std::pow(p, g) * std::log(1.0 - p);
      const double dp = g == 0.0 ? 0.0 : g * std::pow(p, g - 1.0) * std::log(1.0 - p);
      out.gradient[i] = -(1.0 - a) * (dp - std::pow(p, g) / (1.0 - p)) / n;
    }
  }
  out.value /= n;
  return out;
}

DiouResult DiouLoss1D(const TemporalWindow& pred, const TemporalWindow& gt) {
  if (pred.start_s > pred.end_s || gt.start_s > gt.end_s) {
    throw Error(ErrorCode::kInvalidArgument, "window start after end");
  }
  const double s = pred.start_s, e = pred.end_s, a = gt.start_s, b = gt.end_s;
  DiouResult out;
  const double c = std::max(e, b) - std::min(s, a);
  if (c <= 0.0) {
    out.degenerate = true;
    return out;
  }

  const double lo = std::max(s, a);
  const double hi = std::min(e, b);
  const double inter = std::max(0.0, hi - lo);
  const double uni = (e - s) + (b - a) - inter;
  const double di_ds = (s >= a && hi > lo) ? -1.0 : 0.0;
  const double di_de = (e >= a && e < b) ? 1.0 : 0.0;

  double iou = 0.0, diou_ds = 0.0, diou_de = 0.0;
  if (uni > 0.0) {
    iou = inter / uni;
    const double du_ds = -1.0 - di_ds;
    const double du_de = 1.0 - di_de;
    diou_ds = (di_ds * uni - inter * du_ds) / (uni * uni);
    diou_de = (di_de * uni - inter * du_de) / (uni * uni);
  }

  const double m = 0.5 * (s + e - a - b);
  const double dc_ds = s < a ? -1.0 : 0.0;
  const double dc_de = e >= b ? 1.0 : 0.0;
  const double penalty = (m * m) / (c * c);
  const double dp_ds = m / (c * c) - 2.0 * m * m * dc_ds / (c * c * c);
  const double dp_de = m / (c * c) - 2.0 * m * m * dc_de / (c * c * c);

  out.value = 1.0 - iou + penalty;
  out.d_start = -diou_ds + dp_ds;
  out.d_end = -diou_de + dp_de;
  return out;
}

bool DiouNearKink(const TemporalWindow& pred, const TemporalWindow& gt, double tol) {
  for (double p : {pred.start_s, pred.end_s}) {
    for (double g : {gt.start_s, gt.end_s}) {
      if (std::abs(p - g) <= tol) return true;
    }
  }
  return false;
}

CrossEntropyResult TokenCrossEntropy(std::span<const std::vector<double>> distributions,
                                     std::span<const std::size_t> targets) {
  if (distributions.size() != targets.size()) {
    throw Error(ErrorCode::kLengthMismatch, "distributions and targets differ in length");
  }
  CrossEntropyResult out;
  out.gradient.resize(distributions.size());
  if (distributions.empty()) return out;
  const double n = static_cast<double>(distributions.size());
  for (std::size_t i = 0; i < distributions.size(); ++i) {
    const auto& dist = distributions[i];
    const double sum = std::accumulate(dist.begin(), dist.end(), 0.0);
    if (std::abs(sum - 1.0) > 1e-6 ||
        std::any_of(dist.begin(), dist.end(), [](double p) { return !(p >= 0.0); })) {
      throw Error(ErrorCode::kNotADistribution, "position " + std::to_string(i));
    }
    if (targets[i] >= dist.size()) {
      throw Error(ErrorCode::kLengthMismatch, "target id outside vocabulary");
    }
    const double p = ClampProbability(dist[targets[i]]);
    out.value += -std::log(p);
    out.gradient[i].assign(dist.size(), 0.0);
    out.gradient[i][targets[i]] = -1.0 / (n * p);
  }
  out.value /= n;
  return out;
}

LossBreakdown CombineLosses(double focal, double diou, double qa) {
  if (!(focal >= 0.0) || !(diou >= 0.0) || !(qa >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "losses must be non-negative");
  }
  LossBreakdown out{focal, diou, focal + diou, qa, 0.0};
  out.total = 0.5 * out.vlg + 0.5 * qa;
  return out;
}

LabelAssignment AssignLabels(std::size_t num_steps, const TemporalWindow& gt, double duration_s) {
  if (num_steps == 0 || !(duration_s > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "need N >= 1 and duration > 0");
  }
  LabelAssignment out;
  out.positives.assign(num_steps, false);
  out.targets.assign(num_steps, {0.0, 0.0});
  const double start_idx = SecondsToIndex(gt.start_s, num_steps, duration_s);
  const double end_idx = SecondsToIndex(gt.end_s, num_steps, duration_s);
  bool any = false;
  for (std::size_t t = 0; t < num_steps; ++t) {
    const double centre = static_cast<double>(t) + 0.5;
    const double centre_s = IndexToSeconds(centre, num_steps, duration_s);
    if (centre_s >= gt.start_s && centre_s <= gt.end_s) {
      out.positives[t] = true;
      out.targets[t] = {std::max(0.0, centre - start_idx), std::max(0.0, end_idx - centre)};
      any = true;
    }
  }
  out.no_positives = !any;
  return out;
}

std::vector<ScoredWindow> DecodeWindows(const HeadOutputs& heads, double duration_s,
                                        const DecodeOptions& options) {
  heads.Validate();
  const std::size_t n = heads.scores.size();
  struct Candidate {
    ScoredWindow w;
    std::size_t index;
  };
  std::vector<Candidate> candidates;
  for (std::size_t t = 0; t < n; ++t) {
    if (heads.scores[t] < options.score_threshold) continue;
    const double centre = static_cast<double>(t) + 0.5;
    TemporalWindow w{IndexToSeconds(centre - heads.offsets[t][0], n, duration_s),
                     IndexToSeconds(centre + heads.offsets[t][1], n, duration_s)};
    w.start_s = std::clamp(w.start_s, 0.0, duration_s);
    w.end_s = std::clamp(w.end_s, 0.0, duration_s);
    candidates.push_back({{w, heads.scores[t]}, t});
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& x, const Candidate& y) {
    if (x.w.score != y.w.score) return x.w.score > y.w.score;
    if (x.w.window.start_s != y.w.window.start_s) return x.w.window.start_s < y.w.window.start_s;
    return x.index < y.index;
  });

  std::vector<ScoredWindow> kept;
  for (const Candidate& c : candidates) {
    if (kept.size() >= options.top_k) break;
    const bool suppressed = std::any_of(kept.begin(), kept.end(), [&](const ScoredWindow& k) {
      return Iou1D(k.window, c.w.window) >= options.nms_iou;
    });
    if (!suppressed) kept.push_back(c.w);
  }
  return kept;
}

TemporalWindow JitterWindow(const TemporalWindow& window, double duration_s, std::uint64_t seed,
                            const JitterOptions& options) {
  Rng rng(seed);
  const double sigma = rng.Uniform(options.scale_min, options.scale_max);
  const double delta = rng.Uniform(options.shift_min, options.shift_max);
  const double len = window.length();
  const double centre = window.center() + delta * len;
  const double half = 0.5 * sigma * len;
  return {std::clamp(centre - half, 0.0, duration_s), std::clamp(centre + half, 0.0, duration_s)};
}

std::vector<std::size_t> ResampleIndices(std::size_t n_in, std::size_t n_out) {
  if (n_in == 0 || n_out == 0) throw Error(ErrorCode::kInvalidArgument, "need n_in, n_out >= 1");
  std::vector<std::size_t> out(n_out);
  for (std::size_t k = 0; k < n_out; ++k) {
    out[k] = static_cast<std::size_t>((static_cast<unsigned __int128>(k) * n_in) / n_out);
  }
  return out;
}

}  // namespace egoqa
