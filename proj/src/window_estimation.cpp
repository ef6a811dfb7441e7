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

#include "egoqa/window_estimation.hpp"

#include <algorithm>

#include "egoqa/error.hpp"

namespace egoqa {

namespace {
constexpr double kDegenerateBeta = 1e-6;
}

double CorpusTimingStats::beta(const std::string& clip_uid) const {
  auto it = by_clip.find(clip_uid);
  if (it == by_clip.end()) throw Error(ErrorCode::kUnknownClip, clip_uid);
  return it->second.beta_s;
}

void TimingStatsAccumulator::Add(const NarrationTrack& track) {
  CorpusTimingStats::ClipTiming timing;
  const auto& ns = track.narrations;
  if (ns.size() < 2) {
    timing.fallback = true;
  } else {
    double gaps = 0.0;
    for (std::size_t i = 1; i < ns.size(); ++i) gaps += ns[i].t_s - ns[i - 1].t_s;
    timing.beta_s = gaps / static_cast<double>(ns.size() - 1);
    if (timing.beta_s < kDegenerateBeta) {
      timing.degenerate = true;
    } else {
      beta_sum_ += timing.beta_s;
      ++measured_;
    }
  }
  partial_.by_clip[track.clip_uid] = timing;
}

CorpusTimingStats TimingStatsAccumulator::Finish() const {
  if (measured_ == 0) {
    throw Error(ErrorCode::kNoIntervalData,
                "no clip has two narrations with a positive mean interval");
  }
  CorpusTimingStats stats = partial_;
  stats.alpha_s = beta_sum_ / static_cast<double>(measured_);
  for (auto& [uid, timing] : stats.by_clip) {
    if (timing.fallback || timing.degenerate) timing.beta_s = stats.alpha_s;
  }
  return stats;
}

CorpusTimingStats ComputeTimingStats(std::span<const NarrationTrack> tracks) {
  TimingStatsAccumulator acc;
  for (const NarrationTrack& track : tracks) acc.Add(track);
  return acc.Finish();
}

TemporalWindow NarrationWindow(double t_s, const std::string& clip_uid,
                               const CorpusTimingStats& stats, double duration_s) {
  const double half = stats.beta(clip_uid) / (2.0 * stats.alpha_s);
  return {std::clamp(t_s - half, 0.0, duration_s), std::clamp(t_s + half, 0.0, duration_s)};
}

TemporalWindow MergeWindows(std::span<const TemporalWindow> windows) {
  if (windows.empty()) throw Error(ErrorCode::kEmptyInput, "no windows to merge");
  TemporalWindow hull = windows.front();
  for (const TemporalWindow& w : windows.subspan(1)) {
    hull.start_s = std::min(hull.start_s, w.start_s);
    hull.end_s = std::max(hull.end_s, w.end_s);
  }
  return hull;
}

}  // namespace egoqa
