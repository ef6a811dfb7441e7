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

#include <map>
#include <span>
#include <string>

#include "egoqa/core_model.hpp"

namespace egoqa {

/// Per-clip timing statistics over a narration corpus.
///
/// beta is the mean gap between consecutive narrations of one clip; alpha is
/// the mean of beta over all clips with at least two narrations. Clips
/// without a usable gap are stored with beta = alpha and flagged.
struct CorpusTimingStats {
  struct ClipTiming {
    double beta_s = 0.0;
    bool fallback = false;  ///< fewer than two narrations
    bool degenerate = false;  ///< measured beta below 1e-6 s
  };

  double alpha_s = 0.0;
  std::map<std::string, ClipTiming> by_clip;

  double beta(const std::string& clip_uid) const;
};

/// Streaming form of ComputeTimingStats; memory grows with the clip count
/// only.
class TimingStatsAccumulator {
 public:
  void Add(const NarrationTrack& track);
  CorpusTimingStats Finish() const;

 private:
  CorpusTimingStats partial_;
  double beta_sum_ = 0.0;
  std::size_t measured_ = 0;
};

/// Throws Error(kNoIntervalData) when no clip has two narrations with a
/// measurable gap.
CorpusTimingStats ComputeTimingStats(std::span<const NarrationTrack> tracks);

/// Window centred on one narration, half-width beta/(2 alpha) seconds,
/// clamped to the clip. Throws Error(kUnknownClip).
TemporalWindow NarrationWindow(double t_s, const std::string& clip_uid,
                               const CorpusTimingStats& stats, double duration_s);

/// Hull of the inputs. Throws Error(kEmptyInput).
TemporalWindow MergeWindows(std::span<const TemporalWindow> windows);

}  // namespace egoqa
