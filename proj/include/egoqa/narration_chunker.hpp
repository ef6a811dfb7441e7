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

#include <cstddef>
#include <string>
#include <vector>

#include "egoqa/core_model.hpp"
#include "egoqa/window_estimation.hpp"

namespace egoqa {

struct ChunkBounds {
  std::size_t max_sentences = 5;
  double max_span_s = 30.0;
};

/// Contiguous run of narrations that becomes one generation request.
struct NarrationChunk {
  std::string clip_uid;
  std::vector<std::size_t> members;  ///< indices into the parent track
  TemporalWindow span;               ///< hull of the member windows
  std::size_t chunk_index = 0;
};

/// Greedy left-to-right packing. A narration joins the open chunk while the
/// chunk holds fewer than max_sentences and the narration lies within
/// max_span_s of the chunk's first timestamp (both bounds inclusive).
///
/// Throws Error(kEmptyTrack) for a track with no narrations and
/// Error(kInvalidArgument) for non-positive bounds.
std::vector<NarrationChunk> ChunkTrack(const NarrationTrack& track,
                                       const CorpusTimingStats& stats,
                                       const ChunkBounds& bounds = {});

}  // namespace egoqa
