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

#include "egoqa/narration_chunker.hpp"

#include "egoqa/error.hpp"

namespace egoqa {

std::vector<NarrationChunk> ChunkTrack(const NarrationTrack& track,
                                       const CorpusTimingStats& stats,
                                       const ChunkBounds& bounds) {
  if (track.narrations.empty()) throw Error(ErrorCode::kEmptyTrack, track.clip_uid);
  if (bounds.max_sentences < 1 || !(bounds.max_span_s > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "chunk bounds must be positive");
  }

  std::vector<NarrationChunk> chunks;
  std::vector<TemporalWindow> member_windows;
  auto close_chunk = [&] {
    chunks.back().span = MergeWindows(member_windows);
    member_windows.clear();
  };

  for (std::size_t i = 0; i < track.narrations.size(); ++i) {
    const double t = track.narrations[i].t_s;
    const bool fits = !chunks.empty() && !member_windows.empty() &&
                      chunks.back().members.size() < bounds.max_sentences &&
                      t - track.narrations[chunks.back().members.front()].t_s <=
                          bounds.max_span_s + kTimeTolerance;
    if (!fits) {
      if (!member_windows.empty()) close_chunk();
      chunks.push_back({track.clip_uid, {}, {}, chunks.size()});
    }
    chunks.back().members.push_back(i);
    member_windows.push_back(NarrationWindow(t, track.clip_uid, stats, track.duration_s));
  }
  close_chunk();
  return chunks;
}

}  // namespace egoqa
