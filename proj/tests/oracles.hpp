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

// Independent reference implementations shared by the unit tests and the
// acceptance suite. Written directly from the definitions, deliberately
// without calling into the library.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "egoqa/core_model.hpp"
#include "egoqa/narration_chunker.hpp"
#include "egoqa/training_math.hpp"

namespace egoqa::oracle {

inline double Iou(const TemporalWindow& x, const TemporalWindow& y) {
  const double inter = std::max(0.0, std::min(x.end_s, y.end_s) - std::max(x.start_s, y.start_s));
  const double uni = (x.end_s - x.start_s) + (y.end_s - y.start_s) - inter;
  return uni > 0 ? inter / uni : 0.0;
}

struct Timing {
  double alpha = 0.0;
  std::map<std::string, double> beta;
  bool ok = false;
};

// beta_i = (t_last - t_first) / (n - 1); clips with one narration or a
// vanishing interval take alpha.
inline Timing Stats(const std::vector<NarrationTrack>& tracks) {
  Timing out;
  double sum = 0.0;
  std::size_t n = 0;
  std::map<std::string, std::optional<double>> measured;
  for (const auto& t : tracks) {
    std::optional<double> b;
    if (t.narrations.size() >= 2) {
      const double v = (t.narrations.back().t_s - t.narrations.front().t_s) /
                       static_cast<double>(t.narrations.size() - 1);
      if (v >= 1e-6) b = v;
    }
    if (b) {
      sum += *b;
      ++n;
    }
    measured[t.clip_uid] = b;
  }
  if (n == 0) return out;
  out.ok = true;
  out.alpha = sum / static_cast<double>(n);
  for (const auto& [uid, b] : measured) out.beta[uid] = b ? *b : out.alpha;
  return out;
}

inline TemporalWindow Window(double t, double beta, double alpha, double duration) {
  const double half = beta / alpha / 2.0;
  return {std::min(std::max(t - half, 0.0), duration), std::min(std::max(t + half, 0.0), duration)};
}

// Empty string when the chunking honours the partition, both bounds and
// greedy maximality.
inline std::string CheckChunks(const NarrationTrack& t, const std::vector<NarrationChunk>& chunks,
                               const ChunkBounds& bounds = {}) {
  std::size_t next = 0;
  for (std::size_t c = 0; c < chunks.size(); ++c) {
    const auto& m = chunks[c].members;
    if (m.empty()) return "empty chunk";
    if (m.size() > bounds.max_sentences) return "too many sentences";
    for (std::size_t idx : m) {
      if (idx != next++) return "not a partition in order";
    }
    if (t.narrations[m.back()].t_s - t.narrations[m.front()].t_s > bounds.max_span_s + 1e-6) {
      return "span too long";
    }
    if (c > 0) {
      const auto& prev = chunks[c - 1].members;
      const bool full = prev.size() == bounds.max_sentences;
      const bool too_far =
          t.narrations[m.front()].t_s - t.narrations[prev.front()].t_s > bounds.max_span_s + 1e-6;
      if (!full && !too_far) return "chunk " + std::to_string(c) + " could have joined its predecessor";
    }
  }
  if (next != t.narrations.size()) return "narrations missing";
  return "";
}

// Every injective matching of equal tokens, scored by (max matches, then
// min chunks).
inline std::pair<std::size_t, std::size_t> BruteAlignment(const std::vector<std::string>& h,
                                                          const std::vector<std::string>& r) {
  std::pair<std::size_t, std::size_t> best{0, 0};
  std::vector<int> map(h.size(), -1);
  std::vector<bool> used(r.size(), false);
  std::function<void(std::size_t)> go = [&](std::size_t i) {
    if (i == h.size()) {
      std::size_t m = 0, chunks = 0;
      for (std::size_t k = 0; k < h.size(); ++k) {
        if (map[k] < 0) continue;
        ++m;
        if (k == 0 || map[k - 1] < 0 || map[k - 1] + 1 != map[k]) ++chunks;
      }
      if (m > best.first || (m == best.first && chunks < best.second)) best = {m, chunks};
      return;
    }
    go(i + 1);
    for (std::size_t j = 0; j < r.size(); ++j) {
      if (used[j] || r[j] != h[i]) continue;
      used[j] = true;
      map[i] = static_cast<int>(j);
      go(i + 1);
      map[i] = -1;
      used[j] = false;
    }
  };
  go(0);
  return best;
}

struct Candidate {
  TemporalWindow w;
  double score;
  std::size_t t;
};

// Thresholded, clamped candidates in rank order (score desc, start asc,
// step asc).
inline std::vector<Candidate> RankedCandidates(const HeadOutputs& heads, double dur, const DecodeOptions& opts) {
  const std::size_t n = heads.scores.size();
  std::vector<Candidate> cands;
  for (std::size_t t = 0; t < n; ++t) {
    if (heads.scores[t] < opts.score_threshold) continue;
    const double steps = static_cast<double>(n);
    TemporalWindow w{(t + 0.5 - heads.offsets[t][0]) * dur / steps, (t + 0.5 + heads.offsets[t][1]) * dur / steps};
    w.start_s = std::clamp(w.start_s, 0.0, dur);
    w.end_s = std::clamp(w.end_s, 0.0, dur);
    cands.push_back({w, heads.scores[t], t});
  }
  std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
    return std::tie(b.score, a.w.start_s, a.t) < std::tie(a.score, b.w.start_s, b.t);
  });
  return cands;
}

// NMS output as the unique subset S (in rank order) where each candidate is
// in S iff no higher-ranked member of S overlaps it at or above the
// threshold, found by enumerating all subsets. `solutions` must come out 1.
// Pairs sitting exactly on the threshold are common with coarse offsets, so
// callers pass the overlap function whose rounding they want to match.
inline std::vector<std::size_t> Nms(const std::vector<TemporalWindow>& ranked, double thr, std::size_t top_k,
                                    const std::function<double(const TemporalWindow&, const TemporalWindow&)>& iou,
                                    int* solutions = nullptr) {
  const std::size_t n = ranked.size();
  std::vector<std::size_t> found;
  int count = 0;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    bool consistent = true;
    for (std::size_t c = 0; c < n && consistent; ++c) {
      bool blocked = false;
      for (std::size_t h = 0; h < c; ++h) {
        if ((mask >> h & 1) && iou(ranked[h], ranked[c]) >= thr) blocked = true;
      }
      consistent = ((mask >> c & 1) != 0) == !blocked;
    }
    if (!consistent) continue;
    ++count;
    found.clear();
    for (std::size_t c = 0; c < n; ++c) {
      if (mask >> c & 1) found.push_back(c);
    }
  }
  if (solutions) *solutions = count;
  if (found.size() > top_k) found.resize(top_k);
  return found;
}

// Fraction of queries whose first k windows contain one at IoU >= m.
inline double Recall(const std::map<std::string, PredictionSet>& preds,
                     const std::map<std::string, TemporalWindow>& gts, std::size_t k, double m) {
  std::size_t hits = 0;
  for (const auto& [id, gt] : gts) {
    bool hit = false;
    const auto& ws = preds.at(id).windows;
    for (std::size_t j = 0; j < std::min(k, ws.size()); ++j) {
      if (Iou(ws[j].window, gt) >= m) hit = true;
    }
    hits += hit;
  }
  return static_cast<double>(hits) / static_cast<double>(gts.size());
}

}  // namespace egoqa::oracle
