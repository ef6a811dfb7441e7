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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "egoqa/error.hpp"
#include "egoqa/eval_metrics.hpp"
#include "egoqa/training_math.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

namespace egoqa {
namespace {

constexpr double kStep = 1e-6;
constexpr double kRelTol = 1e-4;

double RelErr(double analytic, double numeric) {
  return std::abs(analytic - numeric) / std::max({std::abs(analytic), std::abs(numeric), 1e-6});
}

TEST(FocalLossTest, PerfectPredictionIsNearZero) {
  const std::vector<double> scores = {1.0, 0.0, 1.0, 0.0};
  const std::vector<bool> labels = {true, false, true, false};
  EXPECT_LE(FocalLoss(scores, labels).value, 1e-5);
}

TEST(FocalLossTest, GammaZeroIsWeightedCrossEntropy) {
  Rng rng(1);
  std::vector<double> scores(16);
  std::vector<bool> labels(16);
  double bce = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    scores[i] = rng.Uniform(0.05, 0.95);
    labels[i] = rng.Below(2) == 1;
    bce += labels[i] ? -std::log(scores[i]) : -std::log(1.0 - scores[i]);
  }
  bce /= scores.size();
  EXPECT_NEAR(FocalLoss(scores, labels, {0.0, 0.5}).value, 0.5 * bce, 1e-12);
}

TEST(FocalLossTest, HandValue) {
  // p = 0.5 positive: 0.25 * 0.25 * ln 2; p = 0.5 negative: 0.75 * 0.25 * ln 2.
  const std::vector<double> scores = {0.5, 0.5};
  const std::vector<bool> labels = {true, false};
  EXPECT_NEAR(FocalLoss(scores, labels).value, 0.5 * (0.0625 + 0.1875) * std::log(2.0), 1e-15);
}

TEST(FocalLossTest, GradientMatchesFiniteDifferences) {
  Rng rng(2);
  for (int inst = 0; inst < 100; ++inst) {
    const std::size_t n = 1 + rng.Below(12);
    std::vector<double> scores(n);
    std::vector<bool> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
      scores[i] = rng.Uniform(0.01, 0.99);
      labels[i] = rng.Below(3) == 0;
    }
    const FocalParams params{rng.Uniform(0.0, 3.0), rng.Uniform(0.1, 0.9)};
    const LossAndGradient lg = FocalLoss(scores, labels, params);
    for (std::size_t i = 0; i < n; ++i) {
      auto up = scores, down = scores;
      up[i] += kStep;
      down[i] -= kStep;
      const double fd = (FocalLoss(up, labels, params).value - FocalLoss(down, labels, params).value) / (2 * kStep);
      ASSERT_LE(RelErr(lg.gradient[i], fd), kRelTol) << "instance " << inst << " index " << i;
    }
  }
}

TEST(FocalLossTest, LengthMismatch) {
  const std::vector<double> scores = {0.5};
  try {
    FocalLoss(scores, {true, false});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kLengthMismatch);
  }
}

TEST(DiouLossTest, FixedPoints) {
  EXPECT_NEAR(DiouLoss1D({3, 7}, {3, 7}).value, 0.0, 1e-15);
  EXPECT_NEAR(DiouLoss1D({0, 2}, {2, 4}).value, 1.25, 1e-9);
  EXPECT_NEAR(DiouLoss1D({0, 4}, {1, 3}).value, 0.5, 1e-9);
}

TEST(DiouLossTest, DegenerateAndPoints) {
  const DiouResult same = DiouLoss1D({2, 2}, {2, 2});
  EXPECT_TRUE(same.degenerate);
  EXPECT_EQ(same.value, 0.0);
  const DiouResult apart = DiouLoss1D({0, 0}, {4, 4});
  EXPECT_FALSE(apart.degenerate);
  EXPECT_NEAR(apart.value, 2.0, 1e-12);
  EXPECT_THROW(DiouLoss1D({3, 1}, {0, 1}), Error);
}

TEST(DiouLossTest, BoundedInZeroTwo) {
  Rng rng(5);
  for (int i = 0; i < 5000; ++i) {
    const double a = rng.Uniform(0, 10), b = rng.Uniform(0, 10), c = rng.Uniform(0, 10), d = rng.Uniform(0, 10);
    const double v = DiouLoss1D({std::min(a, b), std::max(a, b)}, {std::min(c, d), std::max(c, d)}).value;
    ASSERT_GE(v, 0.0);
    ASSERT_LT(v, 2.0);
  }
}

TEST(DiouLossTest, GradientMatchesFiniteDifferences) {
  Rng rng(6);
  int checked = 0;
  while (checked < 100) {
    double s = rng.Uniform(0, 10), e = rng.Uniform(0, 10), a = rng.Uniform(0, 10), b = rng.Uniform(0, 10);
    if (s > e) std::swap(s, e);
    if (a > b) std::swap(a, b);
    const TemporalWindow pred{s, e}, gt{a, b};
    if (e - s < 1e-3 || DiouNearKink(pred, gt, 1e-3)) continue;
    const DiouResult r = DiouLoss1D(pred, gt);
    const double fd_s = (DiouLoss1D({s + kStep, e}, gt).value - DiouLoss1D({s - kStep, e}, gt).value) / (2 * kStep);
    const double fd_e = (DiouLoss1D({s, e + kStep}, gt).value - DiouLoss1D({s, e - kStep}, gt).value) / (2 * kStep);
    ASSERT_LE(RelErr(r.d_start, fd_s), kRelTol) << s << " " << e << " / " << a << " " << b;
    ASSERT_LE(RelErr(r.d_end, fd_e), kRelTol) << s << " " << e << " / " << a << " " << b;
    ++checked;
  }
}

TEST(DiouLossTest, RightHandLimitAtKinks) {
  // pred end coincides with gt start.
  const TemporalWindow gt{2, 4};
  const DiouResult r = DiouLoss1D({0, 2}, gt);
  const double right = (DiouLoss1D({0, 2 + kStep}, gt).value - r.value) / kStep;
  EXPECT_NEAR(r.d_end, right, 1e-4);
  EXPECT_TRUE(DiouNearKink({0, 2}, gt, 1e-9));
  EXPECT_FALSE(DiouNearKink({0, 1}, gt, 1e-9));
}

TEST(TokenCrossEntropyTest, OneHotAndUniform) {
  const std::vector<std::vector<double>> one_hot = {{0, 1, 0}, {1, 0, 0}};
  const std::vector<std::size_t> targets = {1, 0};
  EXPECT_LE(TokenCrossEntropy(one_hot, targets).value, 1e-5);
  const std::vector<std::vector<double>> uniform(5, std::vector<double>(4, 0.25));
  const std::vector<std::size_t> t5 = {0, 1, 2, 3, 1};
  EXPECT_NEAR(TokenCrossEntropy(uniform, t5).value, std::log(4.0), 1e-12);
  EXPECT_NEAR(std::log(4.0), 1.386294, 1e-6);
}

TEST(TokenCrossEntropyTest, Errors) {
  const std::vector<std::vector<double>> bad = {{0.5, 0.6}};
  const std::vector<std::size_t> t = {0};
  try {
    TokenCrossEntropy(bad, t);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotADistribution);
  }
  const std::vector<std::vector<double>> ok = {{0.5, 0.5}};
  const std::vector<std::size_t> two = {0, 1};
  EXPECT_THROW(TokenCrossEntropy(ok, two), Error);
  const std::vector<std::size_t> oob = {2};
  EXPECT_THROW(TokenCrossEntropy(ok, oob), Error);
}

// The simplex constraint rules out coordinate-wise differences, so the
// check runs along e_i - e_j, which keeps every row normalized.
TEST(TokenCrossEntropyTest, GradientMatchesFiniteDifferences) {
  Rng rng(7);
  for (int inst = 0; inst < 100; ++inst) {
    const std::size_t n = 1 + rng.Below(4), v = 2 + rng.Below(6);
    std::vector<std::vector<double>> dists(n, std::vector<double>(v));
    std::vector<std::size_t> targets(n);
    for (std::size_t i = 0; i < n; ++i) {
      double sum = 0.0;
      for (double& p : dists[i]) sum += (p = rng.Uniform(0.05, 1.0));
      for (double& p : dists[i]) p /= sum;
      targets[i] = rng.Below(v);
    }
    const CrossEntropyResult r = TokenCrossEntropy(dists, targets);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t a = 0; a < v; ++a) {
        for (std::size_t b = 0; b < v; ++b) {
          if (a == b) continue;
          auto up = dists, down = dists;
          up[i][a] += kStep;
          up[i][b] -= kStep;
          down[i][a] -= kStep;
          down[i][b] += kStep;
          const double fd = (TokenCrossEntropy(up, targets).value - TokenCrossEntropy(down, targets).value) / (2 * kStep);
          const double analytic = r.gradient[i][a] - r.gradient[i][b];
          ASSERT_LE(RelErr(analytic, fd), kRelTol) << inst << " " << i << " " << a << " " << b;
        }
      }
    }
  }
}

TEST(CombineLossesTest, Examples) {
  const LossBreakdown zero = CombineLosses(0, 0, 0);
  EXPECT_EQ(zero.total, 0.0);
  const LossBreakdown b = CombineLosses(1, 1, 2);
  EXPECT_EQ(b.vlg, 2.0);
  EXPECT_EQ(b.total, 2.0);
  EXPECT_THROW(CombineLosses(-1, 0, 0), Error);
  EXPECT_THROW(CombineLosses(0, std::nan(""), 0), Error);
}

TEST(CombineLossesTest, WeightedSum) {
  Rng rng(8);
  for (int i = 0; i < 10000; ++i) {
    const double f = rng.Uniform(0, 10), d = rng.Uniform(0, 2), q = rng.Uniform(0, 20);
    const LossBreakdown b = CombineLosses(f, d, q);
    ASSERT_NEAR(b.total, 0.5 * (f + d) + 0.5 * q, 1e-12);
    ASSERT_EQ(b.vlg, f + d);
  }
}

TEST(AssignLabelsTest, Examples) {
  const LabelAssignment all = AssignLabels(8, {0, 16}, 16);
  EXPECT_TRUE(std::all_of(all.positives.begin(), all.positives.end(), [](bool b) { return b; }));

  const LabelAssignment l = AssignLabels(10, {2.4, 4.6}, 10);
  for (std::size_t t = 0; t < 10; ++t) EXPECT_EQ(l.positives[t], t >= 2 && t <= 4) << t;
  EXPECT_NEAR(l.targets[2][0], 0.1, 1e-12);
  EXPECT_NEAR(l.targets[2][1], 2.1, 1e-12);
  EXPECT_FALSE(l.no_positives);

  const LabelAssignment none = AssignLabels(10, {3.0, 3.0}, 10);
  EXPECT_TRUE(none.no_positives);
  EXPECT_THROW(AssignLabels(0, {0, 1}, 10), Error);
}

TEST(AssignLabelsTest, TargetsDecodeBackToGroundTruth) {
  Rng rng(9);
  for (int i = 0; i < 300; ++i) {
    const std::size_t n = 4 + rng.Below(60);
    const double dur = rng.Uniform(5, 200);
    double a = rng.Uniform(0, dur), b = rng.Uniform(0, dur);
    if (a > b) std::swap(a, b);
    const LabelAssignment l = AssignLabels(n, {a, b}, dur);
    for (std::size_t t = 0; t < n; ++t) {
      if (!l.positives[t]) continue;
      HeadOutputs heads{std::vector<double>(n, 0.0), std::vector<std::array<double, 2>>(n, {0, 0})};
      heads.scores[t] = 1.0;
      heads.offsets[t] = l.targets[t];
      const auto out = DecodeWindows(heads, dur);
      ASSERT_EQ(out.size(), 1u);
      ASSERT_NEAR(out[0].window.start_s, a, 1e-9 * dur);
      ASSERT_NEAR(out[0].window.end_s, b, 1e-9 * dur);
    }
  }
}

TEST(DecodeWindowsTest, SingleCandidate) {
  HeadOutputs heads{{0.01, 0.9, 0.02}, {{{0, 0}}, {{0.5, 1.0}}, {{0, 0}}}};
  const auto out = DecodeWindows(heads, 30.0);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_DOUBLE_EQ(out[0].window.start_s, 10.0);
  EXPECT_DOUBLE_EQ(out[0].window.end_s, 25.0);
  EXPECT_EQ(out[0].score, 0.9);
}

TEST(DecodeWindowsTest, IdenticalCandidatesSuppressed) {
  HeadOutputs heads{{0.8, 0.9}, {{{0.5, 1.5}}, {{1.5, 0.5}}}};
  const auto out = DecodeWindows(heads, 2.0);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].score, 0.9);
}

TEST(DecodeWindowsTest, ClampsAndValidates) {
  HeadOutputs heads{{0.7}, {{{5.0, 5.0}}}};
  const auto out = DecodeWindows(heads, 10.0);
  EXPECT_EQ(out[0].window, (TemporalWindow{0.0, 10.0}));
  HeadOutputs mismatch{{0.7, 0.2}, {{{1, 1}}}};
  EXPECT_THROW(DecodeWindows(mismatch, 10.0), Error);
  HeadOutputs negative{{0.7}, {{{-1, 1}}}};
  EXPECT_THROW(DecodeWindows(negative, 10.0), Error);
  EXPECT_TRUE(DecodeWindows(HeadOutputs{}, 10.0).empty());
}

TEST(DecodeWindowsTest, MatchesExhaustiveNms) {
  Rng rng(10);
  const DecodeOptions opts;
  for (int inst = 0; inst < 500; ++inst) {
    const std::size_t n = 1 + rng.Below(12);
    const double dur = rng.Uniform(5, 60);
    HeadOutputs heads;
    for (std::size_t t = 0; t < n; ++t) {
      // Coarse scores produce ties; coarse offsets produce duplicates.
      heads.scores.push_back(rng.Below(8) / 7.0);
      heads.offsets.push_back({rng.Below(6) * 0.5, rng.Below(6) * 0.5});
    }
    const auto cands = oracle::RankedCandidates(heads, dur, opts);
    std::vector<TemporalWindow> ranked;
    for (const auto& c : cands) ranked.push_back(c.w);
    int solutions = 0;
    const auto expected = oracle::Nms(ranked, opts.nms_iou, opts.top_k, Iou1D, &solutions);
    ASSERT_EQ(solutions, 1);
    const auto got = DecodeWindows(heads, dur, opts);
    ASSERT_EQ(got.size(), expected.size()) << "instance " << inst;
    for (std::size_t i = 0; i < got.size(); ++i) {
      EXPECT_NEAR(got[i].window.start_s, cands[expected[i]].w.start_s, 1e-12);
      EXPECT_NEAR(got[i].window.end_s, cands[expected[i]].w.end_s, 1e-12);
      EXPECT_EQ(got[i].score, cands[expected[i]].score);
    }
    for (std::size_t i = 0; i < got.size(); ++i) {
      for (std::size_t j = i + 1; j < got.size(); ++j) {
        EXPECT_LT(Iou1D(got[i].window, got[j].window), opts.nms_iou);
      }
    }
  }
}

TEST(DecodeWindowsTest, ScalesWithDuration) {
  Rng rng(12);
  for (int inst = 0; inst < 200; ++inst) {
    const std::size_t n = 1 + rng.Below(20);
    HeadOutputs heads;
    for (std::size_t t = 0; t < n; ++t) {
      heads.scores.push_back(rng.Uniform());
      heads.offsets.push_back({rng.Uniform(0, 4), rng.Uniform(0, 4)});
    }
    const double dur = rng.Uniform(1, 100);
    const double lambda = std::ldexp(1.0, static_cast<int>(rng.Below(9)) - 4);
    const auto a = DecodeWindows(heads, dur);
    const auto b = DecodeWindows(heads, dur * lambda);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_EQ(a[i].window.start_s * lambda, b[i].window.start_s);
      EXPECT_EQ(a[i].window.end_s * lambda, b[i].window.end_s);
    }
  }
}

TEST(JitterWindowTest, IdentityRanges) {
  const JitterOptions identity{1.0, 1.0, 0.0, 0.0};
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    EXPECT_EQ(JitterWindow({10, 20}, 100, seed, identity), (TemporalWindow{10, 20}));
    EXPECT_EQ(JitterWindow({3, 3}, 100, seed), (TemporalWindow{3, 3}));
  }
}

TEST(JitterWindowTest, Bounds) {
  for (std::uint64_t seed = 0; seed < 10000; ++seed) {
    const TemporalWindow w = JitterWindow({10, 20}, 100, seed);
    ASSERT_GT(Iou1D(w, {10, 20}), 0.0);
    ASSERT_GE(w.length(), 8.0 - 1e-12);
    ASSERT_LE(w.length(), 12.5 + 1e-12);
  }
  EXPECT_EQ(JitterWindow({10, 20}, 100, 3), JitterWindow({10, 20}, 100, 3));
  const TemporalWindow edge = JitterWindow({0, 100}, 100, 1, {1.25, 1.25, 0, 0});
  EXPECT_EQ(edge, (TemporalWindow{0, 100}));
}

TEST(ResampleIndicesTest, Examples) {
  std::vector<std::size_t> id(50);
  std::iota(id.begin(), id.end(), 0);
  EXPECT_EQ(ResampleIndices(50, 50), id);
  const auto half = ResampleIndices(2400);
  ASSERT_EQ(half.size(), 1200u);
  for (std::size_t k = 0; k < half.size(); ++k) ASSERT_EQ(half[k], 2 * k);
  EXPECT_EQ(ResampleIndices(7, 3), (std::vector<std::size_t>{0, 2, 4}));
  EXPECT_EQ(ResampleIndices(3, 6), (std::vector<std::size_t>{0, 0, 1, 1, 2, 2}));
  EXPECT_THROW(ResampleIndices(0, 3), Error);
}

TEST(ResampleIndicesTest, MonotoneAndInRange) {
  Rng rng(13);
  for (int i = 0; i < 200; ++i) {
    const std::size_t in = 1 + rng.Below(5000), out = 1 + rng.Below(3000);
    const auto idx = ResampleIndices(in, out);
    ASSERT_EQ(idx.front(), 0u);
    for (std::size_t k = 0; k < idx.size(); ++k) {
      ASSERT_LT(idx[k], in);
      if (k) ASSERT_LE(idx[k - 1], idx[k]);
    }
  }
}

}  // namespace
}  // namespace egoqa
