// Copyright 2026 The Curate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "curate/errors.hpp"
#include "curate/filters.hpp"
#include "reference.hpp"
#include "synthetic.hpp"

namespace curate {
namespace {

// An interior impulse of height a in an N-pixel image has a zero-mean
// Laplacian field with values -4a and four times +a, so its variance is
// exactly 20 a^2 / N.
GrayImage interior_impulse(int w, int h, double a) {
  GrayImage g(w, h, 0.0);
  g.at(w / 2, h / 2) = a;
  return g;
}

TEST(BlurScore, ConstantImageIsZero) {
  for (double v : {0.0, 17.0, 255.0}) EXPECT_EQ(blur_score(GrayImage(33, 21, v)), 0.0);
}

TEST(BlurScore, ImpulseMatchesHandComputedField) {
  const GrayImage g = interior_impulse(5, 5, 255.0);
  // (1020^2 + 4 * 255^2) / 25
  EXPECT_DOUBLE_EQ(blur_score(g), 52020.0);
  EXPECT_DOUBLE_EQ(testing::naive_blur_score(g), 52020.0);
}

TEST(BlurGate, ConstantImageRejected) {
  const BlurResult r = blur_gate(GrayImage(64, 64, 128.0), FilterThresholds{});
  EXPECT_EQ(r.score, 0.0);
  EXPECT_FALSE(r.pass);
}

TEST(BlurGate, BandBoundsAreInclusive) {
  const FilterThresholds t;
  const GrayImage at_lo = interior_impulse(5, 6, 15.0);     // 20 * 225 / 30
  const GrayImage at_hi = interior_impulse(10, 10, 200.0);  // 20 * 40000 / 100
  EXPECT_EQ(blur_score(at_lo), 150.0);
  EXPECT_EQ(blur_score(at_hi), 8000.0);
  EXPECT_TRUE(blur_gate(at_lo, t).pass);
  EXPECT_TRUE(blur_gate(at_hi, t).pass);
  EXPECT_FALSE(blur_gate(interior_impulse(5, 6, 14.0), t).pass);
  EXPECT_FALSE(blur_gate(interior_impulse(10, 10, 201.0), t).pass);
}

TEST(BlurGate, UniformNoiseExceedsUpperBound) {
  const GrayImage g = to_grayscale(testing::noise_image(512, 512, 1234));
  const BlurResult r = blur_gate(g, FilterThresholds{});
  EXPECT_NEAR(r.score, testing::naive_blur_score(g), 1e-6 * r.score);
  EXPECT_GT(r.score, 8000.0);
  EXPECT_FALSE(r.pass);
}

TEST(BlurScore, ShiftInvariantAndNonNegative) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    GrayImage g = testing::random_gray(48, 40, rng());
    for (double& v : g.values) v *= 0.5;  // leave headroom for the shift
    const double base = blur_score(g);
    EXPECT_GE(base, 0.0);
    const double c = static_cast<double>(rng() % 120);
    for (double& v : g.values) v += c;
    EXPECT_NEAR(blur_score(g), base, 1e-6);
  }
}

TEST(PatchGrid, Tiling) {
  EXPECT_EQ(patch_grid(GrayImage(480, 480), 240).size(), 4u);
  EXPECT_EQ(patch_grid(GrayImage(500, 480), 240).size(), 4u);
  EXPECT_EQ(patch_grid(GrayImage(719, 250), 240).size(), 2u);

  const GrayImage small(100, 100);
  const auto one = patch_grid(small, 240);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].width, 100);
  EXPECT_EQ(one[0].height, 100);
  EXPECT_EQ(patch_grid(GrayImage(480, 100), 240).size(), 1u);
}

TEST(PatchGrid, RowMajorFromTopLeft) {
  const GrayImage g(500, 490);
  const auto patches = patch_grid(g, 240);
  ASSERT_EQ(patches.size(), 4u);
  const double* base = g.values.data();
  EXPECT_EQ(patches[0].origin, base);
  EXPECT_EQ(patches[1].origin, base + 240);
  EXPECT_EQ(patches[2].origin, base + 240 * 500);
  EXPECT_EQ(patches[3].origin, base + 240 * 500 + 240);
  for (const PlaneView& p : patches) EXPECT_EQ(p.stride, 500);
}

TEST(FlatGate, ConstantImageIsAllFlat) {
  const FlatResult r = flat_gate(GrayImage(480, 480, 90.0), FilterThresholds{});
  EXPECT_EQ(r.patch_scores, std::vector<double>(4, 0.0));
  EXPECT_EQ(r.flat_count, 4);
  EXPECT_EQ(r.patch_count, 4);
  EXPECT_EQ(r.flat_ratio, 1.0);
  EXPECT_FALSE(r.pass);
}

TEST(FlatGate, ThreeFlatQuadrantsFail) {
  for (int q = 0; q < 4; ++q) {
    const FlatResult r = flat_gate(to_grayscale(testing::flat_composite(q)), FilterThresholds{});
    EXPECT_EQ(r.flat_count, 3);
    EXPECT_EQ(r.flat_ratio, 0.75);
    EXPECT_FALSE(r.pass);
    EXPECT_GE(r.patch_scores[q], 800.0);
  }
}

TEST(FlatGate, HalfFlatPasses) {
  GrayImage g(480, 480, 128.0);
  const GrayImage tex = to_grayscale(testing::textured_image(240, 480, 100.0, 12.0, 0.4));
  for (int y = 0; y < 480; ++y) {
    for (int x = 0; x < 240; ++x) g.at(x, y) = tex.at(x, y);
  }
  const FlatResult r = flat_gate(g, FilterThresholds{});
  EXPECT_EQ(r.flat_count, 2);
  EXPECT_EQ(r.flat_ratio, 0.5);
  EXPECT_TRUE(r.pass);
}

TEST(FlatGate, StrictPatchThreshold) {
  const GrayImage g = to_grayscale(testing::textured_image(240, 240, 100.0, 12.0, 0.0));
  const double s = flat_patch_score(g.view());
  FilterThresholds t;
  t.flat_threshold = s;  // s < s is false: not flat
  EXPECT_EQ(flat_gate(g, t).flat_count, 0);
  t.flat_threshold = std::nextafter(s, 1e9);
  EXPECT_EQ(flat_gate(g, t).flat_count, 1);
}

TEST(FlatGate, SmallImageIsOneWholePatch) {
  const GrayImage g = testing::random_gray(100, 60, 4);
  const FlatResult r = flat_gate(g, FilterThresholds{});
  ASSERT_EQ(r.patch_count, 1);
  EXPECT_NEAR(r.patch_scores[0], testing::naive_patch_flatness(g, 0, 0, 100, 60), 1e-6);
}

TEST(FlatGate, MatchesNaiveReference) {
  std::mt19937_64 rng(77);
  FilterThresholds t;
  t.patch_size = 32;
  for (int trial = 0; trial < 50; ++trial) {
    const GrayImage g = testing::random_gray(64, 64, rng());
    const FlatResult r = flat_gate(g, t);
    ASSERT_EQ(r.patch_count, 4);
    for (int p = 0; p < 4; ++p) {
      const double ref = testing::naive_patch_flatness(g, (p % 2) * 32, (p / 2) * 32, 32, 32);
      ASSERT_NEAR(r.patch_scores[p], ref, 1e-6);
      ASSERT_GE(r.patch_scores[p], 0.0);
    }
  }
}

TEST(FlatGate, PatchScoreIsFlipInvariant) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const GrayImage g = testing::random_gray(37, 29, rng());
    GrayImage hflip(37, 29);
    GrayImage vflip(37, 29);
    for (int y = 0; y < 29; ++y) {
      for (int x = 0; x < 37; ++x) {
        hflip.at(36 - x, y) = g.at(x, y);
        vflip.at(x, 28 - y) = g.at(x, y);
      }
    }
    const double s = flat_patch_score(g.view());
    EXPECT_NEAR(flat_patch_score(hflip.view()), s, 1e-6);
    EXPECT_NEAR(flat_patch_score(vflip.view()), s, 1e-6);
  }
}

TEST(FlatGate, PatchOrderDoesNotMatter) {
  const GrayImage g = testing::random_gray(96, 96, 21);
  auto patches = patch_grid(g, 32);
  std::vector<double> forward;
  for (const PlaneView& p : patches) forward.push_back(flat_patch_score(p));
  std::vector<double> backward(patches.size());
  for (std::size_t i = patches.size(); i-- > 0;) backward[i] = flat_patch_score(patches[i]);
  EXPECT_EQ(forward, backward);
}

TEST(SyntheticCorpus, TexturedImagesPassBothGates) {
  const FilterThresholds t;
  for (double amp : {80.0, 95.0, 110.0}) {
    for (double phase : {0.0, 1.3, 4.0}) {
      const GrayImage g = to_grayscale(testing::textured_image(480, 480, amp, 12.0, phase));
      const BlurResult b = blur_gate(g, t);
      EXPECT_TRUE(b.pass) << amp << " " << b.score;
      const FlatResult f = flat_gate(g, t);
      EXPECT_EQ(f.flat_count, 0);
      EXPECT_TRUE(f.pass);
    }
  }
  for (int q = 0; q < 4; ++q) {
    EXPECT_TRUE(blur_gate(to_grayscale(testing::flat_composite(q)), t).pass);
  }
}

TEST(FilterThresholds, Validation) {
  FilterThresholds t;
  EXPECT_NO_THROW(t.validate());
  t.blur_lo = 9000;
  EXPECT_THROW(t.validate(), ConfigError);
  t = {};
  t.patch_size = 0;
  EXPECT_THROW(t.validate(), ConfigError);
  t = {};
  t.flat_ratio_limit = 1.5;
  EXPECT_THROW(t.validate(), ConfigError);
}

}  // namespace
}  // namespace curate
