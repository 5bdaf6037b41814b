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

#include <cstdint>
#include <random>
#include <vector>

#include "curate/errors.hpp"
#include "curate/image.hpp"
#include "reference.hpp"
#include "synthetic.hpp"

namespace curate {
namespace {

// Encoded with PIL, independent of the library's own encoder.
const std::vector<std::uint8_t> kWhite2x2Png = {
    0x89, 0x50, 0x4e, 0x47, 0xd,  0xa,  0x1a, 0xa,  0x0,  0x0,  0x0,  0xd,  0x49, 0x48,
    0x44, 0x52, 0x0,  0x0,  0x0,  0x2,  0x0,  0x0,  0x0,  0x2,  0x8,  0x2,  0x0,  0x0,
    0x0,  0xfd, 0xd4, 0x9a, 0x73, 0x0,  0x0,  0x0,  0x16, 0x49, 0x44, 0x41, 0x54, 0x78,
    0x9c, 0x63, 0xfc, 0xff, 0xff, 0x3f, 0x3,  0x3,  0x3,  0x13, 0x3,  0x3,  0x3,  0x3,
    0x3,  0x3,  0x0,  0x24, 0x6,  0x3,  0x1,  0xfc, 0x35, 0xde, 0x9b, 0x0,  0x0,  0x0,
    0x0,  0x49, 0x45, 0x4e, 0x44, 0xae, 0x42, 0x60, 0x82};

// 2x1 RGBA, every pixel (10, 20, 30, 40).
const std::vector<std::uint8_t> kRgbaPng = {
    0x89, 0x50, 0x4e, 0x47, 0xd,  0xa,  0x1a, 0xa,  0x0,  0x0,  0x0,  0xd,  0x49,
    0x48, 0x44, 0x52, 0x0,  0x0,  0x0,  0x2,  0x0,  0x0,  0x0,  0x1,  0x8,  0x6,
    0x0,  0x0,  0x0,  0xf4, 0x22, 0x7f, 0x8a, 0x0,  0x0,  0x0,  0x11, 0x49, 0x44,
    0x41, 0x54, 0x78, 0x9c, 0x63, 0xe4, 0x12, 0x91, 0xd3, 0x60, 0x60, 0x60, 0x60,
    0x0,  0x0,  0x2,  0x6a, 0x0,  0x66, 0x83, 0x74, 0xe7, 0x14, 0x0,  0x0,  0x0,
    0x0,  0x49, 0x45, 0x4e, 0x44, 0xae, 0x42, 0x60, 0x82};

// 2x2 16-bit gray: 0, 65535, 25700, 1000.
const std::vector<std::uint8_t> kGray16Png = {
    0x89, 0x50, 0x4e, 0x47, 0xd,  0xa,  0x1a, 0xa,  0x0,  0x0,  0x0,  0xd,  0x49,
    0x48, 0x44, 0x52, 0x0,  0x0,  0x0,  0x2,  0x0,  0x0,  0x0,  0x2,  0x10, 0x0,
    0x0,  0x0,  0x0,  0x7,  0x4d, 0x8e, 0xbb, 0x0,  0x0,  0x0,  0x12, 0x49, 0x44,
    0x41, 0x54, 0x78, 0x9c, 0x63, 0x60, 0x60, 0xf8, 0xff, 0x9f, 0x21, 0x25, 0x85,
    0xf9, 0x5,  0x0,  0x10, 0xa7, 0x3,  0xb2, 0x99, 0x31, 0x82, 0x17, 0x0,  0x0,
    0x0,  0x0,  0x49, 0x45, 0x4e, 0x44, 0xae, 0x42, 0x60, 0x82};

GrayImage impulse5x5() {
  GrayImage g(5, 5, 0.0);
  g.at(2, 2) = 255.0;
  return g;
}

TEST(Decode, WhitePng) {
  const ImageBuffer img = decode(kWhite2x2Png);
  EXPECT_EQ(img.width, 2);
  EXPECT_EQ(img.height, 2);
  EXPECT_EQ(img.channels, 3);
  EXPECT_EQ(img.samples, std::vector<std::uint8_t>(12, 255));
}

TEST(Decode, AlphaIsDropped) {
  const ImageBuffer img = decode(kRgbaPng);
  ASSERT_EQ(img.channels, 3);
  EXPECT_EQ(img.samples, (std::vector<std::uint8_t>{10, 20, 30, 10, 20, 30}));
}

TEST(Decode, SixteenBitScaledToEightBit) {
  const ImageBuffer img = decode(kGray16Png);
  ASSERT_EQ(img.channels, 1);
  EXPECT_EQ(img.samples, (std::vector<std::uint8_t>{0, 255, 100, 4}));
}

TEST(Decode, TruncatedJpegFails) {
  const std::vector<std::uint8_t> jpg =
      encode_jpeg(testing::textured_image(64, 64, 90, 12, 0.3), 90);
  ASSERT_NO_THROW(decode(jpg));
  const std::vector<std::uint8_t> cut(jpg.begin(), jpg.begin() + jpg.size() / 2);
  EXPECT_THROW(decode(cut), DecodeError);
}

TEST(Decode, CorruptInputsFail) {
  EXPECT_THROW(decode(std::vector<std::uint8_t>{}), DecodeError);
  EXPECT_THROW(decode(std::vector<std::uint8_t>{1, 2, 3, 4, 5}), DecodeError);
  const std::vector<std::uint8_t> cut(kWhite2x2Png.begin(), kWhite2x2Png.begin() + 40);
  EXPECT_THROW(decode(cut), DecodeError);
  EXPECT_THROW(read_image("/nonexistent/file.png"), DecodeError);
}

TEST(Decode, PngRoundTripIsLossless) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const int w = 1 + static_cast<int>(rng() % 40);
    const int h = 1 + static_cast<int>(rng() % 40);
    const int c = (rng() & 1) ? 3 : 1;
    const ImageBuffer x = decode(encode_png(testing::noise_image(w, h, rng(), c)));
    const std::vector<std::uint8_t> reencoded = encode_png(x);
    EXPECT_EQ(decode(reencoded), x);
  }
}

TEST(Grayscale, LumaWeights) {
  ImageBuffer px = ImageBuffer::filled(1, 1, 3, 128);
  EXPECT_NEAR(to_grayscale(px).values[0], 128.0, 1e-12);
  px.samples = {255, 0, 0};
  EXPECT_NEAR(to_grayscale(px).values[0], 76.245, 1e-12);
  px.samples = {0, 255, 0};
  EXPECT_NEAR(to_grayscale(px).values[0], 0.587 * 255, 1e-12);
}

TEST(Grayscale, SingleChannelPassthrough) {
  const ImageBuffer img = testing::noise_image(9, 7, 3, 1);
  const GrayImage g = to_grayscale(img);
  for (std::size_t i = 0; i < img.samples.size(); ++i) EXPECT_EQ(g.values[i], img.samples[i]);
}

TEST(Grayscale, BoundedForAllInputs) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const GrayImage g = to_grayscale(testing::noise_image(16, 16, rng()));
    for (double v : g.values) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 255.0);
    }
  }
  EXPECT_LE(to_grayscale(ImageBuffer::filled(3, 3, 3, 255)).values[4], 255.0);
}

TEST(Convolve, IdentityKernelIsExact) {
  const GrayImage g = testing::random_gray(31, 17, 5);
  const ScalarField f = convolve3x3(g, kIdentityKernel);
  EXPECT_EQ(f.values, g.values);
}

TEST(Convolve, ZeroSumKernelOnConstantIsZero) {
  const GrayImage g(20, 12, 77.0);
  for (const Kernel3x3& k : {kLaplacianKernel, kSobelXKernel, kSobelYKernel}) {
    for (double v : convolve3x3(g, k).values) EXPECT_EQ(v, 0.0);
  }
}

TEST(Convolve, LaplacianOfImpulse) {
  const ScalarField f = convolve3x3(impulse5x5(), kLaplacianKernel);
  const ScalarField ref = testing::naive_convolve(impulse5x5(), kLaplacianKernel);
  for (int y = 0; y < 5; ++y) {
    for (int x = 0; x < 5; ++x) {
      double expected = 0.0;
      if (x == 2 && y == 2) expected = -1020.0;
      if ((std::abs(x - 2) + std::abs(y - 2)) == 1) expected = 255.0;
      EXPECT_EQ(ref.at(x, y), expected) << x << "," << y;
      EXPECT_EQ(f.at(x, y), expected) << x << "," << y;
    }
  }
}

TEST(Convolve, MatchesNaiveReferenceOnRandomImages) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const int w = 1 + static_cast<int>(rng() % 70);
    const int h = 1 + static_cast<int>(rng() % 70);
    const GrayImage g = testing::random_gray(w, h, rng());
    for (const Kernel3x3& k : {kLaplacianKernel, kSobelXKernel, kSobelYKernel}) {
      const ScalarField fast = convolve3x3(g, k);
      const ScalarField slow = testing::naive_convolve(g, k);
      for (std::size_t i = 0; i < fast.values.size(); ++i) {
        ASSERT_NEAR(fast.values[i], slow.values[i], 1e-6) << w << "x" << h << " @" << i;
      }
    }
  }
}

TEST(Convolve, IsLinear) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    const GrayImage g1 = testing::random_gray(23, 19, rng());
    const GrayImage g2 = testing::random_gray(23, 19, rng());
    const double a = coef(rng);
    const double b = coef(rng);
    GrayImage mix(23, 19);
    for (std::size_t i = 0; i < mix.values.size(); ++i) {
      mix.values[i] = a * g1.values[i] + b * g2.values[i];
    }
    const ScalarField lhs = convolve3x3(mix, kLaplacianKernel);
    const ScalarField r1 = convolve3x3(g1, kLaplacianKernel);
    const ScalarField r2 = convolve3x3(g2, kLaplacianKernel);
    for (std::size_t i = 0; i < lhs.values.size(); ++i) {
      ASSERT_NEAR(lhs.values[i], a * r1.values[i] + b * r2.values[i], 1e-6);
    }
  }
}

TEST(Convolve, WindowUsesItsOwnBorders) {
  const GrayImage g = testing::random_gray(12, 12, 8);
  const PlaneView win = g.view().window(3, 4, 5, 6);
  GrayImage copy(5, 6);
  for (int y = 0; y < 6; ++y) {
    for (int x = 0; x < 5; ++x) copy.at(x, y) = g.at(3 + x, 4 + y);
  }
  EXPECT_EQ(convolve3x3(win, kSobelXKernel), convolve3x3(copy, kSobelXKernel));
}

TEST(Variance, SmallCases) {
  EXPECT_EQ(population_variance(std::vector<double>(100, 3.25)), 0.0);
  EXPECT_DOUBLE_EQ(population_variance(std::vector<double>{0.0, 2.0}), 1.0);
  EXPECT_EQ(population_variance(std::vector<double>{42.0}), 0.0);
}

TEST(Variance, MatchesTwoPassReference) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const GrayImage g = testing::random_gray(64, 64, rng());
    const double ref = testing::two_pass_variance(g.values);
    EXPECT_NEAR(population_variance(g.values), ref, 1e-9 * ref);
  }
}

TEST(Variance, TranslationAndScaleInvariance) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> shift(-1e4, 1e4);
  std::uniform_real_distribution<double> scale(-5.0, 5.0);
  for (int trial = 0; trial < 30; ++trial) {
    const GrayImage g = testing::random_gray(40, 30, rng());
    const double base = population_variance(g.values);
    const double c = shift(rng);
    const double s = scale(rng);
    std::vector<double> shifted = g.values;
    std::vector<double> scaled = g.values;
    for (double& v : shifted) v += c;
    for (double& v : scaled) v *= s;
    EXPECT_NEAR(population_variance(shifted), base, 1e-6);
    EXPECT_NEAR(population_variance(scaled), s * s * base, 1e-6 * s * s * base);
  }
}

}  // namespace
}  // namespace curate
