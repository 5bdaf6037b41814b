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

#pragma once

// Synthetic images and corpora whose gate outcomes are forced by
// construction.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "curate/image.hpp"

namespace curate::testing {

ImageBuffer constant_image(int w, int h, std::uint8_t value, int channels = 3);

// i.i.d. uniform samples in [0, 255].
ImageBuffer noise_image(int w, int h, std::uint64_t seed, int channels = 3);

// 128 + amplitude * sin(2 pi x / period + phase) * sin(2 pi y / period + phase),
// rounded, identical in every channel. With period 12 and amplitude in
// [80, 110] the Laplacian variance is ~(0.536 A)^2 / 4, i.e. 460-860, and
// every 240-patch has Sobel-magnitude variance in the thousands.
ImageBuffer textured_image(int w, int h, double amplitude, double period, double phase,
                           int channels = 3);

// 480x480: three constant quadrants (value 128) and one textured quadrant
// (period 8, amplitude 100). Flat ratio 0.75; Laplacian variance ~860.
ImageBuffer flat_composite(int textured_quadrant);

GrayImage random_gray(int w, int h, std::uint64_t seed);

void write_png(const std::filesystem::path& path, const ImageBuffer& img);

enum class Expect { kBlurLow, kBlurHigh, kFlat, kPass };

struct CorpusItem {
  std::string relative;
  Expect expect;
};

struct CorpusMix {
  int constant = 0;
  int noise = 0;
  int flat = 0;
  int textured = 0;
  int size = 480;  // side of constant, noise and textured images
};

// Writes a shuffled-name corpus of PNGs under root and returns each file with
// the gate outcome its construction forces under default thresholds.
std::vector<CorpusItem> write_corpus(const std::filesystem::path& root, const CorpusMix& mix,
                                     std::uint64_t seed);

}  // namespace curate::testing
