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

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "curate/image.hpp"

namespace curate {

enum class ResizeMode { kNearest, kBilinear, kBicubic, kArea };

std::string_view to_string(ResizeMode mode);
ResizeMode resize_mode_from_string(std::string_view name);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct IntInterval {
  int lo = 0;
  int hi = 0;
};

// Parameter ranges for one blur -> resize -> noise -> JPEG pass.
struct OrderRanges {
  double blur_prob = 1.0;
  Interval blur_sigma{0.2, 3.0};
  Interval resize_scale{0.15, 1.5};
  double poisson_prob = 0.4;
  Interval gauss_noise_sigma{1.0, 30.0};  // 0-255 scale
  Interval poisson_scale{0.05, 2.0};      // noise sigma = scale * sqrt(intensity)
  IntInterval jpeg_quality{30, 95};
};

// Second-order chain in the style of Real-ESRGAN, simplified: isotropic
// Gaussian blur only, no sinc filters.
//   order 1: [blur] -> resize -> noise -> JPEG
//   order 2: [blur] -> resize -> noise
//   final:   resize to the HQ size -> JPEG (quality from second.jpeg_quality)
struct DegradationConfig {
  int epochs = 4;
  std::uint64_t global_seed = 0;
  OrderRanges first;
  OrderRanges second{0.8, {0.2, 1.5}, {0.3, 1.2}, 0.4, {1.0, 25.0}, {0.05, 1.5}, {30, 95}};
  std::vector<ResizeMode> resize_modes{ResizeMode::kBilinear, ResizeMode::kBicubic,
                                       ResizeMode::kArea};
  std::string lq_format = "png";  // "png" or "jpg"

  static constexpr int kMinDimension = 16;

  // Throws ConfigError on an empty interval, out-of-range probability or
  // quality, or epochs < 1.
  void validate() const;
};

void to_json(nlohmann::json& j, const DegradationConfig& cfg);
void from_json(const nlohmann::json& j, DegradationConfig& cfg);

struct BlurOp {
  double sigma = 0.0;
  int kernel_size = 3;
};
struct ResizeOp {
  int width = 0;
  int height = 0;
  ResizeMode mode = ResizeMode::kBilinear;
};
struct GaussianNoiseOp {
  double sigma = 0.0;
  std::uint64_t seed = 0;
};
struct PoissonNoiseOp {
  double scale = 0.0;
  std::uint64_t seed = 0;
};
struct JpegOp {
  int quality = 95;
};

using DegradeStep = std::variant<BlurOp, ResizeOp, GaussianNoiseOp, PoissonNoiseOp, JpegOp>;

// One executed step. order is 1 or 2 for the two chain passes, 0 for the
// final resize and JPEG.
struct AppliedOp {
  int order = 0;
  DegradeStep step;
};

nlohmann::json ops_to_json(std::span<const AppliedOp> ops);
std::vector<AppliedOp> ops_from_json(const nlohmann::json& j);

struct DegradeResult {
  ImageBuffer lq;
  std::vector<AppliedOp> ops;
};

// FNV-1a 64 of "<global_seed>|<image_id>|<epoch>" (decimal, UTF-8).
std::uint64_t derive_seed(std::uint64_t global_seed, std::string_view image_id,
                          std::uint64_t epoch);

// Draws every random parameter of the chain, noise seeds included.
// Throws DegradeError if an intermediate size would drop below kMinDimension.
std::vector<AppliedOp> sample_plan(int width, int height, const DegradationConfig& cfg,
                                   std::uint64_t seed);

// Executes a plan. Replaying a logged plan reproduces the LQ bytes exactly.
ImageBuffer apply_ops(const ImageBuffer& hq, std::span<const AppliedOp> ops);

DegradeResult degrade_once(const ImageBuffer& hq, const DegradationConfig& cfg,
                           std::uint64_t seed);

}  // namespace curate
