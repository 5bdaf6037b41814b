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

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace curate {

// Decoded 8-bit pixels, row-major, interleaved. Three-channel buffers are RGB.
struct ImageBuffer {
  int width = 0;
  int height = 0;
  int channels = 0;
  std::vector<std::uint8_t> samples;

  static ImageBuffer filled(int width, int height, int channels, std::uint8_t value);

  std::size_t pixel_count() const {
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  }
  bool valid() const;
  std::uint8_t& at(int x, int y, int c) {
    return samples[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
  std::uint8_t at(int x, int y, int c) const {
    return samples[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }

  friend bool operator==(const ImageBuffer&, const ImageBuffer&) = default;
};

// Non-owning window into a row-major plane of doubles.
struct PlaneView {
  const double* origin = nullptr;
  int width = 0;
  int height = 0;
  std::ptrdiff_t stride = 0;

  double at(int x, int y) const { return origin[y * stride + x]; }
  PlaneView window(int x, int y, int w, int h) const {
    return PlaneView{origin + y * stride + x, w, h, stride};
  }
};

// Owning row-major plane of doubles. The tag keeps intensities and derived
// fields from being mixed up at call sites.
template <class Tag>
struct Plane {
  int width = 0;
  int height = 0;
  std::vector<double> values;

  Plane() = default;
  Plane(int w, int h, double fill = 0.0)
      : width(w), height(h), values(static_cast<std::size_t>(w) * h, fill) {}
  Plane(int w, int h, std::vector<double> v) : width(w), height(h), values(std::move(v)) {}

  double& at(int x, int y) { return values[static_cast<std::size_t>(y) * width + x]; }
  double at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
  PlaneView view() const { return PlaneView{values.data(), width, height, width}; }

  friend bool operator==(const Plane&, const Plane&) = default;
};

struct GrayTag {};
struct FieldTag {};

// Single-channel intensities on the 0-255 scale.
using GrayImage = Plane<GrayTag>;
// Filter response; sign unbounded.
using ScalarField = Plane<FieldTag>;

// Row-major 3x3 correlation kernel.
using Kernel3x3 = std::array<double, 9>;

inline constexpr Kernel3x3 kIdentityKernel{0, 0, 0, 0, 1, 0, 0, 0, 0};
inline constexpr Kernel3x3 kLaplacianKernel{0, 1, 0, 1, -4, 1, 0, 1, 0};
inline constexpr Kernel3x3 kSobelXKernel{-1, 0, 1, -2, 0, 2, -1, 0, 1};
inline constexpr Kernel3x3 kSobelYKernel{-1, -2, -1, 0, 0, 0, 1, 2, 1};

// PNG and JPEG are guaranteed; other formats OpenCV understands are accepted.
// Alpha is dropped, 16-bit samples are scaled to 8 bits. Throws DecodeError.
ImageBuffer decode(std::span<const std::uint8_t> bytes);
ImageBuffer read_image(const std::filesystem::path& path);

std::vector<std::uint8_t> encode_png(const ImageBuffer& img);
std::vector<std::uint8_t> encode_jpeg(const ImageBuffer& img, int quality);

// BT.601 luma, unrounded. One-channel input passes through.
GrayImage to_grayscale(const ImageBuffer& img);

// Same-size correlation with replicate borders.
ScalarField convolve3x3(PlaneView g, const Kernel3x3& kernel);
inline ScalarField convolve3x3(const GrayImage& g, const Kernel3x3& kernel) {
  return convolve3x3(g.view(), kernel);
}

// Population variance, mean(v^2) - mean(v)^2 evaluated on shifted values in
// double precision. Requires a non-empty input.
double population_variance(std::span<const double> values);
inline double population_variance(const ScalarField& f) { return population_variance(f.values); }

}  // namespace curate
