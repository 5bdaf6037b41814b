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

#include "curate/image.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <string>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "curate/errors.hpp"

namespace curate {
namespace {

bool looks_like_jpeg(std::span<const std::uint8_t> b) {
  return b.size() >= 3 && b[0] == 0xFF && b[1] == 0xD8 && b[2] == 0xFF;
}

// libjpeg happily returns a gray-filled image for truncated input, so a JPEG
// is only accepted when an EOI marker follows the last start-of-scan marker.
// Entropy-coded data byte-stuffs 0xFF, so neither marker occurs inside it.
bool jpeg_has_terminal_eoi(std::span<const std::uint8_t> b) {
  std::size_t last_sos = 0;
  for (std::size_t i = 0; i + 1 < b.size(); ++i) {
    if (b[i] == 0xFF && b[i + 1] == 0xDA) last_sos = i;
  }
  if (last_sos == 0) return false;
  for (std::size_t i = last_sos + 2; i + 1 < b.size(); ++i) {
    if (b[i] == 0xFF && b[i + 1] == 0xD9) return true;
  }
  return false;
}

ImageBuffer from_mat(const cv::Mat& bgr) {
  ImageBuffer out;
  out.width = bgr.cols;
  out.height = bgr.rows;
  out.channels = bgr.channels();
  cv::Mat rgb;
  if (out.channels == 3) {
    cv::cvtColor(bgr, rgb, cv::COLOR_BGR2RGB);
  } else {
    rgb = bgr;
  }
  if (!rgb.isContinuous()) rgb = rgb.clone();
  out.samples.assign(rgb.data, rgb.data + rgb.total() * rgb.elemSize());
  return out;
}

cv::Mat to_bgr_mat(const ImageBuffer& img) {
  const int type = img.channels == 3 ? CV_8UC3 : CV_8UC1;
  cv::Mat view(img.height, img.width, type, const_cast<std::uint8_t*>(img.samples.data()));
  cv::Mat bgr;
  if (img.channels == 3) {
    cv::cvtColor(view, bgr, cv::COLOR_RGB2BGR);
  } else {
    bgr = view;
  }
  return bgr;
}

std::vector<std::uint8_t> encode(const ImageBuffer& img, const std::string& ext,
                                 const std::vector<int>& params) {
  if (!img.valid()) throw Error("encode: invalid image buffer");
  std::vector<std::uint8_t> bytes;
  if (!cv::imencode(ext, to_bgr_mat(img), bytes, params)) {
    throw Error("encode: " + ext + " encoder failed");
  }
  return bytes;
}

// Accumulates one 3x3 correlation in a fixed order so that every code path
// producing the same taps produces the same bits.
inline double tap9(const Kernel3x3& k, double a0, double a1, double a2, double a3, double a4,
                   double a5, double a6, double a7, double a8) {
  double s = k[0] * a0;
  s += k[1] * a1;
  s += k[2] * a2;
  s += k[3] * a3;
  s += k[4] * a4;
  s += k[5] * a5;
  s += k[6] * a6;
  s += k[7] * a7;
  s += k[8] * a8;
  return s;
}

}  // namespace

ImageBuffer ImageBuffer::filled(int width, int height, int channels, std::uint8_t value) {
  ImageBuffer img;
  img.width = width;
  img.height = height;
  img.channels = channels;
  img.samples.assign(static_cast<std::size_t>(width) * height * channels, value);
  return img;
}

bool ImageBuffer::valid() const {
  return width >= 1 && height >= 1 && (channels == 1 || channels == 3) &&
         samples.size() == pixel_count() * static_cast<std::size_t>(channels);
}

ImageBuffer decode(std::span<const std::uint8_t> bytes) {
  if (bytes.empty()) throw DecodeError("empty file");
  if (looks_like_jpeg(bytes) && !jpeg_has_terminal_eoi(bytes)) {
    throw DecodeError("truncated JPEG (no end-of-image marker)");
  }
  cv::Mat raw;
  try {
    const cv::Mat buf(1, static_cast<int>(bytes.size()), CV_8UC1,
                      const_cast<std::uint8_t*>(bytes.data()));
    raw = cv::imdecode(buf, cv::IMREAD_UNCHANGED);
  } catch (const cv::Exception& e) {
    throw DecodeError(std::string("decoder failure: ") + e.what());
  }
  if (raw.empty()) throw DecodeError("corrupt or unsupported image");

  cv::Mat eight;
  switch (raw.depth()) {
    case CV_8U:
      eight = raw;
      break;
    case CV_16U:
      raw.convertTo(eight, CV_8U, 1.0 / 257.0);
      break;
    default:
      throw DecodeError("unsupported sample depth");
  }

  cv::Mat norm;
  switch (eight.channels()) {
    case 1:
    case 3:
      norm = eight;
      break;
    case 2:
      cv::extractChannel(eight, norm, 0);
      break;
    case 4:
      cv::cvtColor(eight, norm, cv::COLOR_BGRA2BGR);
      break;
    default:
      throw DecodeError("unsupported channel count");
  }
  return from_mat(norm);
}

ImageBuffer read_image(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DecodeError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return decode(bytes);
}

std::vector<std::uint8_t> encode_png(const ImageBuffer& img) {
  return encode(img, ".png", {cv::IMWRITE_PNG_COMPRESSION, 3});
}

std::vector<std::uint8_t> encode_jpeg(const ImageBuffer& img, int quality) {
  return encode(img, ".jpg", {cv::IMWRITE_JPEG_QUALITY, std::clamp(quality, 1, 100)});
}

GrayImage to_grayscale(const ImageBuffer& img) {
  GrayImage g(img.width, img.height);
  const std::size_t n = img.pixel_count();
  const std::uint8_t* s = img.samples.data();
  if (img.channels == 1) {
    for (std::size_t i = 0; i < n; ++i) g.values[i] = s[i];
    return g;
  }
  for (std::size_t i = 0; i < n; ++i, s += 3) {
    g.values[i] = std::min(255.0, 0.299 * s[0] + 0.587 * s[1] + 0.114 * s[2]);
  }
  return g;
}

ScalarField convolve3x3(PlaneView g, const Kernel3x3& k) {
  const int w = g.width;
  const int h = g.height;
  ScalarField out(w, h);

  auto clamped = [&](int x, int y) {
    return g.at(std::clamp(x, 0, w - 1), std::clamp(y, 0, h - 1));
  };
  auto border_pixel = [&](int x, int y) {
    out.at(x, y) = tap9(k, clamped(x - 1, y - 1), clamped(x, y - 1), clamped(x + 1, y - 1),
                        clamped(x - 1, y), clamped(x, y), clamped(x + 1, y),
                        clamped(x - 1, y + 1), clamped(x, y + 1), clamped(x + 1, y + 1));
  };

  for (int y = 0; y < h; ++y) {
    if (y == 0 || y == h - 1 || w < 3) {
      for (int x = 0; x < w; ++x) border_pixel(x, y);
      continue;
    }
    const double* up = g.origin + (y - 1) * g.stride;
    const double* mid = up + g.stride;
    const double* dn = mid + g.stride;
    double* dst = out.values.data() + static_cast<std::size_t>(y) * w;
    border_pixel(0, y);
    for (int x = 1; x < w - 1; ++x) {
      dst[x] = tap9(k, up[x - 1], up[x], up[x + 1], mid[x - 1], mid[x], mid[x + 1], dn[x - 1],
                    dn[x], dn[x + 1]);
    }
    border_pixel(w - 1, y);
  }
  return out;
}

double population_variance(std::span<const double> v) {
  if (v.empty()) return 0.0;
  constexpr std::size_t kBlock = 1024;
  const double shift = v[0];
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t base = 0; base < v.size(); base += kBlock) {
    const std::size_t end = std::min(v.size(), base + kBlock);
    double bs = 0.0;
    double bsq = 0.0;
    for (std::size_t i = base; i < end; ++i) {
      const double d = v[i] - shift;
      bs += d;
      bsq += d * d;
    }
    sum += bs;
    sum_sq += bsq;
  }
  const double n = static_cast<double>(v.size());
  const double mean = sum / n;
  return std::max(0.0, sum_sq / n - mean * mean);
}

}  // namespace curate
