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

#include "curate/degrade.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>
#include <nlohmann/json.hpp>
#include <opencv2/core.hpp>
#include <opencv2/imgproc.hpp>

#include "curate/errors.hpp"
#include "curate/hash.hpp"
#include "curate/rng.hpp"

namespace curate {
namespace {

using nlohmann::json;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

cv::Mat as_mat(ImageBuffer& img) {
  return cv::Mat(img.height, img.width, img.channels == 3 ? CV_8UC3 : CV_8UC1,
                 img.samples.data());
}

ImageBuffer from_mat(const cv::Mat& m) {
  ImageBuffer out;
  out.width = m.cols;
  out.height = m.rows;
  out.channels = m.channels();
  const cv::Mat c = m.isContinuous() ? m : m.clone();
  out.samples.assign(c.data, c.data + c.total() * c.elemSize());
  return out;
}

int interpolation(ResizeMode mode) {
  switch (mode) {
    case ResizeMode::kNearest:
      return cv::INTER_NEAREST;
    case ResizeMode::kBilinear:
      return cv::INTER_LINEAR;
    case ResizeMode::kBicubic:
      return cv::INTER_CUBIC;
    case ResizeMode::kArea:
      return cv::INTER_AREA;
  }
  return cv::INTER_LINEAR;
}

std::uint8_t to_u8(double v) { return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L)); }

ImageBuffer blur(ImageBuffer img, const BlurOp& op) {
  cv::Mat dst;
  cv::GaussianBlur(as_mat(img), dst, cv::Size(op.kernel_size, op.kernel_size), op.sigma, op.sigma,
                   cv::BORDER_REFLECT_101);
  return from_mat(dst);
}

ImageBuffer resize(ImageBuffer img, const ResizeOp& op) {
  if (op.width == img.width && op.height == img.height) return img;
  cv::Mat dst;
  cv::resize(as_mat(img), dst, cv::Size(op.width, op.height), 0, 0, interpolation(op.mode));
  return from_mat(dst);
}

ImageBuffer gaussian_noise(ImageBuffer img, const GaussianNoiseOp& op) {
  Rng rng(op.seed);
  for (std::uint8_t& s : img.samples) s = to_u8(s + op.sigma * rng.normal());
  return img;
}

// Signal-dependent Gaussian standing in for shot noise.
ImageBuffer poisson_noise(ImageBuffer img, const PoissonNoiseOp& op) {
  Rng rng(op.seed);
  for (std::uint8_t& s : img.samples) {
    s = to_u8(s + op.scale * std::sqrt(static_cast<double>(s)) * rng.normal());
  }
  return img;
}

ImageBuffer jpeg(const ImageBuffer& img, const JpegOp& op) {
  return decode(encode_jpeg(img, op.quality));
}

void check_interval(const Interval& i, const char* name) {
  if (!(i.lo <= i.hi)) throw ConfigError(fmt::format("{}: empty interval", name));
}

void check_order(const OrderRanges& r, const char* which) {
  auto name = [&](const char* field) { return fmt::format("{}.{}", which, field); };
  auto prob = [&](double p, const char* field) {
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError(name(field) + " must lie in [0, 1]");
  };
  prob(r.blur_prob, "blur_prob");
  prob(r.poisson_prob, "poisson_prob");
  check_interval(r.blur_sigma, name("blur_sigma").c_str());
  check_interval(r.resize_scale, name("resize_scale").c_str());
  check_interval(r.gauss_noise_sigma, name("gauss_noise_sigma").c_str());
  check_interval(r.poisson_scale, name("poisson_scale").c_str());
  if (r.blur_sigma.lo <= 0.0) throw ConfigError(name("blur_sigma") + " must be positive");
  if (r.resize_scale.lo <= 0.0) throw ConfigError(name("resize_scale") + " must be positive");
  if (r.gauss_noise_sigma.lo < 0.0 || r.poisson_scale.lo < 0.0) {
    throw ConfigError(name("noise") + " must be non-negative");
  }
  if (!(1 <= r.jpeg_quality.lo && r.jpeg_quality.lo <= r.jpeg_quality.hi &&
        r.jpeg_quality.hi <= 100)) {
    throw ConfigError(name("jpeg_quality") + " must be a non-empty subrange of [1, 100]");
  }
}

json interval_json(const Interval& i) { return json::array({i.lo, i.hi}); }
json interval_json(const IntInterval& i) { return json::array({i.lo, i.hi}); }

Interval read_interval(const json& j, const char* key, Interval fallback) {
  if (!j.contains(key)) return fallback;
  const json& a = j.at(key);
  return {a.at(0).get<double>(), a.at(1).get<double>()};
}

IntInterval read_int_interval(const json& j, const char* key, IntInterval fallback) {
  if (!j.contains(key)) return fallback;
  const json& a = j.at(key);
  return {a.at(0).get<int>(), a.at(1).get<int>()};
}

json order_json(const OrderRanges& r) {
  return {{"blur_prob", r.blur_prob},
          {"blur_sigma", interval_json(r.blur_sigma)},
          {"resize_scale", interval_json(r.resize_scale)},
          {"poisson_prob", r.poisson_prob},
          {"gauss_noise_sigma", interval_json(r.gauss_noise_sigma)},
          {"poisson_scale", interval_json(r.poisson_scale)},
          {"jpeg_quality", interval_json(r.jpeg_quality)}};
}

OrderRanges read_order(const json& j, const OrderRanges& d) {
  OrderRanges r;
  r.blur_prob = j.value("blur_prob", d.blur_prob);
  r.blur_sigma = read_interval(j, "blur_sigma", d.blur_sigma);
  r.resize_scale = read_interval(j, "resize_scale", d.resize_scale);
  r.poisson_prob = j.value("poisson_prob", d.poisson_prob);
  r.gauss_noise_sigma = read_interval(j, "gauss_noise_sigma", d.gauss_noise_sigma);
  r.poisson_scale = read_interval(j, "poisson_scale", d.poisson_scale);
  r.jpeg_quality = read_int_interval(j, "jpeg_quality", d.jpeg_quality);
  return r;
}

int gaussian_kernel_size(double sigma) {
  const int half = static_cast<int>(std::ceil(3.0 * sigma));
  return std::clamp(2 * half + 1, 3, 21);
}

void sample_order(int order, const OrderRanges& r, const std::vector<ResizeMode>& modes,
                  bool with_jpeg, Rng& rng, int& width, int& height,
                  std::vector<AppliedOp>& plan) {
  if (rng.bernoulli(r.blur_prob)) {
    const double sigma = rng.uniform(r.blur_sigma.lo, r.blur_sigma.hi);
    plan.push_back({order, BlurOp{sigma, gaussian_kernel_size(sigma)}});
  }

  const double scale = rng.uniform(r.resize_scale.lo, r.resize_scale.hi);
  const ResizeMode mode = modes[rng.index(modes.size())];
  const int w = static_cast<int>(std::lround(width * scale));
  const int h = static_cast<int>(std::lround(height * scale));
  if (w < DegradationConfig::kMinDimension || h < DegradationConfig::kMinDimension) {
    throw DegradeError(fmt::format(
        "order-{} resize of {}x{} by {:.4f} gives {}x{}, below the {}-pixel minimum", order, width,
        height, scale, w, h, DegradationConfig::kMinDimension));
  }
  plan.push_back({order, ResizeOp{w, h, mode}});
  width = w;
  height = h;

  if (rng.bernoulli(r.poisson_prob)) {
    const double s = rng.uniform(r.poisson_scale.lo, r.poisson_scale.hi);
    plan.push_back({order, PoissonNoiseOp{s, rng.next_u64()}});
  } else {
    const double s = rng.uniform(r.gauss_noise_sigma.lo, r.gauss_noise_sigma.hi);
    plan.push_back({order, GaussianNoiseOp{s, rng.next_u64()}});
  }

  if (with_jpeg) {
    plan.push_back(
        {order, JpegOp{static_cast<int>(rng.uniform_int(r.jpeg_quality.lo, r.jpeg_quality.hi))}});
  }
}

}  // namespace

std::string_view to_string(ResizeMode mode) {
  switch (mode) {
    case ResizeMode::kNearest:
      return "nearest";
    case ResizeMode::kBilinear:
      return "bilinear";
    case ResizeMode::kBicubic:
      return "bicubic";
    case ResizeMode::kArea:
      return "area";
  }
  return "bilinear";
}

ResizeMode resize_mode_from_string(std::string_view name) {
  for (ResizeMode m : {ResizeMode::kNearest, ResizeMode::kBilinear, ResizeMode::kBicubic,
                       ResizeMode::kArea}) {
    if (to_string(m) == name) return m;
  }
  throw ConfigError(fmt::format("unknown resize mode '{}'", name));
}

void DegradationConfig::validate() const {
  if (epochs < 1) throw ConfigError("epochs must be >= 1");
  if (resize_modes.empty()) throw ConfigError("resize_modes must not be empty");
  if (lq_format != "png" && lq_format != "jpg") throw ConfigError("lq_format must be png or jpg");
  check_order(first, "first");
  check_order(second, "second");
}

void to_json(json& j, const DegradationConfig& cfg) {
  json modes = json::array();
  for (ResizeMode m : cfg.resize_modes) modes.push_back(std::string(to_string(m)));
  j = {{"epochs", cfg.epochs},
       {"global_seed", cfg.global_seed},
       {"first", order_json(cfg.first)},
       {"second", order_json(cfg.second)},
       {"resize_modes", modes},
       {"lq_format", cfg.lq_format}};
}

void from_json(const json& j, DegradationConfig& cfg) {
  const DegradationConfig d;
  cfg.epochs = j.value("epochs", d.epochs);
  cfg.global_seed = j.value("global_seed", d.global_seed);
  cfg.first = read_order(j.value("first", json::object()), d.first);
  cfg.second = read_order(j.value("second", json::object()), d.second);
  cfg.resize_modes = d.resize_modes;
  if (j.contains("resize_modes")) {
    cfg.resize_modes.clear();
    for (const json& m : j.at("resize_modes")) {
      cfg.resize_modes.push_back(resize_mode_from_string(m.get<std::string>()));
    }
  }
  cfg.lq_format = j.value("lq_format", d.lq_format);
}

json ops_to_json(std::span<const AppliedOp> ops) {
  json arr = json::array();
  for (const AppliedOp& op : ops) {
    json o = std::visit(
        Overloaded{
            [](const BlurOp& b) {
              return json{{"op", "blur"}, {"sigma", b.sigma}, {"kernel_size", b.kernel_size}};
            },
            [](const ResizeOp& r) {
              return json{{"op", "resize"},
                          {"width", r.width},
                          {"height", r.height},
                          {"mode", std::string(to_string(r.mode))}};
            },
            [](const GaussianNoiseOp& g) {
              return json{{"op", "gaussian_noise"}, {"sigma", g.sigma}, {"seed", g.seed}};
            },
            [](const PoissonNoiseOp& p) {
              return json{{"op", "poisson_noise"}, {"scale", p.scale}, {"seed", p.seed}};
            },
            [](const JpegOp& q) { return json{{"op", "jpeg"}, {"quality", q.quality}}; }},
        op.step);
    o["order"] = op.order;
    arr.push_back(std::move(o));
  }
  return arr;
}

std::vector<AppliedOp> ops_from_json(const json& j) {
  std::vector<AppliedOp> ops;
  for (const json& o : j) {
    const std::string name = o.at("op").get<std::string>();
    AppliedOp op;
    op.order = o.at("order").get<int>();
    if (name == "blur") {
      op.step = BlurOp{o.at("sigma").get<double>(), o.at("kernel_size").get<int>()};
    } else if (name == "resize") {
      op.step = ResizeOp{o.at("width").get<int>(), o.at("height").get<int>(),
                         resize_mode_from_string(o.at("mode").get<std::string>())};
    } else if (name == "gaussian_noise") {
      op.step = GaussianNoiseOp{o.at("sigma").get<double>(), o.at("seed").get<std::uint64_t>()};
    } else if (name == "poisson_noise") {
      op.step = PoissonNoiseOp{o.at("scale").get<double>(), o.at("seed").get<std::uint64_t>()};
    } else if (name == "jpeg") {
      op.step = JpegOp{o.at("quality").get<int>()};
    } else {
      throw Error("unknown degradation op '" + name + "'");
    }
    ops.push_back(std::move(op));
  }
  return ops;
}

std::uint64_t derive_seed(std::uint64_t global_seed, std::string_view image_id,
                          std::uint64_t epoch) {
  return fnv1a64(fmt::format("{}|{}|{}", global_seed, image_id, epoch));
}

std::vector<AppliedOp> sample_plan(int width, int height, const DegradationConfig& cfg,
                                   std::uint64_t seed) {
  Rng rng(seed);
  std::vector<AppliedOp> plan;
  int w = width;
  int h = height;
  sample_order(1, cfg.first, cfg.resize_modes, true, rng, w, h, plan);
  // The second pass's JPEG is the final one, taken after the resize back.
  sample_order(2, cfg.second, cfg.resize_modes, false, rng, w, h, plan);
  plan.push_back({0, ResizeOp{width, height, cfg.resize_modes[rng.index(cfg.resize_modes.size())]}});
  plan.push_back({0, JpegOp{static_cast<int>(rng.uniform_int(cfg.second.jpeg_quality.lo,
                                                             cfg.second.jpeg_quality.hi))}});
  return plan;
}

ImageBuffer apply_ops(const ImageBuffer& hq, std::span<const AppliedOp> ops) {
  ImageBuffer img = hq;
  for (const AppliedOp& op : ops) {
    img = std::visit(Overloaded{[&](const BlurOp& b) { return blur(std::move(img), b); },
                                [&](const ResizeOp& r) { return resize(std::move(img), r); },
                                [&](const GaussianNoiseOp& g) {
                                  return gaussian_noise(std::move(img), g);
                                },
                                [&](const PoissonNoiseOp& p) {
                                  return poisson_noise(std::move(img), p);
                                },
                                [&](const JpegOp& q) { return jpeg(img, q); }},
                     op.step);
  }
  return img;
}

DegradeResult degrade_once(const ImageBuffer& hq, const DegradationConfig& cfg,
                           std::uint64_t seed) {
  DegradeResult r;
  r.ops = sample_plan(hq.width, hq.height, cfg, seed);
  r.lq = apply_ops(hq, r.ops);
  return r;
}

}  // namespace curate
