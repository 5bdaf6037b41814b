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

#include "curate/filters.hpp"

#include <cmath>
#include <string>

#include "curate/errors.hpp"

namespace curate {

void FilterThresholds::validate() const {
  if (!(blur_lo >= 0.0 && blur_lo < blur_hi)) {
    throw ConfigError("blur band requires 0 <= blur_lo < blur_hi");
  }
  if (patch_size < 1) throw ConfigError("patch_size must be >= 1");
  if (!(flat_threshold >= 0.0)) throw ConfigError("flat_threshold must be >= 0");
  if (!(flat_ratio_limit >= 0.0 && flat_ratio_limit <= 1.0)) {
    throw ConfigError("flat_ratio_limit must lie in [0, 1]");
  }
}

double blur_score(const GrayImage& g) {
  return population_variance(convolve3x3(g, kLaplacianKernel));
}

BlurResult blur_gate(const GrayImage& g, const FilterThresholds& t) {
  BlurResult r;
  r.score = blur_score(g);
  r.pass = t.blur_lo <= r.score && r.score <= t.blur_hi;
  return r;
}

std::vector<PlaneView> patch_grid(const GrayImage& g, int patch_size) {
  const PlaneView whole = g.view();
  if (g.width < patch_size || g.height < patch_size) return {whole};
  const int cols = g.width / patch_size;
  const int rows = g.height / patch_size;
  std::vector<PlaneView> patches;
  patches.reserve(static_cast<std::size_t>(cols) * rows);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      patches.push_back(whole.window(c * patch_size, r * patch_size, patch_size, patch_size));
    }
  }
  return patches;
}

ScalarField sobel_magnitude(PlaneView g) {
  ScalarField gx = convolve3x3(g, kSobelXKernel);
  const ScalarField gy = convolve3x3(g, kSobelYKernel);
  for (std::size_t i = 0; i < gx.values.size(); ++i) {
    gx.values[i] = std::sqrt(gx.values[i] * gx.values[i] + gy.values[i] * gy.values[i]);
  }
  return gx;
}

double flat_patch_score(PlaneView patch) {
  return population_variance(sobel_magnitude(patch));
}

FlatResult flat_gate(const GrayImage& g, const FilterThresholds& t) {
  FlatResult r;
  const std::vector<PlaneView> patches = patch_grid(g, t.patch_size);
  r.patch_scores.reserve(patches.size());
  for (const PlaneView& p : patches) {
    const double s = flat_patch_score(p);
    r.patch_scores.push_back(s);
    if (s < t.flat_threshold) ++r.flat_count;
  }
  r.patch_count = static_cast<int>(patches.size());
  r.flat_ratio = static_cast<double>(r.flat_count) / r.patch_count;
  r.pass = !(r.flat_ratio > t.flat_ratio_limit);
  return r;
}

}  // namespace curate
