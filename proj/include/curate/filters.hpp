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

#include <vector>

#include "curate/image.hpp"

namespace curate {

// Gate thresholds. Defaults reproduce the reference curation funnel.
struct FilterThresholds {
  double blur_lo = 150.0;
  double blur_hi = 8000.0;
  int patch_size = 240;
  double flat_threshold = 800.0;
  double flat_ratio_limit = 0.5;

  // Throws ConfigError when an invariant is violated.
  void validate() const;
};

struct BlurResult {
  double score = 0.0;
  bool pass = false;
};

struct FlatResult {
  std::vector<double> patch_scores;
  int flat_count = 0;
  int patch_count = 0;
  double flat_ratio = 0.0;
  bool pass = false;
};

// Variance of the 3x3 Laplacian response over the whole image.
double blur_score(const GrayImage& g);

// Passes iff blur_lo <= score <= blur_hi.
BlurResult blur_gate(const GrayImage& g, const FilterThresholds& t);

// Non-overlapping tiles from the top-left, row-major. Partial tiles at the
// right and bottom are dropped; an image smaller than one tile in either
// dimension yields a single whole-image patch.
std::vector<PlaneView> patch_grid(const GrayImage& g, int patch_size);

// Sobel gradient magnitude with replicate borders at the view's edges.
ScalarField sobel_magnitude(PlaneView g);

// Edge-richness of one patch: variance of its Sobel magnitude.
double flat_patch_score(PlaneView patch);

// A patch is flat iff its score < flat_threshold; the image fails iff the
// flat fraction exceeds flat_ratio_limit.
FlatResult flat_gate(const GrayImage& g, const FilterThresholds& t);

}  // namespace curate
