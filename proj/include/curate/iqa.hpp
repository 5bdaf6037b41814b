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

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "curate/image.hpp"

namespace curate {

struct ScoreRecord {
  std::string image_id;
  double score = 0.0;  // higher is better
  bool retained = false;

  friend bool operator==(const ScoreRecord&, const ScoreRecord&) = default;
};

// Which perceptual scorer a run uses. Exactly one is active per run, and the
// identity string is stamped on every score so backends are never mixed.
struct ScorerBackend {
  enum class Kind { kBuiltinProxy, kExternalProcess };

  Kind kind = Kind::kBuiltinProxy;
  std::string command;  // shell command line, external only

  static ScorerBackend builtin() { return {}; }
  static ScorerBackend external(std::string cmd) {
    return {Kind::kExternalProcess, std::move(cmd)};
  }
  std::string identity() const;
};

struct ScoreItem {
  std::string image_id;
  std::filesystem::path path;
};

// Deterministic offline stand-in for a learned metric:
//   log(1 + blur_score) * mean Sobel magnitude / 255.
// Monotone in sharpness energy. It is not CLIP-IQA, and its values are not
// comparable with scores from any other backend.
double builtin_proxy_score(const GrayImage& g);

// Scores every item; output order follows input order. The builtin backend
// decodes each image (DecodeError propagates); the external backend speaks
// the line protocol described in external_scorer.hpp.
std::vector<ScoreRecord> score_corpus(std::span<const ScoreItem> items,
                                      const ScorerBackend& backend);

// Marks the ceil(fraction * N) highest-scoring records as retained, ties
// broken by ascending image_id. The product fraction * N is snapped to an
// integer when it lies within 1e-9 of one, so 0.1 * 30 keeps 3, not 4.
// Returns the records in input order. Throws ConfigError unless
// 0 < fraction <= 1.
std::vector<ScoreRecord> retain_top_fraction(std::vector<ScoreRecord> records, double fraction);

// Number of records retain_top_fraction keeps out of n.
std::size_t retained_count(std::size_t n, double fraction);

}  // namespace curate
