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
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "curate/degrade.hpp"
#include "curate/filters.hpp"
#include "curate/iqa.hpp"

namespace curate {

// Which gate runs first. Blur-first is cheaper; the order never changes the
// surviving set.
enum class GateOrder { kBlurFirst, kFlatFirst };

struct PipelineConfig {
  std::vector<std::filesystem::path> input_roots;
  // Pre-approved images: they skip both gates, scoring and selection and go
  // straight to pair synthesis.
  std::vector<std::filesystem::path> bypass_roots;
  std::filesystem::path output_root;
  FilterThresholds thresholds;
  ScorerBackend scorer;
  DegradationConfig degradation;
  double iqa_fraction = 0.2;
  int worker_count = 1;
  bool resume = false;
  GateOrder gate_order = GateOrder::kBlurFirst;

  // Throws ConfigError.
  void validate() const;

  // Everything that changes what the pipeline decides, with sorted keys.
  // Output location, worker count and the resume flag are excluded.
  nlohmann::json canonical_json() const;

  // FNV-1a 64 of canonical_json().dump(), as 16 hex digits.
  std::string config_hash() const;

  // Rebuilds the decision-relevant part from canonical_json().
  static PipelineConfig from_canonical_json(const nlohmann::json& j);
};

}  // namespace curate
