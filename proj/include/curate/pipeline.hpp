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

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "curate/config.hpp"
#include "curate/manifest.hpp"

namespace curate {

struct ScanEntry {
  std::string image_id;
  std::filesystem::path path;  // absolute
  std::string relative;        // generic form, relative to its root
  bool bypass = false;
  bool duplicate = false;  // id already produced by an earlier entry
};

// Stable id of an image: FNV-1a 64 of its root-relative generic path.
std::string image_id_for(std::string_view relative_path);

// Lists image files (png, jpg, jpeg, bmp, tif, tiff, webp; any case) under
// each root, sorted by relative path within a root, roots in the given order,
// then bypass roots. A repeated id is kept in the list with duplicate=true.
// Throws Error if a root is missing or unreadable.
std::vector<ScanEntry> scan(std::span<const std::filesystem::path> roots,
                            std::span<const std::filesystem::path> bypass_roots = {});

struct StageCounts {
  Stage stage = Stage::kScan;
  std::size_t input = 0;
  std::size_t pass = 0;
  std::size_t reject = 0;
  std::size_t error = 0;
  double wall_seconds = 0.0;

  friend bool operator==(const StageCounts&, const StageCounts&) = default;
};

struct StageStats {
  std::vector<StageCounts> stages;  // execution order
  std::size_t bypassed = 0;
  std::size_t pairs = 0;

  const StageCounts& at(Stage stage) const;
  // input == pass + reject + error per stage, and each stage's input equals
  // the previous stage's pass (bypassed images leave after scan and rejoin
  // at degrade).
  bool conserved() const;

  nlohmann::json to_json() const;
  static StageStats from_json(const nlohmann::json& j);
};

// Units of work addressable from the command line, in pipeline order.
// kFilter runs both gates in one pass over each image.
enum class Step { kScan, kFilter, kScore, kSelect, kDegrade };

std::string_view to_string(Step step);

inline constexpr std::string_view kManifestFile = "manifest.ndjson";
inline constexpr std::string_view kConfigFile = "config.json";

// Brings the manifest under cfg.output_root up to date through `last`,
// resuming whatever earlier invocations completed. Starting over an existing
// non-empty manifest requires cfg.resume. Every line's config_hash must
// match cfg (else ManifestError "config drift"). Per-image failures are
// recorded and never thrown; scorer, config and manifest errors are.
// The terminal summary line is appended when `last` is kDegrade and this
// invocation changed anything.
StageStats run_through(const PipelineConfig& cfg, Step last);

inline StageStats run(const PipelineConfig& cfg) { return run_through(cfg, Step::kDegrade); }

// Reads <output>/config.json written by the first invocation.
std::optional<PipelineConfig> load_saved_config(const std::filesystem::path& output_root);

}  // namespace curate
