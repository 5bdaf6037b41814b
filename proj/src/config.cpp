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

#include "curate/config.hpp"

#include "curate/errors.hpp"
#include "curate/hash.hpp"

namespace curate {
namespace {

using nlohmann::json;

json paths_json(const std::vector<std::filesystem::path>& paths) {
  json arr = json::array();
  for (const auto& p : paths) {
    arr.push_back(std::filesystem::absolute(p).lexically_normal().generic_string());
  }
  return arr;
}

std::vector<std::filesystem::path> paths_from(const json& arr) {
  std::vector<std::filesystem::path> out;
  for (const json& p : arr) out.emplace_back(p.get<std::string>());
  return out;
}

}  // namespace

void PipelineConfig::validate() const {
  thresholds.validate();
  degradation.validate();
  if (!(iqa_fraction > 0.0 && iqa_fraction <= 1.0)) {
    throw ConfigError("iqa_fraction must lie in (0, 1]");
  }
  if (worker_count < 1) throw ConfigError("worker_count must be >= 1");
  if (scorer.kind == ScorerBackend::Kind::kExternalProcess && scorer.command.empty()) {
    throw ConfigError("external scorer needs a command");
  }
}

json PipelineConfig::canonical_json() const {
  const FilterThresholds& t = thresholds;
  return {
      {"input_roots", paths_json(input_roots)},
      {"bypass_roots", paths_json(bypass_roots)},
      {"thresholds",
       {{"blur_lo", t.blur_lo},
        {"blur_hi", t.blur_hi},
        {"patch_size", t.patch_size},
        {"flat_threshold", t.flat_threshold},
        {"flat_ratio_limit", t.flat_ratio_limit}}},
      {"scorer",
       {{"kind", scorer.kind == ScorerBackend::Kind::kBuiltinProxy ? "builtin-proxy"
                                                                   : "external-process"},
        {"command", scorer.command}}},
      {"degradation", degradation},
      {"iqa_fraction", iqa_fraction},
      {"gate_order", gate_order == GateOrder::kBlurFirst ? "blur-first" : "flat-first"},
  };
}

std::string PipelineConfig::config_hash() const {
  return hex64(fnv1a64(canonical_json().dump()));
}

PipelineConfig PipelineConfig::from_canonical_json(const json& j) {
  PipelineConfig cfg;
  cfg.input_roots = paths_from(j.at("input_roots"));
  cfg.bypass_roots = paths_from(j.value("bypass_roots", json::array()));
  const json& t = j.at("thresholds");
  cfg.thresholds.blur_lo = t.at("blur_lo").get<double>();
  cfg.thresholds.blur_hi = t.at("blur_hi").get<double>();
  cfg.thresholds.patch_size = t.at("patch_size").get<int>();
  cfg.thresholds.flat_threshold = t.at("flat_threshold").get<double>();
  cfg.thresholds.flat_ratio_limit = t.at("flat_ratio_limit").get<double>();
  const json& s = j.at("scorer");
  if (s.at("kind").get<std::string>() == "external-process") {
    cfg.scorer = ScorerBackend::external(s.at("command").get<std::string>());
  }
  cfg.degradation = j.at("degradation").get<DegradationConfig>();
  cfg.iqa_fraction = j.at("iqa_fraction").get<double>();
  cfg.gate_order =
      j.value("gate_order", "blur-first") == "flat-first" ? GateOrder::kFlatFirst : GateOrder::kBlurFirst;
  return cfg;
}

}  // namespace curate
