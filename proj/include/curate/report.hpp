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
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace curate {

// Per-image attributes, read back from manifest payloads (never recomputed).
struct AttributeSample {
  std::string image_id;
  double iqa_score = 0.0;
  double blur_score = 0.0;
  double flat_ratio = 0.0;
  int width = 0;
  int height = 0;

  double megapixels() const { return static_cast<double>(width) * height / 1e6; }
};

enum class Population {
  kScored,    // every image with an IQA score
  kRetained,  // only images kept by selection
};

// Draws up to sample_size images uniformly without replacement using `seed`
// (all of them when sample_size is empty or exceeds the population). The
// manifest is only read. Throws ManifestError naming the line when a needed
// payload field is missing.
std::vector<AttributeSample> collect(const std::filesystem::path& manifest,
                                     std::optional<std::size_t> sample_size, std::uint64_t seed,
                                     Population population = Population::kScored);

struct Histogram {
  std::vector<double> edges;  // bins + 1, strictly increasing
  std::vector<std::size_t> counts;
};

struct AttributeSummary {
  std::string attribute;
  Histogram histogram;
  double mean = 0.0;
  double median = 0.0;
  double std = 0.0;  // population
};

struct DistributionReport {
  std::string label;
  std::size_t sample_size = 0;
  std::vector<AttributeSummary> attributes;
};

struct LabeledSamples {
  std::string label;
  std::vector<AttributeSample> samples;
};

// Attribute names in report order.
const std::vector<std::string>& report_attributes();
double attribute_value(const AttributeSample& s, const std::string& attribute);

// Histograms share equal-width edges per attribute across all corpora,
// spanning the union's min and max. An attribute whose values are all equal
// gets one bin [v - 0.5, v + 0.5]. Throws Error on an empty corpus or bins < 1.
std::vector<DistributionReport> summarize(std::span<const LabeledSamples> corpora, int bins);

// Header: corpus,attribute,bin_lo,bin_hi,count
std::string report_csv(std::span<const DistributionReport> reports);
nlohmann::json report_json(std::span<const DistributionReport> reports);

// Writes attributes.csv and attributes.json into dir.
void write_report(const std::filesystem::path& dir, std::span<const DistributionReport> reports);

}  // namespace curate
