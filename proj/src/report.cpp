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

#include "curate/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <unordered_map>

#include <fmt/format.h>

#include "curate/errors.hpp"
#include "curate/manifest.hpp"
#include "curate/rng.hpp"

namespace curate {
namespace {

using nlohmann::json;

struct Gathered {
  std::optional<double> blur_score;
  std::optional<double> flat_ratio;
  std::optional<int> width;
  std::optional<int> height;
  std::optional<double> iqa_score;
  std::size_t iqa_line = 0;
  bool retained = false;
};

template <class T>
T field(const ManifestLine& line, const char* key) {
  const json& p = line.event.payload;
  if (!p.contains(key)) {
    throw ManifestError(fmt::format("manifest line {}: {} event for {} lacks payload field '{}'",
                                    line.line_no, to_string(line.event.stage),
                                    line.event.image_id, key));
  }
  return p.at(key).get<T>();
}

AttributeSummary summarize_attribute(const std::string& name, const std::vector<double>& values,
                                     const std::vector<double>& edges) {
  AttributeSummary s;
  s.attribute = name;
  s.histogram.edges = edges;
  const std::size_t bins = edges.size() - 1;
  s.histogram.counts.assign(bins, 0);
  for (double v : values) {
    const double span = edges.back() - edges.front();
    auto idx = static_cast<std::ptrdiff_t>(std::floor((v - edges.front()) / span * bins));
    idx = std::clamp<std::ptrdiff_t>(idx, 0, static_cast<std::ptrdiff_t>(bins) - 1);
    while (idx > 0 && v < edges[idx]) --idx;
    while (idx + 1 < static_cast<std::ptrdiff_t>(bins) && v >= edges[idx + 1]) ++idx;
    ++s.histogram.counts[idx];
  }

  const double n = static_cast<double>(values.size());
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double sq = 0.0;
  for (double v : values) sq += (v - s.mean) * (v - s.mean);
  s.std = std::sqrt(sq / n);
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t mid = sorted.size() / 2;
  s.median = sorted.size() % 2 == 1 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
  return s;
}

}  // namespace

const std::vector<std::string>& report_attributes() {
  static const std::vector<std::string> kNames{"iqa_score", "blur_score", "flat_ratio",
                                               "megapixels"};
  return kNames;
}

double attribute_value(const AttributeSample& s, const std::string& attribute) {
  if (attribute == "iqa_score") return s.iqa_score;
  if (attribute == "blur_score") return s.blur_score;
  if (attribute == "flat_ratio") return s.flat_ratio;
  if (attribute == "megapixels") return s.megapixels();
  throw Error("unknown attribute " + attribute);
}

std::vector<AttributeSample> collect(const std::filesystem::path& manifest,
                                     std::optional<std::size_t> sample_size, std::uint64_t seed,
                                     Population population) {
  if (!std::filesystem::exists(manifest)) {
    throw ManifestError("manifest not found: " + manifest.string());
  }
  const ManifestContents contents = read_manifest(manifest);
  std::unordered_map<std::string, Gathered> by_id;
  std::vector<std::string> order;
  for (const ManifestLine& line : contents.lines) {
    const ManifestEvent& e = line.event;
    if (e.outcome == Outcome::kError) continue;
    switch (e.stage) {
      case Stage::kBlur: {
        Gathered& g = by_id[e.image_id];
        g.blur_score = field<double>(line, "blur_score");
        g.width = field<int>(line, "width");
        g.height = field<int>(line, "height");
        break;
      }
      case Stage::kFlat: {
        Gathered& g = by_id[e.image_id];
        g.flat_ratio = field<double>(line, "flat_ratio");
        g.width = field<int>(line, "width");
        g.height = field<int>(line, "height");
        break;
      }
      case Stage::kIqa: {
        Gathered& g = by_id[e.image_id];
        g.iqa_score = field<double>(line, "score");
        g.iqa_line = line.line_no;
        order.push_back(e.image_id);
        break;
      }
      case Stage::kSelect:
        by_id[e.image_id].retained = e.outcome == Outcome::kPass;
        break;
      default:
        break;
    }
  }

  std::vector<AttributeSample> pool;
  for (const std::string& id : order) {
    const Gathered& g = by_id.at(id);
    if (population == Population::kRetained && !g.retained) continue;
    if (!g.blur_score || !g.flat_ratio || !g.width || !g.height) {
      throw ManifestError(fmt::format(
          "manifest line {}: image {} has a score but no complete blur/flat payloads", g.iqa_line,
          id));
    }
    pool.push_back({id, *g.iqa_score, *g.blur_score, *g.flat_ratio, *g.width, *g.height});
  }

  const std::size_t k = std::min(pool.size(), sample_size.value_or(pool.size()));
  std::vector<std::size_t> idx(pool.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  Rng rng(seed);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + rng.index(pool.size() - i);
    std::swap(idx[i], idx[j]);
  }
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  std::vector<AttributeSample> out;
  out.reserve(k);
  for (std::size_t i : idx) out.push_back(pool[i]);
  return out;
}

std::vector<DistributionReport> summarize(std::span<const LabeledSamples> corpora, int bins) {
  if (bins < 1) throw Error("bins must be >= 1");
  if (corpora.empty()) throw Error("no corpora to summarize");
  for (const LabeledSamples& c : corpora) {
    if (c.samples.empty()) throw Error("corpus '" + c.label + "' has no samples");
  }

  std::vector<DistributionReport> reports(corpora.size());
  for (std::size_t c = 0; c < corpora.size(); ++c) {
    reports[c].label = corpora[c].label;
    reports[c].sample_size = corpora[c].samples.size();
  }

  for (const std::string& attr : report_attributes()) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const LabeledSamples& c : corpora) {
      for (const AttributeSample& s : c.samples) {
        lo = std::min(lo, attribute_value(s, attr));
        hi = std::max(hi, attribute_value(s, attr));
      }
    }
    std::vector<double> edges;
    if (lo == hi) {
      edges = {lo - 0.5, hi + 0.5};
    } else {
      edges.resize(static_cast<std::size_t>(bins) + 1);
      const double width = (hi - lo) / bins;
      for (int i = 0; i < bins; ++i) edges[i] = lo + width * i;
      edges[bins] = hi;
    }
    for (std::size_t c = 0; c < corpora.size(); ++c) {
      std::vector<double> values;
      values.reserve(corpora[c].samples.size());
      for (const AttributeSample& s : corpora[c].samples) values.push_back(attribute_value(s, attr));
      reports[c].attributes.push_back(summarize_attribute(attr, values, edges));
    }
  }
  return reports;
}

std::string report_csv(std::span<const DistributionReport> reports) {
  std::string out = "corpus,attribute,bin_lo,bin_hi,count\n";
  for (const DistributionReport& r : reports) {
    for (const AttributeSummary& a : r.attributes) {
      for (std::size_t b = 0; b < a.histogram.counts.size(); ++b) {
        out += fmt::format("{},{},{},{},{}\n", r.label, a.attribute, a.histogram.edges[b],
                           a.histogram.edges[b + 1], a.histogram.counts[b]);
      }
    }
  }
  return out;
}

json report_json(std::span<const DistributionReport> reports) {
  json corpora = json::array();
  for (const DistributionReport& r : reports) {
    json attrs = json::object();
    for (const AttributeSummary& a : r.attributes) {
      attrs[a.attribute] = {{"bin_edges", a.histogram.edges},
                            {"counts", a.histogram.counts},
                            {"mean", a.mean},
                            {"median", a.median},
                            {"std", a.std}};
    }
    corpora.push_back({{"label", r.label}, {"sample_size", r.sample_size}, {"attributes", attrs}});
  }
  return {{"corpora", corpora}};
}

void write_report(const std::filesystem::path& dir, std::span<const DistributionReport> reports) {
  std::filesystem::create_directories(dir);
  std::ofstream csv(dir / "attributes.csv", std::ios::trunc);
  csv << report_csv(reports);
  std::ofstream js(dir / "attributes.json", std::ios::trunc);
  js << report_json(reports).dump(2) << "\n";
  if (!csv || !js) throw Error("cannot write report to " + dir.string());
}

}  // namespace curate
