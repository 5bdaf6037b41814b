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

#include "curate/iqa.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "curate/errors.hpp"
#include "curate/external_scorer.hpp"
#include "curate/filters.hpp"

namespace curate {

std::string ScorerBackend::identity() const {
  return kind == Kind::kBuiltinProxy ? std::string("builtin-proxy") : "external:" + command;
}

double builtin_proxy_score(const GrayImage& g) {
  const ScalarField mag = sobel_magnitude(g.view());
  const double mean_mag =
      std::accumulate(mag.values.begin(), mag.values.end(), 0.0) / mag.values.size();
  return std::log1p(blur_score(g)) * mean_mag / 255.0;
}

std::vector<ScoreRecord> score_corpus(std::span<const ScoreItem> items,
                                      const ScorerBackend& backend) {
  if (items.empty()) return {};
  if (backend.kind == ScorerBackend::Kind::kExternalProcess) {
    return score_external(items, backend.command);
  }
  std::vector<ScoreRecord> out;
  out.reserve(items.size());
  for (const ScoreItem& item : items) {
    out.push_back({item.image_id, builtin_proxy_score(to_grayscale(read_image(item.path))), false});
  }
  return out;
}

std::size_t retained_count(std::size_t n, double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw ConfigError("retention fraction must lie in (0, 1]");
  }
  if (n == 0) return 0;
  const double exact = fraction * static_cast<double>(n);
  double k = std::ceil(exact);
  if (k - exact > 1.0 - 1e-9) k -= 1.0;
  return std::clamp<std::size_t>(static_cast<std::size_t>(k), 1, n);
}

std::vector<ScoreRecord> retain_top_fraction(std::vector<ScoreRecord> records, double fraction) {
  const std::size_t keep = retained_count(records.size(), fraction);
  std::vector<std::size_t> order(records.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (records[a].score != records[b].score) return records[a].score > records[b].score;
    return records[a].image_id < records[b].image_id;
  });
  for (ScoreRecord& r : records) r.retained = false;
  for (std::size_t i = 0; i < keep; ++i) records[order[i]].retained = true;
  return records;
}

}  // namespace curate
