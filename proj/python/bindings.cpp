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

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <cstring>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "curate/degrade.hpp"
#include "curate/errors.hpp"
#include "curate/filters.hpp"
#include "curate/image.hpp"
#include "curate/iqa.hpp"
#include "curate/pipeline.hpp"

namespace py = pybind11;

namespace {

using U8Array = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;

curate::ImageBuffer to_buffer(const U8Array& a) {
  if (a.ndim() != 2 && a.ndim() != 3) throw py::value_error("expected an HxW or HxWxC uint8 array");
  curate::ImageBuffer img;
  img.height = static_cast<int>(a.shape(0));
  img.width = static_cast<int>(a.shape(1));
  img.channels = a.ndim() == 3 ? static_cast<int>(a.shape(2)) : 1;
  if (img.channels != 1 && img.channels != 3) throw py::value_error("expected 1 or 3 channels");
  img.samples.assign(a.data(), a.data() + a.size());
  return img;
}

U8Array to_array(const curate::ImageBuffer& img) {
  std::vector<py::ssize_t> shape{img.height, img.width};
  if (img.channels > 1) shape.push_back(img.channels);
  U8Array out(shape);
  std::memcpy(out.mutable_data(), img.samples.data(), img.samples.size());
  return out;
}

curate::GrayImage gray(const U8Array& a) { return curate::to_grayscale(to_buffer(a)); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Native core of the curate pipeline";

  py::register_exception<curate::Error>(m, "Error", PyExc_RuntimeError);

  m.def("to_grayscale", [](const U8Array& a) {
    const curate::GrayImage g = gray(a);
    py::array_t<double> out({g.height, g.width});
    std::memcpy(out.mutable_data(), g.values.data(), g.values.size() * sizeof(double));
    return out;
  });

  m.def("blur_score", [](const U8Array& a) { return curate::blur_score(gray(a)); });

  m.def(
      "flat_gate",
      [](const U8Array& a, int patch_size, double flat_threshold, double ratio_limit) {
        curate::FilterThresholds t;
        t.patch_size = patch_size;
        t.flat_threshold = flat_threshold;
        t.flat_ratio_limit = ratio_limit;
        t.validate();
        const curate::FlatResult r = curate::flat_gate(gray(a), t);
        py::dict d;
        d["patch_scores"] = r.patch_scores;
        d["flat_count"] = r.flat_count;
        d["patch_count"] = r.patch_count;
        d["flat_ratio"] = r.flat_ratio;
        d["passed"] = r.pass;
        return d;
      },
      py::arg("image"), py::arg("patch_size") = 240, py::arg("flat_threshold") = 800.0,
      py::arg("ratio_limit") = 0.5);

  m.def(
      "retain_top_fraction",
      [](const std::vector<std::pair<std::string, double>>& scores, double fraction) {
        std::vector<curate::ScoreRecord> records;
        for (const auto& [id, s] : scores) records.push_back({id, s, false});
        std::vector<std::string> kept;
        for (const auto& r : curate::retain_top_fraction(std::move(records), fraction)) {
          if (r.retained) kept.push_back(r.image_id);
        }
        return kept;
      },
      py::arg("scores"), py::arg("fraction"));

  m.def("derive_seed", &curate::derive_seed, py::arg("global_seed"), py::arg("image_id"),
        py::arg("epoch"));

  m.def(
      "degrade_once",
      [](const U8Array& a, std::uint64_t seed, const std::string& config_json) {
        curate::DegradationConfig cfg;
        if (!config_json.empty()) cfg = nlohmann::json::parse(config_json).get<curate::DegradationConfig>();
        cfg.validate();
        const curate::DegradeResult r = curate::degrade_once(to_buffer(a), cfg, seed);
        return py::make_tuple(to_array(r.lq), curate::ops_to_json(r.ops).dump());
      },
      py::arg("image"), py::arg("seed"), py::arg("config_json") = "");

  m.def(
      "run",
      [](const std::vector<std::filesystem::path>& inputs, const std::filesystem::path& output,
         const std::vector<std::filesystem::path>& bypass, double iqa_fraction, int epochs,
         std::uint64_t seed, int workers, bool resume, const std::optional<std::string>& scorer_cmd,
         const std::string& through) {
        curate::PipelineConfig cfg;
        cfg.input_roots = inputs;
        cfg.bypass_roots = bypass;
        cfg.output_root = output;
        cfg.iqa_fraction = iqa_fraction;
        cfg.degradation.epochs = epochs;
        cfg.degradation.global_seed = seed;
        cfg.worker_count = workers;
        cfg.resume = resume;
        if (scorer_cmd) cfg.scorer = curate::ScorerBackend::external(*scorer_cmd);
        std::optional<curate::Step> last;
        for (curate::Step s : {curate::Step::kScan, curate::Step::kFilter, curate::Step::kScore,
                               curate::Step::kSelect, curate::Step::kDegrade}) {
          if (curate::to_string(s) == through) last = s;
        }
        if (!last) throw py::value_error("unknown step '" + through + "'");
        py::gil_scoped_release release;
        return curate::run_through(cfg, *last).to_json().dump();
      },
      py::arg("inputs"), py::arg("output"), py::arg("bypass") = std::vector<std::filesystem::path>{},
      py::arg("iqa_fraction") = 0.2, py::arg("epochs") = 4, py::arg("seed") = 0,
      py::arg("workers") = 1, py::arg("resume") = false, py::arg("scorer_cmd") = std::nullopt,
      py::arg("through") = "degrade");
}
