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

// curate: command-line front end for the curation pipeline.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "curate/errors.hpp"
#include "curate/log.hpp"
#include "curate/pipeline.hpp"
#include "curate/report.hpp"

namespace {

using curate::PipelineConfig;
using curate::Step;

struct PipelineFlags {
  std::vector<std::string> inputs;
  std::vector<std::string> bypass;
  std::string output;
  double blur_lo = 0;
  double blur_hi = 0;
  int patch_size = 0;
  double flat_threshold = 0;
  double flat_ratio_limit = 0;
  double iqa_fraction = 0;
  std::string scorer_cmd;
  int epochs = 0;
  std::uint64_t seed = 0;
  int workers = 1;
  bool resume = false;
  std::string lq_format;
  std::string degradation_file;
  std::string gate_order;

  std::vector<CLI::Option*> opts;
  CLI::Option* find(const std::string& name) const {
    for (CLI::Option* o : opts) {
      if (o->check_lname(name.substr(2))) return o;
    }
    return nullptr;
  }
  bool given(const std::string& name) const {
    const CLI::Option* o = find(name);
    return o != nullptr && o->count() > 0;
  }
};

void add_pipeline_flags(CLI::App* app, PipelineFlags& f, bool is_run) {
  f.opts.push_back(app->add_option("--input", f.inputs, "Input root directory (repeatable)"));
  f.opts.push_back(app->add_option("--bypass", f.bypass,
                                   "Pre-approved root: skips gates and selection (repeatable)"));
  f.opts.push_back(app->add_option("--output", f.output, "Output root")->required());
  f.opts.push_back(app->add_option("--blur-lo", f.blur_lo, "Lower blur band bound [150]"));
  f.opts.push_back(app->add_option("--blur-hi", f.blur_hi, "Upper blur band bound [8000]"));
  f.opts.push_back(app->add_option("--patch-size", f.patch_size, "Flat-gate patch size [240]"));
  f.opts.push_back(
      app->add_option("--flat-threshold", f.flat_threshold, "Flat patch threshold [800]"));
  f.opts.push_back(
      app->add_option("--flat-ratio-limit", f.flat_ratio_limit, "Max flat patch ratio [0.5]"));
  f.opts.push_back(app->add_option("--iqa-fraction", f.iqa_fraction, "Top fraction kept [0.2]"));
  f.opts.push_back(app->add_option("--scorer-cmd", f.scorer_cmd,
                                   "External scorer command; builtin proxy when absent"));
  f.opts.push_back(app->add_option("--epochs", f.epochs, "Degradation epochs [4]"));
  f.opts.push_back(app->add_option("--seed", f.seed, "Global degradation seed [0]"));
  f.opts.push_back(app->add_option("--workers", f.workers, "Worker threads [1]"));
  f.opts.push_back(app->add_option("--lq-format", f.lq_format, "LQ file format: png or jpg")
                       ->check(CLI::IsMember({"png", "jpg"})));
  f.opts.push_back(app->add_option("--degradation-config", f.degradation_file,
                                   "JSON file overriding degradation ranges"));
  f.opts.push_back(app->add_option("--gate-order", f.gate_order)
                       ->check(CLI::IsMember({"blur-first", "flat-first"}))
                       ->group(""));
  if (is_run) f.opts.push_back(app->add_flag("--resume", f.resume, "Continue an existing run"));
}

PipelineConfig compose_config(const PipelineFlags& f, bool stage_command) {
  PipelineConfig cfg = curate::load_saved_config(f.output).value_or(PipelineConfig{});
  cfg.output_root = f.output;
  if (f.given("--input")) cfg.input_roots.assign(f.inputs.begin(), f.inputs.end());
  if (f.given("--bypass")) cfg.bypass_roots.assign(f.bypass.begin(), f.bypass.end());
  if (cfg.input_roots.empty() && cfg.bypass_roots.empty()) {
    throw curate::ConfigError("--input is required for a new output directory");
  }
  if (f.given("--blur-lo")) cfg.thresholds.blur_lo = f.blur_lo;
  if (f.given("--blur-hi")) cfg.thresholds.blur_hi = f.blur_hi;
  if (f.given("--patch-size")) cfg.thresholds.patch_size = f.patch_size;
  if (f.given("--flat-threshold")) cfg.thresholds.flat_threshold = f.flat_threshold;
  if (f.given("--flat-ratio-limit")) cfg.thresholds.flat_ratio_limit = f.flat_ratio_limit;
  if (f.given("--iqa-fraction")) cfg.iqa_fraction = f.iqa_fraction;
  if (f.given("--scorer-cmd")) cfg.scorer = curate::ScorerBackend::external(f.scorer_cmd);
  if (f.given("--degradation-config")) {
    std::ifstream in(f.degradation_file);
    if (!in) throw curate::ConfigError("cannot read " + f.degradation_file);
    cfg.degradation = nlohmann::json::parse(in).get<curate::DegradationConfig>();
  }
  if (f.given("--epochs")) cfg.degradation.epochs = f.epochs;
  if (f.given("--seed")) cfg.degradation.global_seed = f.seed;
  if (f.given("--lq-format")) cfg.degradation.lq_format = f.lq_format;
  if (f.given("--gate-order")) {
    cfg.gate_order =
        f.gate_order == "flat-first" ? curate::GateOrder::kFlatFirst : curate::GateOrder::kBlurFirst;
  }
  cfg.worker_count = f.workers;
  cfg.resume = stage_command || f.resume;
  return cfg;
}

struct ReportFlags {
  std::vector<std::string> manifests;
  std::vector<std::string> labels;
  std::size_t sample = 10000;
  int bins = 50;
  std::string out;
  std::uint64_t seed = 0;
  std::string population = "scored";
};

int run_report(const ReportFlags& f) {
  if (!f.labels.empty() && f.labels.size() != f.manifests.size()) {
    throw curate::ConfigError("--label must be given once per --manifest");
  }
  std::vector<curate::LabeledSamples> corpora;
  for (std::size_t i = 0; i < f.manifests.size(); ++i) {
    const std::string label = f.labels.empty() ? "corpus" + std::to_string(i) : f.labels[i];
    const auto pop = f.population == "retained" ? curate::Population::kRetained
                                                : curate::Population::kScored;
    corpora.push_back({label, curate::collect(f.manifests[i],
                                              f.sample == 0 ? std::nullopt
                                                            : std::optional<std::size_t>(f.sample),
                                              f.seed, pop)});
  }
  const auto reports = curate::summarize(corpora, f.bins);
  curate::write_report(f.out, reports);
  std::cout << curate::report_json(reports).dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Curate image corpora for restoration training and synthesize LQ/HQ pairs"};
  app.require_subcommand(1);

  struct StageCommand {
    const char* name;
    const char* help;
    Step last;
    PipelineFlags flags;
    CLI::App* app = nullptr;
  };
  std::vector<StageCommand> commands;
  commands.reserve(6);
  commands.push_back({"run", "Run every stage end to end", Step::kDegrade, {}});
  commands.push_back({"scan", "Enumerate input images into the manifest", Step::kScan, {}});
  commands.push_back({"filter", "Apply the blur and flat-region gates", Step::kFilter, {}});
  commands.push_back({"score", "Score gate survivors with the perceptual scorer", Step::kScore, {}});
  commands.push_back({"select", "Retain the top-scoring fraction", Step::kSelect, {}});
  commands.push_back({"degrade", "Synthesize LQ/HQ pairs for retained images", Step::kDegrade, {}});
  for (StageCommand& c : commands) {
    c.app = app.add_subcommand(c.name, c.help);
    add_pipeline_flags(c.app, c.flags, std::string(c.name) == "run");
  }

  ReportFlags rf;
  CLI::App* report = app.add_subcommand("report", "Emit attribute distributions for corpora");
  report->add_option("--manifest", rf.manifests, "Manifest file (repeatable)")->required();
  report->add_option("--label", rf.labels, "Corpus label, one per manifest");
  report->add_option("--sample", rf.sample, "Images sampled per corpus, 0 for all [10000]");
  report->add_option("--bins", rf.bins, "Histogram bins [50]")->check(CLI::PositiveNumber);
  report->add_option("--out", rf.out, "Output directory")->required();
  report->add_option("--seed", rf.seed, "Sampling seed [0]");
  report->add_option("--population", rf.population, "scored or retained [scored]")
      ->check(CLI::IsMember({"scored", "retained"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (report->parsed()) return run_report(rf);
    for (StageCommand& c : commands) {
      if (!c.app->parsed()) continue;
      const PipelineConfig cfg = compose_config(c.flags, std::string(c.name) != "run");
      const curate::StageStats stats = curate::run_through(cfg, c.last);
      std::cout << stats.to_json().dump(2) << "\n";
      return 0;
    }
  } catch (const curate::Error& e) {
    curate::log().error("{}", e.what());
    return 1;
  } catch (const std::exception& e) {
    curate::log().error("unexpected failure: {}", e.what());
    return 1;
  }
  return 0;
}
