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

#include "curate/pipeline.hpp"

#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <chrono>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include <fmt/format.h>
#include <opencv2/core.hpp>

#include "curate/errors.hpp"
#include "curate/external_scorer.hpp"
#include "curate/hash.hpp"
#include "curate/log.hpp"
#include "curate/worker_pool.hpp"

namespace curate {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

struct StageRecord {
  Outcome outcome = Outcome::kPass;
  std::string reason;
  json payload;
};

struct ImageState {
  std::string path;
  bool bypass = false;
  std::optional<StageRecord> blur;
  std::optional<StageRecord> flat;
  std::optional<StageRecord> iqa;
  std::optional<StageRecord> select;
  std::map<int, StageRecord> degrade;  // by epoch

  const std::optional<StageRecord>& gate(Stage s) const { return s == Stage::kBlur ? blur : flat; }
  bool passed(const std::optional<StageRecord>& r) const {
    return r && r->outcome == Outcome::kPass;
  }
};

bool is_image_file(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  static const std::unordered_set<std::string> kExts{".png", ".jpg",  ".jpeg", ".bmp",
                                                     ".tif", ".tiff", ".webp"};
  return kExts.contains(ext);
}

void write_file_atomic(const fs::path& path, const std::vector<std::uint8_t>& bytes) {
  const fs::path tmp =
      path.string() + fmt::format(".tmp-{}-{}", ::getpid(),
                                  std::hash<std::thread::id>{}(std::this_thread::get_id()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error("cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

class Run {
 public:
  explicit Run(const PipelineConfig& cfg)
      : cfg_(cfg),
        hash_(cfg.config_hash()),
        manifest_path_(cfg.output_root / kManifestFile),
        first_gate_(cfg.gate_order == GateOrder::kBlurFirst ? Stage::kBlur : Stage::kFlat),
        second_gate_(cfg.gate_order == GateOrder::kBlurFirst ? Stage::kFlat : Stage::kBlur) {}

  StageStats execute(Step last) {
    cfg_.validate();
    fs::create_directories(cfg_.output_root);
    cv::setNumThreads(1);
    load();

    timed(Stage::kScan, [&] { step_scan(); });
    if (last >= Step::kFilter) {
      const auto t0 = Clock::now();
      step_filter();
      wall_[Stage::kBlur] = wall_[Stage::kFlat] = seconds_since(t0);
    }
    if (last >= Step::kScore) timed(Stage::kIqa, [&] { step_score(); });
    if (last >= Step::kSelect) timed(Stage::kSelect, [&] { step_select(); });
    if (last >= Step::kDegrade) timed(Stage::kDegrade, [&] { step_degrade(); });

    if (last == Step::kDegrade && written_ == 0 && last_summary_) {
      log().info("manifest already complete; nothing to do");
      return StageStats::from_json(*last_summary_);
    }
    StageStats stats = compute_stats(last);
    if (last == Step::kDegrade) {
      ManifestEvent summary;
      summary.stage = Stage::kSummary;
      summary.payload = stats.to_json();
      writer_->append(summary);
    }
    writer_->sync();
    return stats;
  }

 private:
  template <class Fn>
  void timed(Stage s, Fn&& fn) {
    const auto t0 = Clock::now();
    fn();
    wall_[s] = seconds_since(t0);
  }

  void load() {
    const ManifestContents contents = read_manifest(manifest_path_);
    if (!contents.lines.empty() && !cfg_.resume) {
      throw ConfigError(fmt::format("{} already holds a manifest; pass --resume to continue it",
                                    cfg_.output_root.string()));
    }
    for (const ManifestLine& line : contents.lines) {
      if (line.config_hash != hash_) {
        throw ManifestError(fmt::format(
            "config drift: manifest line {} was written under config {}, current config is {}",
            line.line_no, line.config_hash, hash_));
      }
      if (line.event.stage == Stage::kSummary) {
        last_summary_ = line.event.payload;
        continue;
      }
      last_summary_.reset();
      apply(line.event, line.line_no);
    }
    if (contents.lines.empty()) {
      std::ofstream(cfg_.output_root / kConfigFile) << cfg_.canonical_json().dump(2) << "\n";
    }
    writer_ = std::make_unique<ManifestWriter>(
        manifest_path_, hash_,
        contents.dropped_torn_line ? std::optional(contents.valid_bytes) : std::nullopt);
  }

  void apply(const ManifestEvent& e, std::size_t line_no) {
    if (e.stage == Stage::kScan) {
      scan_ids_.push_back(e.image_id);
      if (e.outcome == Outcome::kPass) {
        ImageState s;
        s.path = e.path;
        s.bypass = e.payload.value("bypass", false);
        images_.emplace(e.image_id, std::move(s));
        order_.push_back(e.image_id);
      }
      return;
    }
    const auto it = images_.find(e.image_id);
    if (it == images_.end()) {
      throw ManifestError(fmt::format("manifest line {}: {} event for unscanned image {}", line_no,
                                      to_string(e.stage), e.image_id));
    }
    StageRecord rec{e.outcome, e.reason, e.payload};
    ImageState& s = it->second;
    switch (e.stage) {
      case Stage::kBlur:
        s.blur = std::move(rec);
        break;
      case Stage::kFlat:
        s.flat = std::move(rec);
        break;
      case Stage::kIqa:
        s.iqa = std::move(rec);
        break;
      case Stage::kSelect:
        s.select = std::move(rec);
        break;
      case Stage::kDegrade:
        s.degrade[e.payload.at("epoch").get<int>()] = std::move(rec);
        break;
      default:
        break;
    }
  }

  void commit(const ManifestEvent& e) {
    writer_->append(e);
    apply(e, 0);
    ++written_;
  }

  ManifestEvent event_for(const std::string& id, Stage stage, Outcome outcome,
                          std::string reason = {}, json payload = json::object()) const {
    return ManifestEvent{id, images_.at(id).path, stage, outcome, std::move(reason),
                         std::move(payload)};
  }

  // scan ------------------------------------------------------------------

  void step_scan() {
    const std::vector<ScanEntry> entries = scan(cfg_.input_roots, cfg_.bypass_roots);
    for (std::size_t i = 0; i < scan_ids_.size(); ++i) {
      if (i >= entries.size() || entries[i].image_id != scan_ids_[i]) {
        throw ManifestError("input corpus changed since the manifest was written (scan entry " +
                            std::to_string(i + 1) + " differs)");
      }
    }
    for (std::size_t i = scan_ids_.size(); i < entries.size(); ++i) {
      const ScanEntry& en = entries[i];
      ManifestEvent e{en.image_id,
                      en.path.string(),
                      Stage::kScan,
                      en.duplicate ? Outcome::kReject : Outcome::kPass,
                      en.duplicate ? "duplicate_id" : "",
                      {{"relative", en.relative}, {"bypass", en.bypass}}};
      commit(e);
    }
    log().info("scan: {} files, {} accepted", entries.size(), order_.size());
  }

  // filter ----------------------------------------------------------------

  struct GateTask {
    std::string id;
    std::string path;
    bool need_first;
  };

  json gate_payload(Stage stage, const GrayImage& g, int channels) const {
    json p = {{"width", g.width}, {"height", g.height}, {"channels", channels}};
    if (stage == Stage::kBlur) {
      const BlurResult r = blur_gate(g, cfg_.thresholds);
      p["blur_score"] = r.score;
      p["pass"] = r.pass;
    } else {
      const FlatResult r = flat_gate(g, cfg_.thresholds);
      p["flat_ratio"] = r.flat_ratio;
      p["flat_count"] = r.flat_count;
      p["patch_count"] = r.patch_count;
      p["patch_scores"] = r.patch_scores;
      p["whole_image_patch"] =
          g.width < cfg_.thresholds.patch_size || g.height < cfg_.thresholds.patch_size;
      p["pass"] = r.pass;
    }
    return p;
  }

  std::string reject_reason(Stage stage, const json& p) const {
    if (stage == Stage::kFlat) return "too_flat";
    return p.at("blur_score").get<double>() < cfg_.thresholds.blur_lo ? "blur_below_band"
                                                                       : "blur_above_band";
  }

  std::vector<ManifestEvent> run_gates(const GateTask& task) const {
    std::vector<ManifestEvent> out;
    auto make = [&](Stage stage, Outcome outcome, std::string reason, json payload) {
      out.push_back({task.id, task.path, stage, outcome, std::move(reason), std::move(payload)});
    };
    const Stage pending = task.need_first ? first_gate_ : second_gate_;
    GrayImage gray;
    int channels = 0;
    try {
      const ImageBuffer img = read_image(task.path);
      channels = img.channels;
      gray = to_grayscale(img);
    } catch (const std::exception& e) {
      make(pending, Outcome::kError, std::string("decode_error: ") + e.what(), json::object());
      return out;
    }
    for (Stage stage : {first_gate_, second_gate_}) {
      if (stage == first_gate_ && !task.need_first) continue;
      json p = gate_payload(stage, gray, channels);
      const bool pass = p.at("pass").get<bool>();
      p.erase("pass");
      const std::string reason = pass ? std::string() : reject_reason(stage, p);
      make(stage, pass ? Outcome::kPass : Outcome::kReject, reason, std::move(p));
      if (!pass) break;
    }
    return out;
  }

  void step_filter() {
    std::vector<GateTask> tasks;
    for (const std::string& id : order_) {
      const ImageState& s = images_.at(id);
      if (s.bypass) continue;
      const auto& first = s.gate(first_gate_);
      if (!first) {
        tasks.push_back({id, s.path, true});
      } else if (first->outcome == Outcome::kPass && !s.gate(second_gate_)) {
        tasks.push_back({id, s.path, false});
      }
    }
    ordered_parallel_for(
        tasks.size(), cfg_.worker_count, [&](std::size_t i) { return run_gates(tasks[i]); },
        [&](std::size_t, std::vector<ManifestEvent> events) {
          for (const ManifestEvent& e : events) commit(e);
        });
    log().info("filter: evaluated {} images", tasks.size());
  }

  // score -----------------------------------------------------------------

  void step_score() {
    const std::string backend = cfg_.scorer.identity();
    std::vector<ScoreItem> items;
    for (const std::string& id : order_) {
      const ImageState& s = images_.at(id);
      if (s.iqa) {
        if (s.iqa->outcome == Outcome::kPass &&
            s.iqa->payload.value("backend", std::string()) != backend) {
          throw ManifestError("image " + id + " was scored by another backend; scores from " +
                              "different backends cannot share a selection");
        }
        continue;
      }
      if (!s.bypass && s.passed(s.gate(second_gate_))) items.push_back({id, s.path});
    }
    if (cfg_.scorer.kind == ScorerBackend::Kind::kExternalProcess) {
      const std::vector<ScoreRecord> records = score_external(items, cfg_.scorer.command);
      for (const ScoreRecord& r : records) {
        commit(event_for(r.image_id, Stage::kIqa, Outcome::kPass, {},
                         {{"score", r.score}, {"backend", backend}}));
      }
    } else {
      ordered_parallel_for(
          items.size(), cfg_.worker_count,
          [&](std::size_t i) {
            const ScoreItem& item = items[i];
            ManifestEvent e{item.image_id, item.path.string(), Stage::kIqa, Outcome::kPass, {}, {}};
            try {
              e.payload = {{"score", builtin_proxy_score(to_grayscale(read_image(item.path)))},
                           {"backend", backend}};
            } catch (const std::exception& ex) {
              e.outcome = Outcome::kError;
              e.reason = std::string("decode_error: ") + ex.what();
              e.payload = json::object();
            }
            return e;
          },
          [&](std::size_t, ManifestEvent e) { commit(e); });
    }
    log().info("score: {} images scored with {}", items.size(), backend);
  }

  // select ----------------------------------------------------------------

  void step_select() {
    std::vector<ScoreRecord> records;
    for (const std::string& id : order_) {
      const ImageState& s = images_.at(id);
      if (s.passed(s.iqa)) records.push_back({id, s.iqa->payload.at("score").get<double>(), false});
    }
    records = retain_top_fraction(std::move(records), cfg_.iqa_fraction);

    std::vector<std::size_t> rank_order(records.size());
    std::iota(rank_order.begin(), rank_order.end(), std::size_t{0});
    std::sort(rank_order.begin(), rank_order.end(), [&](std::size_t a, std::size_t b) {
      if (records[a].score != records[b].score) return records[a].score > records[b].score;
      return records[a].image_id < records[b].image_id;
    });
    std::vector<std::size_t> rank(records.size());
    for (std::size_t r = 0; r < rank_order.size(); ++r) rank[rank_order[r]] = r + 1;

    for (std::size_t i = 0; i < records.size(); ++i) {
      const ScoreRecord& r = records[i];
      const Outcome outcome = r.retained ? Outcome::kPass : Outcome::kReject;
      const ImageState& s = images_.at(r.image_id);
      if (s.select) {
        if (s.select->outcome != outcome) {
          throw ManifestError("recorded selection for " + r.image_id +
                              " disagrees with the recomputed selection");
        }
        continue;
      }
      commit(event_for(r.image_id, Stage::kSelect, outcome,
                       r.retained ? std::string() : std::string("below_top_fraction"),
                       {{"score", r.score}, {"rank", rank[i]}}));
    }
    log().info("select: {} of {} retained", retained_count(records.size(), cfg_.iqa_fraction),
               records.size());
  }

  // degrade ---------------------------------------------------------------

  struct DegradeTask {
    std::string id;
    std::string path;
    std::vector<int> epochs;
  };

  std::vector<ManifestEvent> synthesize(const DegradeTask& task) const {
    const DegradationConfig& dc = cfg_.degradation;
    std::vector<ManifestEvent> out;
    auto error_all = [&](const std::string& reason) {
      for (int epoch : task.epochs) {
        out.push_back({task.id, task.path, Stage::kDegrade, Outcome::kError, reason,
                       {{"epoch", epoch},
                        {"derived_seed", derive_seed(dc.global_seed, task.id,
                                                     static_cast<std::uint64_t>(epoch))}}});
      }
    };

    ImageBuffer hq;
    const std::string hq_rel = "hq/" + task.id + ".png";
    try {
      hq = read_image(task.path);
      const fs::path hq_path = cfg_.output_root / hq_rel;
      if (!fs::exists(hq_path)) write_file_atomic(hq_path, encode_png(hq));
    } catch (const std::exception& e) {
      error_all(std::string("decode_error: ") + e.what());
      return out;
    }

    for (int epoch : task.epochs) {
      const std::uint64_t seed = derive_seed(dc.global_seed, task.id, static_cast<std::uint64_t>(epoch));
      json payload = {{"epoch", epoch}, {"derived_seed", seed}};
      try {
        const std::vector<AppliedOp> plan = sample_plan(hq.width, hq.height, dc, seed);
        std::vector<std::uint8_t> bytes;
        if (dc.lq_format == "jpg") {
          // Keep the final JPEG pass's own bitstream so the file decodes to
          // exactly the replayed LQ pixels.
          const std::span<const AppliedOp> head(plan.data(), plan.size() - 1);
          bytes = encode_jpeg(apply_ops(hq, head), std::get<JpegOp>(plan.back().step).quality);
        } else {
          bytes = encode_png(apply_ops(hq, plan));
        }
        const std::string lq_rel = fmt::format("lq/{}_e{}.{}", task.id, epoch, dc.lq_format);
        write_file_atomic(cfg_.output_root / lq_rel, bytes);
        payload["hq_path"] = hq_rel;
        payload["lq_path"] = lq_rel;
        payload["width"] = hq.width;
        payload["height"] = hq.height;
        payload["applied_ops"] = ops_to_json(plan);
        out.push_back({task.id, task.path, Stage::kDegrade, Outcome::kPass, {}, std::move(payload)});
      } catch (const std::exception& e) {
        out.push_back({task.id, task.path, Stage::kDegrade, Outcome::kError,
                       std::string("degrade_error: ") + e.what(), std::move(payload)});
      }
    }
    return out;
  }

  void step_degrade() {
    fs::create_directories(cfg_.output_root / "hq");
    fs::create_directories(cfg_.output_root / "lq");
    std::vector<DegradeTask> tasks;
    for (const std::string& id : order_) {
      const ImageState& s = images_.at(id);
      if (!(s.bypass || s.passed(s.select))) continue;
      DegradeTask t{id, s.path, {}};
      for (int e = 0; e < cfg_.degradation.epochs; ++e) {
        if (!s.degrade.contains(e)) t.epochs.push_back(e);
      }
      if (!t.epochs.empty()) tasks.push_back(std::move(t));
    }
    ordered_parallel_for(
        tasks.size(), cfg_.worker_count, [&](std::size_t i) { return synthesize(tasks[i]); },
        [&](std::size_t, std::vector<ManifestEvent> events) {
          for (const ManifestEvent& e : events) commit(e);
        });
    log().info("degrade: synthesized pairs for {} images", tasks.size());
  }

  // stats -----------------------------------------------------------------

  static void tally(StageCounts& c, const std::optional<StageRecord>& r) {
    if (!r) return;
    switch (r->outcome) {
      case Outcome::kPass:
        ++c.pass;
        break;
      case Outcome::kReject:
        ++c.reject;
        break;
      case Outcome::kError:
        ++c.error;
        break;
    }
  }

  double wall(Stage s) const {
    const auto it = wall_.find(s);
    return it == wall_.end() ? 0.0 : it->second;
  }

  StageStats compute_stats(Step last) const {
    StageStats st;
    StageCounts scan_c{Stage::kScan, scan_ids_.size(), order_.size(),
                       scan_ids_.size() - order_.size(), 0, wall(Stage::kScan)};
    st.stages.push_back(scan_c);
    for (const std::string& id : order_) st.bypassed += images_.at(id).bypass ? 1 : 0;
    if (last < Step::kFilter) return st;

    StageCounts g1{first_gate_, 0, 0, 0, 0, wall(first_gate_)};
    StageCounts g2{second_gate_, 0, 0, 0, 0, wall(second_gate_)};
    StageCounts iqa{Stage::kIqa, 0, 0, 0, 0, wall(Stage::kIqa)};
    StageCounts sel{Stage::kSelect, 0, 0, 0, 0, wall(Stage::kSelect)};
    StageCounts deg{Stage::kDegrade, 0, 0, 0, 0, wall(Stage::kDegrade)};
    for (const std::string& id : order_) {
      const ImageState& s = images_.at(id);
      if (s.bypass) {
        ++deg.input;
      } else {
        ++g1.input;
        tally(g1, s.gate(first_gate_));
        if (s.passed(s.gate(first_gate_))) {
          ++g2.input;
          tally(g2, s.gate(second_gate_));
        }
        if (s.passed(s.gate(second_gate_)) && s.passed(s.gate(first_gate_))) {
          ++iqa.input;
          tally(iqa, s.iqa);
        }
        if (s.passed(s.iqa)) {
          ++sel.input;
          tally(sel, s.select);
        }
        if (s.passed(s.select)) ++deg.input;
      }
      if (s.bypass || s.passed(s.select)) {
        bool any_error = false;
        int passed = 0;
        for (const auto& [epoch, rec] : s.degrade) {
          if (rec.outcome == Outcome::kPass) {
            ++passed;
          } else {
            any_error = true;
          }
        }
        st.pairs += static_cast<std::size_t>(passed);
        if (any_error) {
          ++deg.error;
        } else if (passed == cfg_.degradation.epochs) {
          ++deg.pass;
        }
      }
    }
    st.stages.push_back(g1);
    st.stages.push_back(g2);
    if (last >= Step::kScore) st.stages.push_back(iqa);
    if (last >= Step::kSelect) st.stages.push_back(sel);
    if (last >= Step::kDegrade) st.stages.push_back(deg);
    if (last < Step::kDegrade) st.pairs = 0;
    return st;
  }

  const PipelineConfig& cfg_;
  std::string hash_;
  fs::path manifest_path_;
  Stage first_gate_;
  Stage second_gate_;
  std::unique_ptr<ManifestWriter> writer_;
  std::vector<std::string> scan_ids_;
  std::unordered_map<std::string, ImageState> images_;
  std::vector<std::string> order_;
  std::optional<json> last_summary_;
  std::size_t written_ = 0;
  std::map<Stage, double> wall_;
};

}  // namespace

std::string image_id_for(std::string_view relative_path) {
  return hex64(fnv1a64(relative_path));
}

std::vector<ScanEntry> scan(std::span<const fs::path> roots, std::span<const fs::path> bypass_roots) {
  std::vector<ScanEntry> out;
  std::unordered_set<std::string> seen;
  auto scan_root = [&](const fs::path& root, bool bypass) {
    std::error_code ec;
    if (!fs::is_directory(root, ec)) {
      throw Error("input root is not a readable directory: " + root.string());
    }
    const fs::path base = fs::absolute(root).lexically_normal();
    std::vector<ScanEntry> found;
    try {
      for (auto it = fs::recursive_directory_iterator(base); it != fs::recursive_directory_iterator();
           ++it) {
        if (!it->is_regular_file() || !is_image_file(it->path())) continue;
        ScanEntry e;
        e.path = it->path();
        e.relative = it->path().lexically_relative(base).generic_string();
        e.image_id = image_id_for(e.relative);
        e.bypass = bypass;
        found.push_back(std::move(e));
      }
    } catch (const fs::filesystem_error& err) {
      throw Error(std::string("cannot scan ") + root.string() + ": " + err.what());
    }
    std::sort(found.begin(), found.end(),
              [](const ScanEntry& a, const ScanEntry& b) { return a.relative < b.relative; });
    for (ScanEntry& e : found) {
      e.duplicate = !seen.insert(e.image_id).second;
      out.push_back(std::move(e));
    }
  };
  for (const fs::path& r : roots) scan_root(r, false);
  for (const fs::path& r : bypass_roots) scan_root(r, true);
  return out;
}

std::string_view to_string(Step step) {
  switch (step) {
    case Step::kScan:
      return "scan";
    case Step::kFilter:
      return "filter";
    case Step::kScore:
      return "score";
    case Step::kSelect:
      return "select";
    case Step::kDegrade:
      return "degrade";
  }
  return "?";
}

const StageCounts& StageStats::at(Stage stage) const {
  for (const StageCounts& c : stages) {
    if (c.stage == stage) return c;
  }
  throw Error(fmt::format("stage {} not present in stats", to_string(stage)));
}

bool StageStats::conserved() const {
  for (std::size_t i = 0; i < stages.size(); ++i) {
    const StageCounts& c = stages[i];
    if (c.input != c.pass + c.reject + c.error) return false;
    if (i == 0) continue;
    std::size_t expected = stages[i - 1].pass;
    if (i == 1) expected -= bypassed;
    if (c.stage == Stage::kDegrade) expected += bypassed;
    if (c.input != expected) return false;
  }
  return true;
}

json StageStats::to_json() const {
  json arr = json::array();
  for (const StageCounts& c : stages) {
    arr.push_back({{"stage", to_string(c.stage)},
                   {"input", c.input},
                   {"pass", c.pass},
                   {"reject", c.reject},
                   {"error", c.error},
                   {"wall_seconds", c.wall_seconds}});
  }
  return {{"stages", arr}, {"bypassed", bypassed}, {"pairs", pairs}};
}

StageStats StageStats::from_json(const json& j) {
  StageStats st;
  for (const json& c : j.at("stages")) {
    st.stages.push_back({stage_from_string(c.at("stage").get<std::string>()),
                         c.at("input").get<std::size_t>(), c.at("pass").get<std::size_t>(),
                         c.at("reject").get<std::size_t>(), c.at("error").get<std::size_t>(),
                         c.at("wall_seconds").get<double>()});
  }
  st.bypassed = j.at("bypassed").get<std::size_t>();
  st.pairs = j.at("pairs").get<std::size_t>();
  return st;
}

StageStats run_through(const PipelineConfig& cfg, Step last) { return Run(cfg).execute(last); }

std::optional<PipelineConfig> load_saved_config(const fs::path& output_root) {
  std::ifstream in(output_root / kConfigFile);
  if (!in) return std::nullopt;
  try {
    PipelineConfig cfg = PipelineConfig::from_canonical_json(json::parse(in));
    cfg.output_root = output_root;
    return cfg;
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("cannot read {}: {}", (output_root / kConfigFile).string(), e.what()));
  }
}

}  // namespace curate
