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
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace curate {

inline constexpr std::string_view kToolVersion = "0.1.0";

enum class Stage { kScan, kBlur, kFlat, kIqa, kSelect, kDegrade, kSummary };
enum class Outcome { kPass, kReject, kError };

std::string_view to_string(Stage stage);
std::string_view to_string(Outcome outcome);
Stage stage_from_string(std::string_view name);
Outcome outcome_from_string(std::string_view name);

// One manifest line, minus the run-wide stamps the writer adds.
struct ManifestEvent {
  std::string image_id;
  std::string path;
  Stage stage = Stage::kScan;
  Outcome outcome = Outcome::kPass;
  std::string reason;
  nlohmann::json payload = nlohmann::json::object();
};

struct ManifestLine {
  ManifestEvent event;
  std::string config_hash;
  std::string tool_version;
  std::size_t line_no = 0;  // 1-based
};

struct ManifestContents {
  std::vector<ManifestLine> lines;
  // Byte length of the well-formed prefix. A torn final line lies past it.
  std::uintmax_t valid_bytes = 0;
  bool dropped_torn_line = false;
};

nlohmann::json event_to_json(const ManifestEvent& e, std::string_view config_hash);
ManifestEvent event_from_json(const nlohmann::json& j);

// Parses an NDJSON manifest. A final line with no terminating newline is a
// crash artifact: it is dropped with a warning. Any other malformed line
// throws ManifestError naming its line number. A missing file reads as empty.
ManifestContents read_manifest(const std::filesystem::path& path);

// Append-only, line-atomic writer shared by all workers. Each line goes out
// in a single write(2) on an O_APPEND descriptor.
//
// Test hook: CURATE_CRASH_AT="<stage>:<n>[:torn]" makes the process exit
// with status 86 when it is about to write the (n+1)-th event of <stage> in
// this process, first emitting half of that line when ":torn" is given.
class ManifestWriter {
 public:
  // Truncates the file to keep_bytes before appending (drops a torn tail).
  ManifestWriter(const std::filesystem::path& path, std::string config_hash,
                 std::optional<std::uintmax_t> keep_bytes = std::nullopt);
  ~ManifestWriter();
  ManifestWriter(const ManifestWriter&) = delete;
  ManifestWriter& operator=(const ManifestWriter&) = delete;

  void append(const ManifestEvent& event);
  void sync();
  std::size_t lines_written() const { return lines_written_; }
  const std::string& config_hash() const { return config_hash_; }

 private:
  void maybe_crash(const ManifestEvent& event, const std::string& line);

  int fd_ = -1;
  std::string config_hash_;
  std::mutex mu_;
  std::size_t lines_written_ = 0;

  struct CrashHook {
    Stage stage;
    std::size_t after;
    bool torn;
    std::size_t seen = 0;
  };
  std::optional<CrashHook> crash_;
};

}  // namespace curate
