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

#include "curate/manifest.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <array>
#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <utility>

#include <fmt/format.h>

#include "curate/errors.hpp"
#include "curate/log.hpp"

namespace curate {
namespace {

constexpr std::array<std::pair<Stage, std::string_view>, 7> kStageNames{{
    {Stage::kScan, "scan"},
    {Stage::kBlur, "blur"},
    {Stage::kFlat, "flat"},
    {Stage::kIqa, "iqa"},
    {Stage::kSelect, "select"},
    {Stage::kDegrade, "degrade"},
    {Stage::kSummary, "summary"},
}};

constexpr std::array<std::pair<Outcome, std::string_view>, 3> kOutcomeNames{{
    {Outcome::kPass, "pass"},
    {Outcome::kReject, "reject"},
    {Outcome::kError, "error"},
}};

void write_fully(int fd, std::string_view data) {
  while (!data.empty()) {
    const ssize_t n = ::write(fd, data.data(), data.size());
    if (n < 0) {
      if (errno == EINTR) continue;
      throw ManifestError(fmt::format("manifest write failed: {}", std::strerror(errno)));
    }
    data.remove_prefix(static_cast<std::size_t>(n));
  }
}

}  // namespace

std::string_view to_string(Stage stage) {
  for (const auto& [s, name] : kStageNames) {
    if (s == stage) return name;
  }
  return "?";
}

std::string_view to_string(Outcome outcome) {
  for (const auto& [o, name] : kOutcomeNames) {
    if (o == outcome) return name;
  }
  return "?";
}

Stage stage_from_string(std::string_view name) {
  for (const auto& [s, n] : kStageNames) {
    if (n == name) return s;
  }
  throw ManifestError(fmt::format("unknown stage '{}'", name));
}

Outcome outcome_from_string(std::string_view name) {
  for (const auto& [o, n] : kOutcomeNames) {
    if (n == name) return o;
  }
  throw ManifestError(fmt::format("unknown outcome '{}'", name));
}

nlohmann::json event_to_json(const ManifestEvent& e, std::string_view config_hash) {
  return {{"image_id", e.image_id},
          {"path", e.path},
          {"stage", to_string(e.stage)},
          {"outcome", to_string(e.outcome)},
          {"reason", e.reason},
          {"payload", e.payload},
          {"tool_version", kToolVersion},
          {"config_hash", config_hash}};
}

ManifestEvent event_from_json(const nlohmann::json& j) {
  ManifestEvent e;
  e.image_id = j.at("image_id").get<std::string>();
  e.path = j.at("path").get<std::string>();
  e.stage = stage_from_string(j.at("stage").get<std::string>());
  e.outcome = outcome_from_string(j.at("outcome").get<std::string>());
  e.reason = j.at("reason").get<std::string>();
  e.payload = j.at("payload");
  return e;
}

ManifestContents read_manifest(const std::filesystem::path& path) {
  ManifestContents out;
  std::ifstream in(path, std::ios::binary);
  if (!in) return out;
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();

  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    const std::size_t nl = text.find('\n', pos);
    ++line_no;
    if (nl == std::string::npos) {
      log().warn("manifest {}: dropping torn final line {} ({} bytes)", path.string(), line_no,
                 text.size() - pos);
      out.dropped_torn_line = true;
      break;
    }
    const std::string_view line(text.data() + pos, nl - pos);
    ManifestLine parsed;
    try {
      const nlohmann::json j = nlohmann::json::parse(line);
      parsed.event = event_from_json(j);
      parsed.config_hash = j.at("config_hash").get<std::string>();
      parsed.tool_version = j.at("tool_version").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw ManifestError(
          fmt::format("manifest {} line {}: malformed entry: {}", path.string(), line_no, e.what()));
    }
    parsed.line_no = line_no;
    out.lines.push_back(std::move(parsed));
    pos = nl + 1;
    out.valid_bytes = pos;
  }
  return out;
}

ManifestWriter::ManifestWriter(const std::filesystem::path& path, std::string config_hash,
                               std::optional<std::uintmax_t> keep_bytes)
    : config_hash_(std::move(config_hash)) {
  if (keep_bytes && std::filesystem::exists(path) &&
      std::filesystem::file_size(path) > *keep_bytes) {
    std::filesystem::resize_file(path, *keep_bytes);
  }
  fd_ = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd_ < 0) {
    throw ManifestError(
        fmt::format("cannot open manifest {}: {}", path.string(), std::strerror(errno)));
  }
  if (const char* hook_env = std::getenv("CURATE_CRASH_AT"); hook_env != nullptr && *hook_env != '\0') {
    const std::string s(hook_env);
    const auto c1 = s.find(':');
    if (c1 != std::string::npos) {
      const auto c2 = s.find(':', c1 + 1);
      CrashHook hook{stage_from_string(s.substr(0, c1)),
                     std::stoul(s.substr(c1 + 1, c2 == std::string::npos ? c2 : c2 - c1 - 1)),
                     c2 != std::string::npos && s.substr(c2 + 1) == "torn"};
      crash_ = hook;
    }
  }
}

ManifestWriter::~ManifestWriter() {
  if (fd_ >= 0) {
    ::fsync(fd_);
    ::close(fd_);
  }
}

void ManifestWriter::maybe_crash(const ManifestEvent& event, const std::string& line) {
  if (!crash_ || crash_->stage != event.stage) return;
  if (crash_->seen++ < crash_->after) return;
  if (crash_->torn) write_fully(fd_, std::string_view(line).substr(0, line.size() / 2));
  ::fsync(fd_);
  std::_Exit(86);
}

void ManifestWriter::append(const ManifestEvent& event) {
  std::string line = event_to_json(event, config_hash_).dump() + "\n";
  std::lock_guard lock(mu_);
  maybe_crash(event, line);
  write_fully(fd_, line);
  ++lines_written_;
}

void ManifestWriter::sync() {
  std::lock_guard lock(mu_);
  ::fsync(fd_);
}

}  // namespace curate
