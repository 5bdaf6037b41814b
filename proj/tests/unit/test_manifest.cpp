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

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <thread>
#include <unistd.h>

#include <fmt/format.h>

#include "curate/errors.hpp"
#include "curate/manifest.hpp"

namespace curate {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& s) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << s;
}

ManifestEvent event(const std::string& id, Stage stage, Outcome outcome = Outcome::kPass) {
  ManifestEvent e;
  e.image_id = id;
  e.path = "/data/" + id + ".png";
  e.stage = stage;
  e.outcome = outcome;
  e.payload = {{"n", id.size()}};
  return e;
}

class ManifestTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / fmt::format("curate_manifest_{}_{}", ::getpid(),
                                                   ::testing::UnitTest::GetInstance()->random_seed());
    fs::create_directories(dir_);
    path_ = dir_ / "manifest.ndjson";
    ::unsetenv("CURATE_CRASH_AT");
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path dir_;
  fs::path path_;
};

TEST_F(ManifestTest, MissingFileIsEmpty) {
  const ManifestContents m = read_manifest(path_);
  EXPECT_TRUE(m.lines.empty());
  EXPECT_EQ(m.valid_bytes, 0u);
  EXPECT_FALSE(m.dropped_torn_line);
}

TEST_F(ManifestTest, RoundTrip) {
  {
    ManifestWriter w(path_, "abc123");
    w.append(event("x", Stage::kScan));
    ManifestEvent e = event("y", Stage::kBlur, Outcome::kReject);
    e.reason = "blur_below_band";
    w.append(e);
    EXPECT_EQ(w.lines_written(), 2u);
  }
  const ManifestContents m = read_manifest(path_);
  ASSERT_EQ(m.lines.size(), 2u);
  EXPECT_EQ(m.lines[1].event.image_id, "y");
  EXPECT_EQ(m.lines[1].event.stage, Stage::kBlur);
  EXPECT_EQ(m.lines[1].event.outcome, Outcome::kReject);
  EXPECT_EQ(m.lines[1].event.reason, "blur_below_band");
  EXPECT_EQ(m.lines[1].event.payload, (nlohmann::json{{"n", 1}}));
  EXPECT_EQ(m.lines[1].config_hash, "abc123");
  EXPECT_EQ(m.lines[1].tool_version, kToolVersion);
  EXPECT_EQ(m.lines[1].line_no, 2u);
  EXPECT_EQ(m.valid_bytes, fs::file_size(path_));

  const nlohmann::json j = nlohmann::json::parse(slurp(path_).substr(0, slurp(path_).find('\n')));
  for (const char* key : {"image_id", "path", "stage", "outcome", "reason", "payload",
                          "tool_version", "config_hash"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
}

TEST_F(ManifestTest, AppendsAcrossWriters) {
  { ManifestWriter(path_, "h").append(event("a", Stage::kScan)); }
  { ManifestWriter(path_, "h").append(event("b", Stage::kScan)); }
  EXPECT_EQ(read_manifest(path_).lines.size(), 2u);
}

TEST_F(ManifestTest, ConcurrentAppendsStayLineAtomic) {
  {
    ManifestWriter w(path_, "h");
    std::vector<std::thread> threads;
    for (int t = 0; t < 8; ++t) {
      threads.emplace_back([&, t] {
        for (int i = 0; i < 200; ++i) w.append(event(fmt::format("t{}_{}", t, i), Stage::kIqa));
      });
    }
    for (auto& th : threads) th.join();
  }
  EXPECT_EQ(read_manifest(path_).lines.size(), 1600u);
}

TEST_F(ManifestTest, TornFinalLineDropped) {
  { ManifestWriter(path_, "h").append(event("a", Stage::kScan)); }
  const auto good = fs::file_size(path_);
  spit(path_, slurp(path_) + R"({"image_id":"b","pa)");
  const ManifestContents m = read_manifest(path_);
  EXPECT_EQ(m.lines.size(), 1u);
  EXPECT_TRUE(m.dropped_torn_line);
  EXPECT_EQ(m.valid_bytes, good);

  { ManifestWriter(path_, "h", m.valid_bytes).append(event("c", Stage::kScan)); }
  const ManifestContents after = read_manifest(path_);
  ASSERT_EQ(after.lines.size(), 2u);
  EXPECT_EQ(after.lines[1].event.image_id, "c");
  EXPECT_FALSE(after.dropped_torn_line);
}

TEST_F(ManifestTest, MalformedMiddleLineNamesLine) {
  {
    ManifestWriter w(path_, "h");
    w.append(event("a", Stage::kScan));
  }
  spit(path_, slurp(path_) + "not json\n");
  { ManifestWriter(path_, "h").append(event("c", Stage::kScan)); }
  try {
    read_manifest(path_);
    FAIL() << "expected ManifestError";
  } catch (const ManifestError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
}

TEST_F(ManifestTest, MissingFieldIsMalformed) {
  spit(path_, R"({"image_id":"a","stage":"scan"})" "\n");
  EXPECT_THROW(read_manifest(path_), ManifestError);
}

TEST_F(ManifestTest, CrashHookExitsBeforeNthEvent) {
  EXPECT_EXIT(
      {
        ::setenv("CURATE_CRASH_AT", "blur:2", 1);
        ManifestWriter w(path_, "h");
        w.append(event("s", Stage::kScan));
        for (int i = 0; i < 5; ++i) w.append(event(fmt::format("b{}", i), Stage::kBlur));
      },
      ::testing::ExitedWithCode(86), "");
  const ManifestContents m = read_manifest(path_);
  EXPECT_EQ(m.lines.size(), 3u);
  EXPECT_FALSE(m.dropped_torn_line);
}

TEST_F(ManifestTest, CrashHookTorn) {
  EXPECT_EXIT(
      {
        ::setenv("CURATE_CRASH_AT", "iqa:1:torn", 1);
        ManifestWriter w(path_, "h");
        for (int i = 0; i < 3; ++i) w.append(event(fmt::format("q{}", i), Stage::kIqa));
      },
      ::testing::ExitedWithCode(86), "");
  const ManifestContents m = read_manifest(path_);
  EXPECT_EQ(m.lines.size(), 1u);
  EXPECT_TRUE(m.dropped_torn_line);
  EXPECT_LT(m.valid_bytes, fs::file_size(path_));
}

TEST(ManifestNames, RoundTrip) {
  for (Stage s : {Stage::kScan, Stage::kBlur, Stage::kFlat, Stage::kIqa, Stage::kSelect,
                  Stage::kDegrade, Stage::kSummary}) {
    EXPECT_EQ(stage_from_string(to_string(s)), s);
  }
  for (Outcome o : {Outcome::kPass, Outcome::kReject, Outcome::kError}) {
    EXPECT_EQ(outcome_from_string(to_string(o)), o);
  }
  EXPECT_THROW(stage_from_string("resize"), ManifestError);
}

}  // namespace
}  // namespace curate
