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

// Test double for the external scorer protocol. Reads {"id","path"} lines on
// stdin and answers {"id","score"} lines on stdout.
//
//   --echo V     answer V for every id (default 0.5)
//   --hash       answer a score derived from the id instead
//   --reverse    hold all answers until stdin closes, then answer in reverse
//   --fault F    misbehave: malformed | duplicate | missing | nonfinite |
//                unknown | exit1

#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "curate/hash.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Echo scorer"};
  double echo = 0.5;
  bool hash = false;
  bool reverse = false;
  std::string fault = "none";
  app.add_option("--echo", echo);
  app.add_flag("--hash", hash);
  app.add_flag("--reverse", reverse);
  app.add_option("--fault", fault)
      ->check(CLI::IsMember({"none", "malformed", "duplicate", "missing", "nonfinite", "unknown",
                             "exit1"}));
  CLI11_PARSE(app, argc, argv);

  std::vector<std::string> answers;
  std::string line;
  std::size_t n = 0;
  while (std::getline(std::cin, line)) {
    const auto req = nlohmann::json::parse(line);
    const std::string id = req.at("id").get<std::string>();
    const double score =
        hash ? static_cast<double>(curate::fnv1a64(id) % 100000) / 100000.0 : echo;
    std::string resp = nlohmann::json{{"id", id}, {"score", score}}.dump();
    if (n == 0) {
      if (fault == "malformed") resp = "{\"id\": oops";
      if (fault == "nonfinite") resp = "{\"id\":\"" + id + "\",\"score\":1e999}";
      if (fault == "unknown") resp = nlohmann::json{{"id", id + "-x"}, {"score", score}}.dump();
      if (fault == "duplicate") answers.push_back(resp);
    }
    if (!(fault == "missing" && n == 0)) answers.push_back(resp);
    ++n;
    if (!reverse) {
      for (const std::string& a : answers) std::cout << a << "\n";
      std::cout.flush();
      answers.clear();
    }
  }
  if (reverse) std::reverse(answers.begin(), answers.end());
  for (const std::string& a : answers) std::cout << a << "\n";
  std::cout.flush();
  std::cerr << "echo-scorer: answered " << n << " requests\n";
  return fault == "exit1" ? 1 : 0;
}
