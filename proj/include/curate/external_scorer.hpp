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

#include <span>
#include <string>
#include <vector>

#include "curate/iqa.hpp"

namespace curate {

// Runs one scorer subprocess over a batch.
//
// Wire protocol, one JSON object per line, UTF-8:
//   request  (our stdout -> scorer stdin):  {"id":"<image_id>","path":"<absolute path>"}
//   response (scorer stdout -> us):         {"id":"<image_id>","score":<finite number>}
// Responses may arrive in any order. Closing the scorer's stdin ends the
// batch; the scorer must then flush and exit 0. Its stderr is relayed to the
// log line by line.
//
// Throws ScorerLaunchError if the command cannot be started (including shell
// exit 127), ScorerProtocolError for malformed or non-finite responses,
// unknown, duplicate or missing ids, and nonzero exit. Output follows input
// order.
std::vector<ScoreRecord> score_external(std::span<const ScoreItem> items,
                                        const std::string& command);

}  // namespace curate
