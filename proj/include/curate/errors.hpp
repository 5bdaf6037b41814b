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

#include <stdexcept>
#include <string>

namespace curate {

// Base for every error the library raises deliberately.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Corrupt or unsupported image file. Per-image: recorded, never fatal.
class DecodeError : public Error {
 public:
  using Error::Error;
};

// Degradation chain would shrink an intermediate below the minimum size.
class DegradeError : public Error {
 public:
  using Error::Error;
};

// External scorer spoke the wire protocol incorrectly. Fatal for the stage.
class ScorerProtocolError : public Error {
 public:
  using Error::Error;
};

// External scorer could not be started.
class ScorerLaunchError : public Error {
 public:
  using Error::Error;
};

// Manifest is unreadable, inconsistent, or was written under another config.
class ManifestError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace curate
