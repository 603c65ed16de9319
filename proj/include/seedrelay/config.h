// Copyright 2026 The Seedrelay Authors
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


// Experiment configuration files.
//
// Grammar, one statement per line:
//   # comment            (also allowed after a value)
//   [section]            network | channel | protocol | data | run
//   key = value          value is a number, `inf`, or a bare/quoted string
//
// Keys may appear outside any section. Inside a section only that section's
// keys are accepted. Command-line overrides use the same `key=value` form,
// optionally qualified as `section.key`.

#ifndef SEEDRELAY_CONFIG_H_
#define SEEDRELAY_CONFIG_H_

#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "seedrelay/simulator.h"

namespace seedrelay {

// Sets one key. InvalidArgument for unknown keys and out-of-range values.
absl::Status ApplyConfigKey(absl::string_view key, absl::string_view value,
                            SimConfig& config);

// Parses `text` on top of `base`. Errors are prefixed with
// "<source_name>:<line>: ".
absl::StatusOr<SimConfig> ParseConfig(absl::string_view text,
                                      absl::string_view source_name,
                                      SimConfig base = {});

// NotFound when the file cannot be read; otherwise as ParseConfig.
absl::StatusOr<SimConfig> LoadConfigFile(const std::string& path,
                                         SimConfig base = {});

// `key=value` or `section.key=value`.
absl::Status ApplyOverride(absl::string_view assignment, SimConfig& config);

// Names of every accepted key, grouped by section, for help text.
std::vector<std::string> ConfigKeys();

}  // namespace seedrelay

#endif  // SEEDRELAY_CONFIG_H_
