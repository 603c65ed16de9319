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


// Command implementations behind the seedrelay binary. Each returns a process
// exit code and writes diagnostics to `err`.

#ifndef SEEDRELAY_COMMANDS_H_
#define SEEDRELAY_COMMANDS_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "seedrelay/simulator.h"

namespace seedrelay {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitIo = 3,
  kExitRuntime = 4,
};

struct GlobalOptions {
  std::string config_path;
  std::vector<std::string> overrides;  // key=value, applied after the file
  std::optional<uint64_t> seed;
  std::string out;  // empty writes to `out` stream where allowed
  int jobs = 1;
  std::string topology_file;
  std::string mnist_dir;
  bool synthetic = false;
};

struct SweepRequest {
  std::string axis;
  std::string values;  // comma separated; `inf` allowed for tau
  int seeds = 100;
};

// Comma-separated numbers.
absl::StatusOr<std::vector<double>> ParseValueList(absl::string_view text);

int CmdRun(const GlobalOptions& options, std::ostream& out, std::ostream& err);
int CmdSweep(const GlobalOptions& options, const SweepRequest& request,
             std::ostream& out, std::ostream& err);
// Writes options.out and options.out + ".json".
int CmdExportSeeds(const GlobalOptions& options, std::ostream& out,
                   std::ostream& err);
// Embeds the samples of a seed-export file in the plane.
int CmdMds(const GlobalOptions& options, const std::string& input,
           std::ostream& out, std::ostream& err);

}  // namespace seedrelay

#endif  // SEEDRELAY_COMMANDS_H_
