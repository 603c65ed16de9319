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


// Seed-export files handed to the generator trainer.
//
// The binary file is a sequence of payload blocks in the codec wire format,
// one per route that delivered anything, in route order. Each block's mask is
// the set of labels that route delivered. An empty inbox is written as a
// single header-only block. The JSON sidecar lists every sample with its
// route, block, arrival slot and byte offset.

#ifndef SEEDRELAY_SEED_EXPORT_H_
#define SEEDRELAY_SEED_EXPORT_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "seedrelay/codec.h"
#include "seedrelay/simulator.h"

namespace seedrelay {

inline constexpr int kSeedExportVersion = 1;

struct SeedExport {
  std::vector<uint8_t> bytes;
  std::string sidecar_json;
  int64_t sample_count = 0;
};

absl::StatusOr<SeedExport> BuildSeedExport(const SimReport& report);

// Parses every block of an export file. DataLoss or InvalidArgument from the
// codec for corrupt input; an empty buffer is DataLoss.
absl::StatusOr<std::vector<Payload>> ReadSeedExport(std::span<const uint8_t> bytes);

}  // namespace seedrelay

#endif  // SEEDRELAY_SEED_EXPORT_H_
