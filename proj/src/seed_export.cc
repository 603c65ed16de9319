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


#include "seedrelay/seed_export.h"

#include "absl/strings/str_cat.h"
#include "json.hpp"

namespace seedrelay {
namespace {

nlohmann::ordered_json MaskJson(LabelSet s) {
  auto arr = nlohmann::ordered_json::array();
  for (int k = 0; k < kNumLabels; ++k) arr.push_back(s.Contains(k) ? 1 : 0);
  return arr;
}

}  // namespace

absl::StatusOr<SeedExport> BuildSeedExport(const SimReport& report) {
  using nlohmann::ordered_json;
  SeedExport out;
  ordered_json blocks = ordered_json::array();
  ordered_json samples = ordered_json::array();

  auto emit_block = [&](int route, const Payload& payload,
                        const std::vector<int64_t>& arrivals) -> absl::Status {
    auto bytes = SerializePayload(payload);
    if (!bytes.ok()) return bytes.status();
    const std::size_t offset = out.bytes.size();
    const int block = static_cast<int>(blocks.size());
    std::size_t cursor = offset + kPayloadHeaderBytes;
    for (std::size_t k = 0; k < payload.samples.size(); ++k) {
      const SparseSample& s = payload.samples[k];
      ordered_json e;
      e["index"] = out.sample_count++;
      e["block"] = block;
      e["route"] = route;
      e["label"] = s.label;
      e["arrival_slot"] = arrivals[k];
      e["offset"] = cursor;
      e["bytes"] = s.EncodedSize();
      e["nnz"] = s.nnz();
      samples.push_back(std::move(e));
      cursor += s.EncodedSize();
    }
    ordered_json b;
    b["route"] = route;
    b["offset"] = offset;
    b["bytes"] = bytes->size();
    b["count"] = payload.samples.size();
    b["sdi"] = MaskJson(payload.public_sdi);
    blocks.push_back(std::move(b));
    out.bytes.insert(out.bytes.end(), bytes->begin(), bytes->end());
    return absl::OkStatus();
  };

  for (std::size_t j = 0; j < report.inbox.per_route.size(); ++j) {
    const auto& delivered = report.inbox.per_route[j];
    if (delivered.empty()) continue;
    Payload p;
    std::vector<int64_t> arrivals;
    for (const DeliveredSample& d : delivered) {
      p.samples.push_back(d.sample);
      p.public_sdi.Insert(d.sample.label);
      arrivals.push_back(d.arrival_slot);
    }
    if (absl::Status s = emit_block(static_cast<int>(j), p, arrivals); !s.ok()) {
      return s;
    }
  }
  if (blocks.empty()) {
    if (absl::Status s = emit_block(-1, Payload{}, {}); !s.ok()) return s;
  }

  ordered_json side;
  side["format"] = "seedrelay-seeds";
  side["version"] = kSeedExportVersion;
  side["seed"] = report.seed;
  if (report.tau == kUnboundedDeadline) {
    side["tau"] = "inf";
  } else {
    side["tau"] = report.tau;
  }
  side["num_routes"] = report.num_routes;
  side["total_bytes"] = out.bytes.size();
  side["delivered_samples"] = out.sample_count;
  side["dropped_samples"] = report.inbox.dropped;
  side["received_sdi"] = MaskJson(report.received_sdi);
  side["blocks"] = std::move(blocks);
  side["samples"] = std::move(samples);
  out.sidecar_json = side.dump(2) + "\n";
  return out;
}

absl::StatusOr<std::vector<Payload>> ReadSeedExport(std::span<const uint8_t> bytes) {
  if (bytes.empty()) return absl::DataLossError("seed export is empty");
  std::vector<Payload> blocks;
  std::size_t pos = 0;
  while (pos < bytes.size()) {
    std::size_t used = 0;
    auto p = ParsePayload(bytes.subspan(pos), &used);
    if (!p.ok()) {
      return absl::Status(p.status().code(),
                          absl::StrCat("block at byte ", pos, ": ",
                                       p.status().message()));
    }
    blocks.push_back(*std::move(p));
    pos += used;
  }
  return blocks;
}

}  // namespace seedrelay
