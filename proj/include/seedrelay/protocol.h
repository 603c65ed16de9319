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

#ifndef SEEDRELAY_PROTOCOL_H_
#define SEEDRELAY_PROTOCOL_H_

#include <array>
#include <cstdint>
#include <limits>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "seedrelay/codec.h"
#include "seedrelay/dataset.h"
#include "seedrelay/labels.h"
#include "seedrelay/random.h"

namespace seedrelay {

struct ProtocolConfig {
  int b = 4;  // per-label seed cap across a payload
  int l = 1;  // label privacy threshold (minimum non-target labels advertised)
  CompressionRate rho;

  absl::Status Validate() const;
};

struct EmitResult {
  Payload payload;
  bool forwarded_only = false;
  LabelSet dummy_labels;
  int samples_added = 0;
  // Dummy labels requested by l that the device could not supply.
  int dummy_shortfall = 0;
};

std::array<int, kNumLabels> LabelCounts(const Payload& payload);

// One device's step along a route. `incoming` is null for the edge device.
//
// A relay whose targets are all advertised by the incoming payload forwards it
// unchanged. Otherwise the device appends sparsified target samples, then
// dummy samples for max(0, l - |non-target labels already advertised|) labels
// drawn uniformly from its non-target labels not yet advertised. No label ever
// exceeds b samples in the merged payload; earlier-hop samples take priority
// and the device's surplus is skipped.
EmitResult DeviceEmit(const DeviceDataset& dataset, const Payload* incoming,
                      const ProtocolConfig& config, Rng& rng);

inline constexpr int64_t kUnboundedDeadline = std::numeric_limits<int64_t>::max();

struct TimedSample {
  SparseSample sample;
  int64_t arrival_slot = 0;
};

struct DeliveredSample {
  SparseSample sample;
  int64_t arrival_slot = 0;
  int route = 0;
};

struct ServerInbox {
  std::vector<std::vector<DeliveredSample>> per_route;
  LabelSet received_sdi;
  int64_t dropped = 0;  // arrivals after the deadline
  int64_t deadline = kUnboundedDeadline;

  int64_t delivered_count() const;
  // Labels delivered on one route.
  LabelSet RouteLabels(int route) const;
};

// Keeps samples whose final-hop arrival slot is <= tau. Arrival stamps in each
// route stream must be nondecreasing.
absl::StatusOr<ServerInbox> ServerCollect(
    const std::vector<std::vector<TimedSample>>& route_deliveries, int64_t tau);

struct OversampleOptions {
  bool jitter = true;
  int max_shift = 1;        // pixels
  double noise_sigma = 8.0;  // intensity levels
};

struct OversampleResult {
  std::vector<LabeledImage> samples;
  bool empty_input = false;
};

// Each delivered sample replicated `factor` times, each copy shifted by up to
// max_shift pixels and perturbed by Gaussian noise when jitter is on.
absl::StatusOr<OversampleResult> Oversample(const ServerInbox& inbox, int factor,
                                            const OversampleOptions& options,
                                            Rng& rng);

}  // namespace seedrelay

#endif  // SEEDRELAY_PROTOCOL_H_
