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

#ifndef SEEDRELAY_SIMULATOR_H_
#define SEEDRELAY_SIMULATOR_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "seedrelay/channel.h"
#include "seedrelay/dataset.h"
#include "seedrelay/labels.h"
#include "seedrelay/protocol.h"
#include "seedrelay/topology.h"

namespace seedrelay {

struct DataSource {
  enum class Kind { kSynthetic, kIdx };
  Kind kind = Kind::kSynthetic;
  std::string images_path;
  std::string labels_path;
  // Synthetic pool size per label; 0 sizes it to n_devices * full_count.
  int synthetic_per_label = 0;
  uint64_t data_seed = 20260101;
};

struct SimConfig {
  int n_devices = 10;
  int max_hops = 2;
  double plane_side = 10'000.0;  // meters
  ChannelParams channel;
  ProtocolConfig protocol;
  PartitionConfig partition;
  int64_t tau = kUnboundedDeadline;  // slots
  DataSource data;
  uint64_t seed = 1;
  std::optional<Topology> topology;  // overrides placement and routing
  int64_t max_slots_per_hop = kDefaultMaxSlotsPerHop;
  bool compute_similarity = true;

  absl::Status Validate() const;
};

// Shared immutable image pool for runs over the same data source.
absl::StatusOr<std::shared_ptr<const ImagePool>> LoadPool(const SimConfig& config);

struct HopRecord {
  int route = 0;
  int position = 0;  // 0 = edge device
  int device = 0;
  int destination = 0;  // next device id, 0 for the server
  double distance_m = 0.0;
  double rate_bps = 0.0;
  bool forwarded_only = false;
  LabelSet public_sdi;
  LabelSet dummy_labels;
  int dummy_shortfall = 0;
  int payload_samples = 0;
  uint64_t payload_bytes = 0;
  int64_t slots = 0;  // T_i
  int64_t start_slot = 0;  // hop occupies slots (start_slot, end_slot]
  int64_t end_slot = 0;
};

struct DeviceMetrics {
  int device = 0;
  int route = 0;
  LabelSet targets;
  std::optional<double> label_privacy;  // empty when the route delivered nothing
};

struct SimReport {
  uint64_t seed = 0;
  int n_devices = 0;
  int max_hops = 0;
  int num_routes = 0;
  int64_t tau = kUnboundedDeadline;
  double per_route_bandwidth_hz = 0.0;

  std::vector<std::vector<int>> routes;
  std::vector<HopRecord> hops;               // route-major, edge device first
  std::vector<int64_t> route_latency;        // sum of T_i per route
  int64_t overall_latency = 0;               // max over routes

  int reference_device = 0;
  int reference_route = 0;
  int64_t reference_latency = 0;
  double reference_label_privacy = 0.0;  // 0 when undefined
  bool reference_privacy_defined = false;

  int64_t emitted_samples = 0;
  int64_t delivered_samples = 0;
  uint64_t emitted_bytes = 0;
  uint64_t delivered_bytes = 0;
  LabelSet received_sdi;
  std::vector<DeviceMetrics> devices;
  double mean_label_privacy = 0.0;  // over devices with defined privacy

  std::optional<double> similarity;
  std::optional<double> sample_privacy;
  double mean_compression_ratio = 0.0;  // encoded record bytes / 784

  int dummy_shortfall_devices = 0;
  int undefined_privacy_devices = 0;
  bool similarity_degenerate = false;

  ServerInbox inbox;
};

// Uniformly random route, its edge (farthest) device.
int ReferenceDevice(const Topology& topology, Rng& rng);

// One end-to-end collection round. Deterministic given config.seed; every hop
// draws from its own stream keyed by (route, position).
absl::StatusOr<SimReport> Run(const SimConfig& config,
                              std::shared_ptr<const ImagePool> pool);
absl::StatusOr<SimReport> Run(const SimConfig& config);

std::string SimReportToJson(const SimReport& report);

// Monte Carlo harness.
enum class SweepAxis { kRho, kMaxHops, kL, kTau, kTxPower };
absl::StatusOr<SweepAxis> ParseSweepAxis(const std::string& name);
std::string SweepAxisName(SweepAxis axis);
absl::Status ApplyAxis(SweepAxis axis, double value, SimConfig& config);

struct MetricSummary {
  double mean = 0.0;
  double stddev = 0.0;
  int count = 0;  // runs where the metric was defined
};

struct SweepRow {
  double value = 0.0;
  SimConfig config;  // config at this sweep point
  int seeds = 0;
  MetricSummary overall_latency;
  MetricSummary reference_latency;
  MetricSummary reference_label_privacy;
  MetricSummary mean_label_privacy;
  MetricSummary delivered_samples;
  MetricSummary delivered_bytes;
  MetricSummary delivered_fraction;
  MetricSummary similarity;
  MetricSummary sample_privacy;
  MetricSummary compression_ratio;
};

struct SweepTable {
  SweepAxis axis;
  std::vector<SweepRow> rows;
};

// Seed k of every sweep point uses the same master seed, so points differ only
// in the swept parameter.
uint64_t SweepSeed(uint64_t base_seed, int k);

absl::StatusOr<SweepTable> Sweep(const SimConfig& config, SweepAxis axis,
                                 const std::vector<double>& values, int seeds,
                                 int jobs = 1,
                                 std::shared_ptr<const ImagePool> pool = nullptr);

std::string SweepTableToCsv(const SweepTable& table);

}  // namespace seedrelay

#endif  // SEEDRELAY_SIMULATOR_H_
