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

#ifndef SEEDRELAY_CHANNEL_H_
#define SEEDRELAY_CHANNEL_H_

#include <cstdint>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "seedrelay/random.h"

namespace seedrelay {

// -174 dBm/Hz expressed in W/Hz.
inline constexpr double kDefaultNoisePsd = 3.981071705534972e-21;

struct ChannelParams {
  double bandwidth_hz = 20e6;  // total system bandwidth, split across routes
  double noise_psd = kDefaultNoisePsd;  // W/Hz
  double path_loss_exponent = 4.0;
  double tx_power_w = 0.2;
  double slot_duration_s = 0.2;
  // Fixed transmit rate as a fraction of the g = 1 capacity of the hop.
  double tx_rate_fraction = 0.5;

  absl::Status Validate() const;
};

double DbmPerHzToWattsPerHz(double dbm_per_hz);
double DbmToWatts(double dbm);

// One directed hop. The rate is chosen once per hop and held for every slot.
struct Link {
  double distance_m = 1.0;  // already clamped
  double bandwidth_hz = 0.0;  // per-route share B / r
  double rate_bps = 0.0;
};

// Per-route bandwidth B / r.
double PerRouteBandwidth(const ChannelParams& params, int num_routes);

// Shannon capacity B' log2(1 + g P d^-alpha / (N0 B')) for fading power g.
double InstantaneousCapacity(const Link& link, const ChannelParams& params,
                             double fading);

// Builds the hop with rate tx_rate_fraction * capacity(g = 1). Distances
// below kMinHopDistanceMeters are clamped.
Link MakeLink(double distance_m, double per_route_bandwidth_hz,
              const ChannelParams& params);

struct HopResult {
  int64_t slots_used = 0;  // T_i
  double bits_per_success = 0.0;
  std::vector<double> bits_delivered_per_slot;
  std::vector<int64_t> success_slots;  // 1-based slot indices within the hop

  // 1-based slot within the hop at which the first `cumulative_bits` bits of
  // the payload have all been delivered. 0 for cumulative_bits == 0.
  int64_t CompletionSlot(uint64_t cumulative_bits) const;
};

inline constexpr int64_t kDefaultMaxSlotsPerHop = 10'000'000;

// Sends `payload_bits` over the hop. Each slot draws g ~ Exp(1); the slot
// delivers rate * slot_duration bits iff rate <= capacity(g), nothing
// otherwise, and retransmission continues until the payload is through.
// Returns ResourceExhausted once max_slots slots pass without completing.
absl::StatusOr<HopResult> TransmitBits(const Link& link,
                                       const ChannelParams& params,
                                       uint64_t payload_bits, Rng& rng,
                                       int64_t max_slots = kDefaultMaxSlotsPerHop);

}  // namespace seedrelay

#endif  // SEEDRELAY_CHANNEL_H_
