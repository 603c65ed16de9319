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

#include "seedrelay/channel.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"
#include "seedrelay/topology.h"

namespace seedrelay {

absl::Status ChannelParams::Validate() const {
  auto positive = [](double v, const char* name) -> absl::Status {
    if (!(v > 0.0) || !std::isfinite(v)) {
      return absl::InvalidArgumentError(
          absl::StrCat("channel parameter ", name, " must be positive, got ", v));
    }
    return absl::OkStatus();
  };
  for (auto s : {positive(bandwidth_hz, "bandwidth_hz"),
                 positive(noise_psd, "noise_psd"),
                 positive(path_loss_exponent, "path_loss_exponent"),
                 positive(tx_power_w, "tx_power_w"),
                 positive(slot_duration_s, "slot_duration_s"),
                 positive(tx_rate_fraction, "tx_rate_fraction")}) {
    if (!s.ok()) return s;
  }
  if (tx_rate_fraction > 1.0) {
    return absl::InvalidArgumentError(absl::StrCat(
        "channel parameter tx_rate_fraction must be <= 1, got ",
        tx_rate_fraction));
  }
  return absl::OkStatus();
}

double DbmPerHzToWattsPerHz(double dbm_per_hz) {
  return std::pow(10.0, dbm_per_hz / 10.0) * 1e-3;
}

double DbmToWatts(double dbm) { return std::pow(10.0, dbm / 10.0) * 1e-3; }

double PerRouteBandwidth(const ChannelParams& params, int num_routes) {
  return params.bandwidth_hz / static_cast<double>(std::max(num_routes, 1));
}

double InstantaneousCapacity(const Link& link, const ChannelParams& params,
                             double fading) {
  const double received =
      fading * params.tx_power_w *
      std::pow(link.distance_m, -params.path_loss_exponent);
  const double snr = received / (params.noise_psd * link.bandwidth_hz);
  return link.bandwidth_hz * std::log2(1.0 + snr);
}

Link MakeLink(double distance_m, double per_route_bandwidth_hz,
              const ChannelParams& params) {
  Link link;
  link.distance_m = std::max(distance_m, kMinHopDistanceMeters);
  link.bandwidth_hz = per_route_bandwidth_hz;
  link.rate_bps =
      params.tx_rate_fraction * InstantaneousCapacity(link, params, 1.0);
  return link;
}

int64_t HopResult::CompletionSlot(uint64_t cumulative_bits) const {
  if (cumulative_bits == 0 || success_slots.empty()) return 0;
  const double needed =
      std::ceil(static_cast<double>(cumulative_bits) / bits_per_success);
  const auto k = static_cast<std::size_t>(needed);
  return success_slots[std::min(k, success_slots.size()) - 1];
}

absl::StatusOr<HopResult> TransmitBits(const Link& link,
                                       const ChannelParams& params,
                                       uint64_t payload_bits, Rng& rng,
                                       int64_t max_slots) {
  HopResult result;
  result.bits_per_success = link.rate_bps * params.slot_duration_s;
  if (payload_bits == 0) return result;
  if (!(result.bits_per_success > 0.0)) {
    return absl::FailedPreconditionError("TransmitBits: hop rate is zero");
  }
  const auto successes_needed = static_cast<int64_t>(
      std::ceil(static_cast<double>(payload_bits) / result.bits_per_success));
  double remaining = static_cast<double>(payload_bits);
  while (static_cast<int64_t>(result.success_slots.size()) < successes_needed) {
    if (result.slots_used >= max_slots) {
      return absl::ResourceExhaustedError(absl::StrCat(
          "TransmitBits: slot cap ", max_slots, " reached with ", remaining,
          " bits outstanding (rate ", link.rate_bps, " bps over ",
          link.distance_m, " m)"));
    }
    ++result.slots_used;
    const double g = rng.Exponential();
    if (link.rate_bps <= InstantaneousCapacity(link, params, g)) {
      const double sent = std::min(result.bits_per_success, remaining);
      remaining -= sent;
      result.bits_delivered_per_slot.push_back(sent);
      result.success_slots.push_back(result.slots_used);
    } else {
      result.bits_delivered_per_slot.push_back(0.0);
    }
  }
  return result;
}

}  // namespace seedrelay
