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

#include "seedrelay/protocol.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"

namespace seedrelay {

absl::Status ProtocolConfig::Validate() const {
  if (b < 1 || static_cast<std::size_t>(b) * kNumLabels > kMaxPayloadSamples) {
    return absl::InvalidArgumentError(
        absl::StrCat("b must be in 1..", kMaxPayloadSamples / kNumLabels,
                     ", got ", b));
  }
  if (l < 0) {
    return absl::InvalidArgumentError(absl::StrCat("l must be >= 0, got ", l));
  }
  return absl::OkStatus();
}

std::array<int, kNumLabels> LabelCounts(const Payload& payload) {
  std::array<int, kNumLabels> counts{};
  for (const auto& s : payload.samples) ++counts[s.label];
  return counts;
}

namespace {

// Appends up to `room` sparsified samples of `label` drawn without
// replacement from the device's local data. Returns the number appended.
int AppendLabel(const DeviceDataset& dataset, int label, int room,
                CompressionRate rho, Rng& rng, Payload& payload) {
  const auto local = dataset.indices(label);
  const auto take = static_cast<std::size_t>(
      std::clamp(room, 0, static_cast<int>(local.size())));
  for (std::size_t pick : rng.SampleWithoutReplacement(local.size(), take)) {
    const LabeledImage& src = dataset.sample(local[pick]);
    // One draw per sample, so the selection stream does not depend on rho.
    Rng positions(rng.NextU64());
    payload.samples.push_back(EncodeCsr(Sparsify(src.image, rho, positions), label));
  }
  return static_cast<int>(take);
}

}  // namespace

EmitResult DeviceEmit(const DeviceDataset& dataset, const Payload* incoming,
                      const ProtocolConfig& config, Rng& rng) {
  EmitResult out;
  const LabelSet targets = dataset.target_labels();
  if (incoming != nullptr && targets.IsSubsetOf(incoming->public_sdi)) {
    out.payload = *incoming;
    out.forwarded_only = true;
    return out;
  }
  if (incoming != nullptr) out.payload = *incoming;
  auto counts = LabelCounts(out.payload);

  for (int label : targets.ToVector()) {
    const int room = config.b - counts[static_cast<std::size_t>(label)];
    out.samples_added +=
        AppendLabel(dataset, label, room, config.rho, rng, out.payload);
  }
  const LabelSet advertised = out.payload.public_sdi | targets;

  const int have = (advertised - targets).Count();
  const int needed = std::max(0, config.l - have);
  std::vector<int> candidates;
  for (int label = 0; label < kNumLabels; ++label) {
    if (!advertised.Contains(label) && dataset.count(label) > 0) {
      candidates.push_back(label);
    }
  }
  const auto chosen = static_cast<std::size_t>(
      std::min<int>(needed, static_cast<int>(candidates.size())));
  out.dummy_shortfall = needed - static_cast<int>(chosen);
  for (std::size_t pick : rng.SampleWithoutReplacement(candidates.size(), chosen)) {
    out.dummy_labels.Insert(candidates[pick]);
  }
  for (int label : out.dummy_labels.ToVector()) {
    out.samples_added +=
        AppendLabel(dataset, label, config.b, config.rho, rng, out.payload);
  }
  out.payload.public_sdi = advertised | out.dummy_labels;
  return out;
}

int64_t ServerInbox::delivered_count() const {
  int64_t n = 0;
  for (const auto& r : per_route) n += static_cast<int64_t>(r.size());
  return n;
}

LabelSet ServerInbox::RouteLabels(int route) const {
  LabelSet s;
  for (const auto& d : per_route[static_cast<std::size_t>(route)]) {
    s.Insert(d.sample.label);
  }
  return s;
}

absl::StatusOr<ServerInbox> ServerCollect(
    const std::vector<std::vector<TimedSample>>& route_deliveries, int64_t tau) {
  if (tau < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("deadline tau must be >= 1 slot, got ", tau));
  }
  ServerInbox inbox;
  inbox.deadline = tau;
  inbox.per_route.resize(route_deliveries.size());
  for (std::size_t j = 0; j < route_deliveries.size(); ++j) {
    int64_t last = 0;
    for (const TimedSample& t : route_deliveries[j]) {
      if (t.arrival_slot < last) {
        return absl::InvalidArgumentError(absl::StrCat(
            "route ", j, ": arrival stamps decrease (", last, " then ",
            t.arrival_slot, ")"));
      }
      last = t.arrival_slot;
      if (t.arrival_slot > tau) {
        ++inbox.dropped;
        continue;
      }
      inbox.per_route[j].push_back(
          DeliveredSample{t.sample, t.arrival_slot, static_cast<int>(j)});
      inbox.received_sdi.Insert(t.sample.label);
    }
  }
  return inbox;
}

absl::StatusOr<OversampleResult> Oversample(const ServerInbox& inbox, int factor,
                                            const OversampleOptions& options,
                                            Rng& rng) {
  if (factor < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("oversample factor must be >= 1, got ", factor));
  }
  OversampleResult out;
  out.empty_input = inbox.delivered_count() == 0;
  for (const auto& route : inbox.per_route) {
    for (const DeliveredSample& d : route) {
      const LabeledImage base = ToDense(d.sample);
      for (int k = 0; k < factor; ++k) {
        if (!options.jitter) {
          out.samples.push_back(base);
          continue;
        }
        const int span = 2 * options.max_shift + 1;
        const int dr = static_cast<int>(rng.UniformInt(span)) - options.max_shift;
        const int dc = static_cast<int>(rng.UniformInt(span)) - options.max_shift;
        LabeledImage copy;
        copy.label = base.label;
        for (int r = 0; r < kImageRows; ++r) {
          for (int c = 0; c < kImageCols; ++c) {
            const int sr = r - dr;
            const int sc = c - dc;
            double v = 0.0;
            if (sr >= 0 && sr < kImageRows && sc >= 0 && sc < kImageCols) {
              v = base.image.at(sr, sc);
            }
            v += options.noise_sigma * rng.Normal();
            copy.image.at(r, c) =
                static_cast<uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)));
          }
        }
        out.samples.push_back(copy);
      }
    }
  }
  return out;
}

}  // namespace seedrelay
