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

#include "seedrelay/simulator.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "json.hpp"
#include "seedrelay/privacy.h"

namespace seedrelay {

absl::Status SimConfig::Validate() const {
  if (n_devices < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("n must be >= 1, got ", n_devices));
  }
  if (max_hops < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("m must be >= 1, got ", max_hops));
  }
  if (!(plane_side > 0.0)) {
    return absl::InvalidArgumentError("plane_side must be positive");
  }
  if (tau < 1) {
    return absl::InvalidArgumentError(absl::StrCat("tau must be >= 1, got ", tau));
  }
  if (max_slots_per_hop < 1) {
    return absl::InvalidArgumentError("max_slots_per_hop must be >= 1");
  }
  if (absl::Status s = channel.Validate(); !s.ok()) return s;
  if (absl::Status s = protocol.Validate(); !s.ok()) return s;
  if (partition.target_count < 0 || partition.full_count < 0) {
    return absl::InvalidArgumentError("sample counts must be nonnegative");
  }
  if (partition.num_targets < 1 || partition.num_targets > kNumLabels) {
    return absl::InvalidArgumentError("targets must be in 1..10");
  }
  if (topology.has_value()) {
    if (absl::Status s = ValidateTopology(*topology); !s.ok()) return s;
    if (topology->num_devices() != n_devices) {
      return absl::InvalidArgumentError(absl::StrCat(
          "topology file has ", topology->num_devices(), " devices, config n = ",
          n_devices));
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<std::shared_ptr<const ImagePool>> LoadPool(const SimConfig& config) {
  if (config.data.kind == DataSource::Kind::kIdx) {
    auto pool = LoadIdx(config.data.images_path, config.data.labels_path);
    if (!pool.ok()) return pool.status();
    return std::make_shared<const ImagePool>(*std::move(pool));
  }
  int per_label = config.data.synthetic_per_label;
  if (per_label <= 0) {
    per_label = config.n_devices *
                std::max(config.partition.full_count, config.partition.target_count);
    per_label = std::max(per_label, 1);
  }
  Rng rng = Rng::Derive(config.data.data_seed, "synthetic-pool");
  return std::make_shared<const ImagePool>(SynthDigits(rng, per_label));
}

int ReferenceDevice(const Topology& topology, Rng& rng) {
  const auto j = static_cast<std::size_t>(rng.UniformInt(topology.routes.size()));
  return topology.routes[j].devices.front();
}

absl::StatusOr<SimReport> Run(const SimConfig& config) {
  if (absl::Status s = config.Validate(); !s.ok()) return s;
  auto pool = LoadPool(config);
  if (!pool.ok()) return pool.status();
  return Run(config, *std::move(pool));
}

absl::StatusOr<SimReport> Run(const SimConfig& config,
                              std::shared_ptr<const ImagePool> pool) {
  if (absl::Status s = config.Validate(); !s.ok()) return s;

  Topology topology;
  if (config.topology.has_value()) {
    topology = *config.topology;
  } else {
    Rng placement = Rng::Derive(config.seed, "placement");
    auto t = GenerateTopology(config.n_devices, config.max_hops,
                              config.plane_side, placement);
    if (!t.ok()) return t.status();
    topology = *std::move(t);
  }

  Rng partition_rng = Rng::Derive(config.seed, "partition");
  auto datasets = PartitionNonIid(pool, config.n_devices, config.partition,
                                  partition_rng);
  if (!datasets.ok()) return datasets.status();

  SimReport report;
  report.seed = config.seed;
  report.n_devices = config.n_devices;
  report.max_hops = topology.max_hops;
  report.num_routes = static_cast<int>(topology.routes.size());
  report.tau = config.tau;
  report.per_route_bandwidth_hz =
      PerRouteBandwidth(config.channel, report.num_routes);

  std::vector<std::vector<TimedSample>> deliveries(topology.routes.size());
  std::vector<std::vector<LabelSet>> route_sdis(topology.routes.size());
  double ratio_sum = 0.0;
  int64_t ratio_count = 0;

  for (std::size_t j = 0; j < topology.routes.size(); ++j) {
    const Route& route = topology.routes[j];
    report.routes.push_back(route.devices);
    Payload carried;
    int64_t clock = 0;
    for (std::size_t m = 0; m < route.devices.size(); ++m) {
      const int id = route.devices[m];
      const DeviceDataset& local = (*datasets)[static_cast<std::size_t>(id - 1)];
      Rng emit_rng = Rng::Derive(config.seed, "emit", j, m);
      EmitResult emit =
          DeviceEmit(local, m == 0 ? nullptr : &carried, config.protocol, emit_rng);
      for (std::size_t k = carried.samples.size(); k < emit.payload.samples.size();
           ++k) {
        ratio_sum += static_cast<double>(emit.payload.samples[k].EncodedSize()) /
                     kImagePixels;
        ++ratio_count;
      }
      carried = std::move(emit.payload);
      route_sdis[j].push_back(carried.public_sdi);

      auto distance = HopDistance(route, m, topology);
      if (!distance.ok()) return distance.status();
      const Link link = MakeLink(*distance, report.per_route_bandwidth_hz,
                                 config.channel);
      const uint64_t bits = PayloadBits(carried.samples, carried.public_sdi);
      Rng fading = Rng::Derive(config.seed, "fading", j, m);
      auto hop = TransmitBits(link, config.channel, bits, fading,
                              config.max_slots_per_hop);
      if (!hop.ok()) {
        return absl::ResourceExhaustedError(absl::StrCat(
            "deadline exhaustion on route ", j, " hop ", m, ": ",
            hop.status().message()));
      }

      HopRecord rec;
      rec.route = static_cast<int>(j);
      rec.position = static_cast<int>(m);
      rec.device = id;
      rec.destination = m + 1 < route.devices.size() ? route.devices[m + 1] : 0;
      rec.distance_m = link.distance_m;
      rec.rate_bps = link.rate_bps;
      rec.forwarded_only = emit.forwarded_only;
      rec.public_sdi = carried.public_sdi;
      rec.dummy_labels = emit.dummy_labels;
      rec.dummy_shortfall = emit.dummy_shortfall;
      rec.payload_samples = static_cast<int>(carried.samples.size());
      rec.payload_bytes = carried.EncodedSize();
      rec.slots = hop->slots_used;
      rec.start_slot = clock;
      rec.end_slot = clock + hop->slots_used;
      if (emit.dummy_shortfall > 0) ++report.dummy_shortfall_devices;
      report.hops.push_back(rec);

      if (m + 1 == route.devices.size()) {
        // Header goes first, then records in payload order.
        uint64_t cumulative = 8 * kPayloadHeaderBytes;
        for (const SparseSample& s : carried.samples) {
          cumulative += 8 * s.EncodedSize();
          deliveries[j].push_back(
              TimedSample{s, clock + hop->CompletionSlot(cumulative)});
        }
        report.emitted_samples += static_cast<int64_t>(carried.samples.size());
        for (const SparseSample& s : carried.samples) {
          report.emitted_bytes += s.EncodedSize();
        }
      }
      clock += hop->slots_used;
    }
    report.route_latency.push_back(clock);
  }
  report.overall_latency = report.route_latency.empty()
                               ? 0
                               : *std::max_element(report.route_latency.begin(),
                                                   report.route_latency.end());
  report.mean_compression_ratio =
      ratio_count > 0 ? ratio_sum / static_cast<double>(ratio_count) : 0.0;

  auto inbox = ServerCollect(deliveries, config.tau);
  if (!inbox.ok()) return inbox.status();
  report.inbox = *std::move(inbox);
  report.received_sdi = report.inbox.received_sdi;
  report.delivered_samples = report.inbox.delivered_count();
  for (const auto& r : report.inbox.per_route) {
    for (const auto& d : r) report.delivered_bytes += d.sample.EncodedSize();
  }

  // Label privacy against the server, restricted to labels that arrived.
  double privacy_sum = 0.0;
  int privacy_count = 0;
  for (std::size_t j = 0; j < topology.routes.size(); ++j) {
    const LabelSet arrived = report.inbox.RouteLabels(static_cast<int>(j));
    const auto& members = topology.routes[j].devices;
    for (std::size_t m = 0; m < members.size(); ++m) {
      DeviceMetrics dm;
      dm.device = members[m];
      dm.route = static_cast<int>(j);
      dm.targets = (*datasets)[static_cast<std::size_t>(dm.device - 1)].target_labels();
      std::vector<LabelSet> unions;
      for (std::size_t k = m; k < members.size(); ++k) {
        unions.push_back(route_sdis[j][k] & arrived);
      }
      auto priv = LabelPrivacyMultihop(dm.targets & arrived, unions);
      if (priv.ok()) {
        dm.label_privacy = *priv;
        privacy_sum += *priv;
        ++privacy_count;
      } else {
        ++report.undefined_privacy_devices;
      }
      report.devices.push_back(dm);
    }
  }
  std::sort(report.devices.begin(), report.devices.end(),
            [](const DeviceMetrics& a, const DeviceMetrics& b) {
              return a.device < b.device;
            });
  report.mean_label_privacy =
      privacy_count > 0 ? privacy_sum / privacy_count : 0.0;

  Rng reference_rng = Rng::Derive(config.seed, "reference");
  report.reference_device = ReferenceDevice(topology, reference_rng);
  const DeviceMetrics& ref =
      report.devices[static_cast<std::size_t>(report.reference_device - 1)];
  report.reference_route = ref.route;
  report.reference_latency =
      report.route_latency[static_cast<std::size_t>(ref.route)];
  report.reference_privacy_defined = ref.label_privacy.has_value();
  report.reference_label_privacy = ref.label_privacy.value_or(0.0);

  if (config.compute_similarity && report.delivered_samples >= 2) {
    std::vector<Image> images;
    for (const auto& r : report.inbox.per_route) {
      for (const auto& d : r) images.push_back(ToDense(d.sample).image);
    }
    auto sim = Similarity(images);
    if (sim.ok()) {
      report.similarity_degenerate = sim->degenerate;
      if (!sim->degenerate) {
        report.similarity = sim->value;
        auto sp = SamplePrivacy(sim->value);
        if (sp.ok()) report.sample_privacy = *sp;
      }
    }
  }
  return report;
}

std::string SimReportToJson(const SimReport& r) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["seed"] = r.seed;
  j["n"] = r.n_devices;
  j["m"] = r.max_hops;
  j["num_routes"] = r.num_routes;
  j["tau_slots"] = r.tau == kUnboundedDeadline ? ordered_json("inf") : ordered_json(r.tau);
  j["per_route_bandwidth_hz"] = r.per_route_bandwidth_hz;
  j["routes"] = r.routes;
  ordered_json hops = ordered_json::array();
  for (const HopRecord& h : r.hops) {
    hops.push_back({{"route", h.route},
                    {"position", h.position},
                    {"device", h.device},
                    {"destination", h.destination},
                    {"distance_m", h.distance_m},
                    {"rate_bps", h.rate_bps},
                    {"forwarded_only", h.forwarded_only},
                    {"public_sdi", h.public_sdi.ToVector()},
                    {"dummy_labels", h.dummy_labels.ToVector()},
                    {"dummy_shortfall", h.dummy_shortfall},
                    {"payload_samples", h.payload_samples},
                    {"payload_bytes", h.payload_bytes},
                    {"latency_slots", h.slots},
                    {"start_slot", h.start_slot},
                    {"end_slot", h.end_slot}});
  }
  j["hops"] = hops;
  j["route_latency_slots"] = r.route_latency;
  j["overall_latency_slots"] = r.overall_latency;
  j["reference"] = {{"device", r.reference_device},
                    {"route", r.reference_route},
                    {"latency_slots", r.reference_latency},
                    {"label_privacy", r.reference_label_privacy},
                    {"label_privacy_defined", r.reference_privacy_defined}};
  j["emitted_samples"] = r.emitted_samples;
  j["delivered_samples"] = r.delivered_samples;
  j["dropped_samples"] = r.inbox.dropped;
  j["emitted_bytes"] = r.emitted_bytes;
  j["delivered_bytes"] = r.delivered_bytes;
  j["received_sdi"] = r.received_sdi.ToVector();
  ordered_json devices = ordered_json::array();
  for (const DeviceMetrics& d : r.devices) {
    devices.push_back(
        {{"device", d.device},
         {"route", d.route},
         {"targets", d.targets.ToVector()},
         {"label_privacy", d.label_privacy.has_value() ? ordered_json(*d.label_privacy)
                                                       : ordered_json(nullptr)}});
  }
  j["devices"] = devices;
  j["mean_label_privacy"] = r.mean_label_privacy;
  j["similarity"] = r.similarity.has_value() ? ordered_json(*r.similarity)
                                             : ordered_json(nullptr);
  j["sample_privacy"] = r.sample_privacy.has_value() ? ordered_json(*r.sample_privacy)
                                                     : ordered_json(nullptr);
  j["mean_compression_ratio"] = r.mean_compression_ratio;
  j["flags"] = {{"dummy_shortfall_devices", r.dummy_shortfall_devices},
                {"undefined_privacy_devices", r.undefined_privacy_devices},
                {"similarity_degenerate", r.similarity_degenerate}};
  return j.dump(2) + "\n";
}

absl::StatusOr<SweepAxis> ParseSweepAxis(const std::string& name) {
  if (name == "rho") return SweepAxis::kRho;
  if (name == "M" || name == "m") return SweepAxis::kMaxHops;
  if (name == "l") return SweepAxis::kL;
  if (name == "tau") return SweepAxis::kTau;
  if (name == "tx_power") return SweepAxis::kTxPower;
  return absl::InvalidArgumentError(absl::StrCat(
      "unknown sweep axis '", name, "' (expected rho, M, l, tau or tx_power)"));
}

std::string SweepAxisName(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kRho: return "rho";
    case SweepAxis::kMaxHops: return "M";
    case SweepAxis::kL: return "l";
    case SweepAxis::kTau: return "tau";
    case SweepAxis::kTxPower: return "tx_power";
  }
  return "?";
}

absl::Status ApplyAxis(SweepAxis axis, double value, SimConfig& config) {
  auto as_int = [&](const char* name) -> absl::StatusOr<int64_t> {
    if (std::isinf(value) && value > 0) return kUnboundedDeadline;
    if (value != std::floor(value)) {
      return absl::InvalidArgumentError(
          absl::StrCat("sweep axis ", name, " needs integer values, got ", value));
    }
    return static_cast<int64_t>(value);
  };
  switch (axis) {
    case SweepAxis::kRho: {
      auto rho = CompressionRate::Create(value);
      if (!rho.ok()) return rho.status();
      config.protocol.rho = *rho;
      break;
    }
    case SweepAxis::kMaxHops: {
      auto v = as_int("M");
      if (!v.ok()) return v.status();
      config.max_hops = static_cast<int>(*v);
      break;
    }
    case SweepAxis::kL: {
      auto v = as_int("l");
      if (!v.ok()) return v.status();
      config.protocol.l = static_cast<int>(*v);
      break;
    }
    case SweepAxis::kTau: {
      auto v = as_int("tau");
      if (!v.ok()) return v.status();
      config.tau = *v;
      break;
    }
    case SweepAxis::kTxPower:
      config.channel.tx_power_w = value;
      break;
  }
  return config.Validate();
}

uint64_t SweepSeed(uint64_t base_seed, int k) {
  return Mix64(base_seed ^ Mix64(static_cast<uint64_t>(k) + 0x5eedULL));
}

namespace {

MetricSummary Summarize(const std::vector<double>& xs) {
  MetricSummary s;
  s.count = static_cast<int>(xs.size());
  if (xs.empty()) return s;
  double sum = 0.0;
  for (double x : xs) sum += x;
  s.mean = sum / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return s;
}

}  // namespace

absl::StatusOr<SweepTable> Sweep(const SimConfig& config, SweepAxis axis,
                                 const std::vector<double>& values, int seeds,
                                 int jobs, std::shared_ptr<const ImagePool> pool) {
  if (values.empty()) return absl::InvalidArgumentError("sweep needs values");
  if (seeds < 1) return absl::InvalidArgumentError("sweep needs seeds >= 1");
  std::vector<SimConfig> points;
  for (double v : values) {
    SimConfig c = config;
    if (absl::Status s = ApplyAxis(axis, v, c); !s.ok()) return s;
    points.push_back(std::move(c));
  }
  if (pool == nullptr) {
    // Sweep axes never change n, so one pool serves every point.
    auto loaded = LoadPool(points.front());
    if (!loaded.ok()) return loaded.status();
    pool = *std::move(loaded);
  }

  const std::size_t total = points.size() * static_cast<std::size_t>(seeds);
  std::vector<absl::StatusOr<SimReport>> results(
      total, absl::UnknownError("not run"));
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < total; i = next++) {
      SimConfig c = points[i / static_cast<std::size_t>(seeds)];
      c.seed = SweepSeed(config.seed, static_cast<int>(i % static_cast<std::size_t>(seeds)));
      auto r = Run(c, pool);
      if (r.ok()) r->inbox = ServerInbox{};  // drop sample payloads early
      results[i] = std::move(r);
    }
  };
  const int threads = std::clamp(jobs, 1, 64);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool_threads;
    for (int t = 0; t < threads; ++t) pool_threads.emplace_back(worker);
    for (auto& t : pool_threads) t.join();
  }

  SweepTable table;
  table.axis = axis;
  for (std::size_t p = 0; p < points.size(); ++p) {
    std::vector<double> overall, ref_lat, ref_priv, mean_priv, delivered, bytes,
        fraction, sim, sp, ratio;
    for (int k = 0; k < seeds; ++k) {
      const auto& r = results[p * static_cast<std::size_t>(seeds) + static_cast<std::size_t>(k)];
      if (!r.ok()) return r.status();
      overall.push_back(static_cast<double>(r->overall_latency));
      ref_lat.push_back(static_cast<double>(r->reference_latency));
      ref_priv.push_back(r->reference_label_privacy);
      mean_priv.push_back(r->mean_label_privacy);
      delivered.push_back(static_cast<double>(r->delivered_samples));
      bytes.push_back(static_cast<double>(r->delivered_bytes));
      fraction.push_back(r->emitted_samples > 0
                             ? static_cast<double>(r->delivered_samples) /
                                   static_cast<double>(r->emitted_samples)
                             : 0.0);
      if (r->similarity) sim.push_back(*r->similarity);
      if (r->sample_privacy) sp.push_back(*r->sample_privacy);
      ratio.push_back(r->mean_compression_ratio);
    }
    SweepRow row;
    row.value = values[p];
    row.config = points[p];
    row.seeds = seeds;
    row.overall_latency = Summarize(overall);
    row.reference_latency = Summarize(ref_lat);
    row.reference_label_privacy = Summarize(ref_priv);
    row.mean_label_privacy = Summarize(mean_priv);
    row.delivered_samples = Summarize(delivered);
    row.delivered_bytes = Summarize(bytes);
    row.delivered_fraction = Summarize(fraction);
    row.similarity = Summarize(sim);
    row.sample_privacy = Summarize(sp);
    row.compression_ratio = Summarize(ratio);
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::string SweepTableToCsv(const SweepTable& table) {
  std::string out =
      "axis,value,n,m,rho,l,b,tau,tx_power_w,seeds";
  const char* metrics[] = {"overall_latency_slots", "reference_latency_slots",
                           "reference_label_privacy", "mean_label_privacy",
                           "delivered_samples", "delivered_bytes",
                           "delivered_fraction", "similarity", "sample_privacy",
                           "compression_ratio"};
  for (const char* m : metrics) absl::StrAppend(&out, ",", m, "_mean,", m, "_std");
  out += '\n';
  auto num = [](double v) { return absl::StrFormat("%.10g", v); };
  for (const SweepRow& row : table.rows) {
    const SimConfig& c = row.config;
    absl::StrAppend(&out, SweepAxisName(table.axis), ",", num(row.value), ",",
                    c.n_devices, ",", c.max_hops, ",", num(c.protocol.rho.value()),
                    ",", c.protocol.l, ",", c.protocol.b, ",",
                    c.tau == kUnboundedDeadline ? std::string("inf") : absl::StrCat(c.tau),
                    ",", num(c.channel.tx_power_w), ",", row.seeds);
    for (const MetricSummary* s :
         {&row.overall_latency, &row.reference_latency, &row.reference_label_privacy,
          &row.mean_label_privacy, &row.delivered_samples, &row.delivered_bytes,
          &row.delivered_fraction, &row.similarity, &row.sample_privacy,
          &row.compression_ratio}) {
      absl::StrAppend(&out, ",", num(s->mean), ",", num(s->stddev));
    }
    out += '\n';
  }
  return out;
}

}  // namespace seedrelay
