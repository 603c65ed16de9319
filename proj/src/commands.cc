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


#include "seedrelay/commands.h"

#include <cmath>
#include <fstream>
#include <memory>
#include <limits>
#include <sstream>
#include <variant>

#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "seedrelay/config.h"
#include "seedrelay/privacy.h"
#include "seedrelay/seed_export.h"

namespace seedrelay {
namespace {

struct Failure {
  int code;
  std::string message;
};

template <typename T>
using Result = std::variant<T, Failure>;

int Report(const Failure& f, std::ostream& err) {
  err << "error: " << f.message << "\n";
  return f.code;
}

absl::StatusOr<std::string> ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) return absl::DataLossError(absl::StrCat("read failed: ", path));
  return buf.str();
}

std::optional<Failure> WriteFile(const std::string& path, absl::string_view data) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) return Failure{kExitIo, absl::StrCat("cannot write ", path)};
  f.write(data.data(), static_cast<std::streamsize>(data.size()));
  f.close();
  if (!f) return Failure{kExitIo, absl::StrCat("write failed: ", path)};
  return std::nullopt;
}

// Output to --out when set, else to the stream.
std::optional<Failure> Emit(const GlobalOptions& options, absl::string_view data,
                            std::ostream& out) {
  if (options.out.empty()) {
    out << data;
    return std::nullopt;
  }
  return WriteFile(options.out, data);
}

Result<SimConfig> Resolve(const GlobalOptions& options) {
  SimConfig config;
  if (!options.config_path.empty()) {
    auto loaded = LoadConfigFile(options.config_path);
    if (!loaded.ok()) {
      const int code = absl::IsNotFound(loaded.status()) ? kExitIo : kExitConfig;
      return Failure{code, std::string(loaded.status().message())};
    }
    config = *std::move(loaded);
  }
  for (const std::string& o : options.overrides) {
    if (absl::Status s = ApplyOverride(o, config); !s.ok()) {
      return Failure{kExitConfig, std::string(s.message())};
    }
  }
  if (options.synthetic && !options.mnist_dir.empty()) {
    return Failure{kExitConfig, "--synthetic and --mnist-dir are exclusive"};
  }
  if (options.synthetic) config.data.kind = DataSource::Kind::kSynthetic;
  if (!options.mnist_dir.empty()) {
    if (absl::Status s = ApplyConfigKey("mnist_dir", options.mnist_dir, config);
        !s.ok()) {
      return Failure{kExitConfig, std::string(s.message())};
    }
  }
  if (options.seed.has_value()) config.seed = *options.seed;
  if (!options.topology_file.empty()) {
    auto text = ReadFile(options.topology_file);
    if (!text.ok()) return Failure{kExitIo, std::string(text.status().message())};
    auto topo = ParseTopology(*text);
    if (!topo.ok()) {
      return Failure{kExitConfig, absl::StrCat(options.topology_file, ": ",
                                               topo.status().message())};
    }
    config.n_devices = topo->num_devices();
    config.max_hops = topo->max_hops;
    config.topology = *std::move(topo);
  }
  if (config.data.kind == DataSource::Kind::kIdx &&
      (config.data.images_path.empty() || config.data.labels_path.empty())) {
    return Failure{kExitConfig, "source = mnist needs mnist_dir"};
  }
  if (options.jobs < 1) {
    return Failure{kExitConfig, absl::StrCat("--jobs must be >= 1, got ", options.jobs)};
  }
  if (absl::Status s = config.Validate(); !s.ok()) {
    return Failure{kExitConfig, std::string(s.message())};
  }
  return config;
}

Result<std::shared_ptr<const ImagePool>> Pool(const SimConfig& config) {
  auto pool = LoadPool(config);
  if (!pool.ok()) return Failure{kExitIo, std::string(pool.status().message())};
  return *std::move(pool);
}

Result<SimReport> Simulate(const GlobalOptions& options) {
  auto config = Resolve(options);
  if (auto* f = std::get_if<Failure>(&config)) return *f;
  auto pool = Pool(std::get<SimConfig>(config));
  if (auto* f = std::get_if<Failure>(&pool)) return *f;
  auto report = Run(std::get<SimConfig>(config),
                    std::get<std::shared_ptr<const ImagePool>>(pool));
  if (!report.ok()) return Failure{kExitRuntime, std::string(report.status().message())};
  return *std::move(report);
}

}  // namespace

absl::StatusOr<std::vector<double>> ParseValueList(absl::string_view text) {
  std::vector<double> out;
  for (absl::string_view part : absl::StrSplit(text, ',')) {
    part = absl::StripAsciiWhitespace(part);
    if (part.empty()) continue;
    if (absl::AsciiStrToLower(part) == "inf") {
      out.push_back(std::numeric_limits<double>::infinity());
      continue;
    }
    double v = 0.0;
    if (!absl::SimpleAtod(part, &v) || !std::isfinite(v)) {
      return absl::InvalidArgumentError(
          absl::StrCat("bad sweep value '", part, "'"));
    }
    out.push_back(v);
  }
  if (out.empty()) return absl::InvalidArgumentError("no sweep values given");
  return out;
}

int CmdRun(const GlobalOptions& options, std::ostream& out, std::ostream& err) {
  auto report = Simulate(options);
  if (auto* f = std::get_if<Failure>(&report)) return Report(*f, err);
  const SimReport& r = std::get<SimReport>(report);
  if (r.delivered_samples == 0) {
    err << "warning: no samples reached the server before the deadline\n";
  }
  if (auto f = Emit(options, SimReportToJson(r) + "\n", out)) return Report(*f, err);
  return kExitOk;
}

int CmdSweep(const GlobalOptions& options, const SweepRequest& request,
             std::ostream& out, std::ostream& err) {
  auto config = Resolve(options);
  if (auto* f = std::get_if<Failure>(&config)) return Report(*f, err);
  auto axis = ParseSweepAxis(request.axis);
  if (!axis.ok()) return Report({kExitConfig, std::string(axis.status().message())}, err);
  auto values = ParseValueList(request.values);
  if (!values.ok()) {
    return Report({kExitConfig, std::string(values.status().message())}, err);
  }
  if (request.seeds < 1) {
    return Report({kExitConfig, absl::StrCat("--seeds must be >= 1, got ",
                                             request.seeds)}, err);
  }
  const SimConfig& base = std::get<SimConfig>(config);
  for (double v : *values) {
    SimConfig probe = base;
    if (absl::Status s = ApplyAxis(*axis, v, probe); !s.ok()) {
      return Report({kExitConfig, std::string(s.message())}, err);
    }
  }
  auto pool = Pool(base);
  if (auto* f = std::get_if<Failure>(&pool)) return Report(*f, err);
  auto table = Sweep(base, *axis, *values, request.seeds, options.jobs,
                     std::get<std::shared_ptr<const ImagePool>>(pool));
  if (!table.ok()) {
    return Report({kExitRuntime, std::string(table.status().message())}, err);
  }
  if (auto f = Emit(options, SweepTableToCsv(*table), out)) return Report(*f, err);
  return kExitOk;
}

int CmdExportSeeds(const GlobalOptions& options, std::ostream& out,
                   std::ostream& err) {
  if (options.out.empty()) {
    return Report({kExitConfig, "export-seeds needs --out"}, err);
  }
  auto report = Simulate(options);
  if (auto* f = std::get_if<Failure>(&report)) return Report(*f, err);
  const SimReport& r = std::get<SimReport>(report);
  auto exported = BuildSeedExport(r);
  if (!exported.ok()) {
    return Report({kExitRuntime, std::string(exported.status().message())}, err);
  }
  if (exported->sample_count == 0) {
    err << "warning: inbox is empty; writing a header-only seed file\n";
  }
  const absl::string_view bytes(reinterpret_cast<const char*>(exported->bytes.data()),
                               exported->bytes.size());
  if (auto f = WriteFile(options.out, bytes)) return Report(*f, err);
  if (auto f = WriteFile(options.out + ".json", exported->sidecar_json)) {
    return Report(*f, err);
  }
  out << "wrote " << exported->sample_count << " samples ("
      << exported->bytes.size() << " bytes) to " << options.out << "\n";
  return kExitOk;
}

int CmdMds(const GlobalOptions& options, const std::string& input,
           std::ostream& out, std::ostream& err) {
  auto raw = ReadFile(input);
  if (!raw.ok()) return Report({kExitIo, std::string(raw.status().message())}, err);
  const std::vector<uint8_t> bytes(raw->begin(), raw->end());
  auto blocks = ReadSeedExport(bytes);
  if (!blocks.ok()) {
    return Report({kExitIo, absl::StrCat(input, ": ", blocks.status().message())},
                  err);
  }
  std::vector<Image> images;
  std::vector<int> labels;
  for (const Payload& p : *blocks) {
    for (const SparseSample& s : p.samples) {
      images.push_back(ToDense(s).image);
      labels.push_back(s.label);
    }
  }
  if (images.size() < 2) {
    return Report({kExitRuntime, absl::StrCat("mds needs at least 2 samples, ",
                                              input, " has ", images.size())},
                  err);
  }
  auto coords = ClassicalMds(PairwiseDistances(images), 2);
  if (!coords.ok()) {
    return Report({kExitRuntime, std::string(coords.status().message())}, err);
  }
  std::string csv = "id,x,y,label\n";
  for (std::size_t i = 0; i < coords->size(); ++i) {
    absl::StrAppendFormat(&csv, "%d,%.10g,%.10g,%d\n", i, (*coords)[i][0],
                          (*coords)[i][1], labels[i]);
  }
  if (auto f = Emit(options, csv, out)) return Report(*f, err);
  return kExitOk;
}

}  // namespace seedrelay
