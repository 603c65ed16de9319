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


#include "seedrelay/config.h"

#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/strip.h"

namespace seedrelay {
namespace {

using Setter = std::function<absl::Status(absl::string_view, SimConfig&)>;

struct KeySpec {
  const char* section;
  const char* name;
  Setter set;
};

absl::StatusOr<double> ToDouble(absl::string_view key, absl::string_view value) {
  double v = 0.0;
  if (!absl::SimpleAtod(value, &v) || !std::isfinite(v)) {
    return absl::InvalidArgumentError(
        absl::StrCat(key, ": expected a finite number, got '", value, "'"));
  }
  return v;
}

absl::StatusOr<int64_t> ToInt(absl::string_view key, absl::string_view value,
                              int64_t lo, int64_t hi) {
  int64_t v = 0;
  if (!absl::SimpleAtoi(value, &v)) {
    return absl::InvalidArgumentError(
        absl::StrCat(key, ": expected an integer, got '", value, "'"));
  }
  if (v < lo || v > hi) {
    return absl::InvalidArgumentError(
        absl::StrCat(key, " must be in [", lo, ", ", hi, "], got ", v));
  }
  return v;
}

absl::StatusOr<uint64_t> ToU64(absl::string_view key, absl::string_view value) {
  uint64_t v = 0;
  if (!absl::SimpleAtoi(value, &v)) {
    return absl::InvalidArgumentError(absl::StrCat(
        key, ": expected a nonnegative integer, got '", value, "'"));
  }
  return v;
}

absl::Status Positive(absl::string_view key, double v) {
  if (!(v > 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat(key, " must be positive, got ", v));
  }
  return absl::OkStatus();
}

constexpr int64_t kIntMax = std::numeric_limits<int>::max();

// Setters for fields that live on a nested struct with its own Validate.
template <typename T>
absl::Status Checked(T& field, T v, const std::function<absl::Status()>& validate) {
  const T old = field;
  field = v;
  absl::Status s = validate();
  if (!s.ok()) field = old;
  return s;
}

const std::vector<KeySpec>& Keys() {
  static const auto* keys = new std::vector<KeySpec>{
      {"network", "n",
       [](absl::string_view v, SimConfig& c) -> absl::Status {
         auto x = ToInt("n", v, 1, kIntMax);
         if (!x.ok()) return x.status();
         c.n_devices = static_cast<int>(*x);
         return absl::OkStatus();
       }},
      {"network", "m",
       [](absl::string_view v, SimConfig& c) -> absl::Status {
         auto x = ToInt("m", v, 1, kIntMax);
         if (!x.ok()) return x.status();
         c.max_hops = static_cast<int>(*x);
         return absl::OkStatus();
       }},
      {"network", "plane_side",
       [](absl::string_view v, SimConfig& c) -> absl::Status {
         auto x = ToDouble("plane_side", v);
         if (!x.ok()) return x.status();
         if (absl::Status s = Positive("plane_side", *x); !s.ok()) return s;
         c.plane_side = *x;
         return absl::OkStatus();
       }},
      {"channel", "alpha",
       [](absl::string_view v, SimConfig& c) -> absl::Status {
         auto x = ToDouble("alpha", v);
         if (!x.ok()) return x.status();
         return Checked(c.channel.path_loss_exponent, *x,
                        [&] { return c.channel.Validate(); });
       }},
      {"channel", "bandwidth_hz",
       [](absl::string_view v, SimConfig& c) -> absl::Status {
         auto x = ToDouble("bandwidth_hz", v);
         if (!x.ok()) return x.status();
         return Checked(c.channel.bandwidth_hz, *x,
                        [&] { return c.channel.Validate(); });
       }},
      {"channel", "tx_power_w",
       [](absl::string_view v, SimConfig& c) -> absl::Status {
         auto x = ToDouble("tx_power_w", v);
         if (!x.ok()) return x.status();
         return Checked(c.channel.tx_power_w, *x,
                        [&] { return c.channel.Validate(); });
       }},
      {"channel", "noise_psd_dbm_hz",
       [](absl::string_view v, SimConfig& c) -> absl::Status {
         auto x = ToDouble("noise_psd_dbm_hz", v);
         if (!x.ok()) return x.status();
         return Checked(c.channel.noise_psd, DbmPerHzToWattsPerHz(*x),
                        [&] { return c.channel.Validate(); });
       }},
      {"channel", "slot_duration_s",
       [](absl::string_view v, SimConfig& c) -> absl::Status {
         auto x = ToDouble("slot_duration_s", v);
         if (!x.ok()) return x.status();
         return Checked(c.channel.slot_duration_s, *x,
                        [&] { return c.channel.Validate(); });
       }},
      {"channel", "tx_rate_fraction",
       [](absl::string_view v, SimConfig& c) -> absl::Status {
         auto x = ToDouble("tx_rate_fraction", v);
         if (!x.ok()) return x.status();
         return Checked(c.channel.tx_rate_fraction, *x,
                        [&] { return c.channel.Validate(); });
       }},
      {"protocol", "rho",
       [](absl::string_view v, SimConfig& c) -> absl::Status {
         auto x = ToDouble("rho", v);
         if (!x.ok()) return x.status();
         auto rho = CompressionRate::Create(*x);
         if (!rho.ok()) return rho.status();
         c.protocol.rho = *rho;
         return absl::OkStatus();
       }},
      {"protocol", "l",
       [](absl::string_view v, SimConfig& c) -> absl::Status {
         auto x = ToInt("l", v, 0, kNumLabels);
         if (!x.ok()) return x.status();
         c.protocol.l = static_cast<int>(*x);
         return absl::OkStatus();
       }},
      {"protocol", "b",
       [](absl::string_view v, SimConfig& c) -> absl::Status {
         auto x = ToInt("b", v, 1, kMaxPayloadSamples / kNumLabels);
         if (!x.ok()) return x.status();
         c.protocol.b = static_cast<int>(*x);
         return absl::OkStatus();
       }},
      {"protocol", "tau",
       [](absl::string_view v, SimConfig& c) -> absl::Status {
         if (absl::AsciiStrToLower(v) == "inf") {
           c.tau = kUnboundedDeadline;
           return absl::OkStatus();
         }
         auto x = ToInt("tau", v, 1, kUnboundedDeadline);
         if (!x.ok()) return x.status();
         c.tau = *x;
         return absl::OkStatus();
       }},
      {"data", "targets",
       [](absl::string_view v, SimConfig& c) -> absl::Status {
         auto x = ToInt("targets", v, 1, kNumLabels);
         if (!x.ok()) return x.status();
         c.partition.num_targets = static_cast<int>(*x);
         return absl::OkStatus();
       }},
      {"data", "target_count",
       [](absl::string_view v, SimConfig& c) -> absl::Status {
         auto x = ToInt("target_count", v, 0, kIntMax);
         if (!x.ok()) return x.status();
         c.partition.target_count = static_cast<int>(*x);
         return absl::OkStatus();
       }},
      {"data", "full_count",
       [](absl::string_view v, SimConfig& c) -> absl::Status {
         auto x = ToInt("full_count", v, 0, kIntMax);
         if (!x.ok()) return x.status();
         c.partition.full_count = static_cast<int>(*x);
         return absl::OkStatus();
       }},
      {"data", "source",
       [](absl::string_view v, SimConfig& c) -> absl::Status {
         const std::string s = absl::AsciiStrToLower(v);
         if (s == "synthetic") {
           c.data.kind = DataSource::Kind::kSynthetic;
         } else if (s == "mnist" || s == "idx") {
           c.data.kind = DataSource::Kind::kIdx;
         } else {
           return absl::InvalidArgumentError(absl::StrCat(
               "source must be 'synthetic' or 'mnist', got '", v, "'"));
         }
         return absl::OkStatus();
       }},
      {"data", "mnist_dir",
       [](absl::string_view v, SimConfig& c) -> absl::Status {
         if (v.empty()) return absl::InvalidArgumentError("mnist_dir is empty");
         std::string dir(v);
         if (dir.back() != '/') dir += '/';
         c.data.kind = DataSource::Kind::kIdx;
         c.data.images_path = dir + "train-images-idx3-ubyte";
         c.data.labels_path = dir + "train-labels-idx1-ubyte";
         return absl::OkStatus();
       }},
      {"data", "synthetic_per_label",
       [](absl::string_view v, SimConfig& c) -> absl::Status {
         auto x = ToInt("synthetic_per_label", v, 0, kIntMax);
         if (!x.ok()) return x.status();
         c.data.synthetic_per_label = static_cast<int>(*x);
         return absl::OkStatus();
       }},
      {"data", "data_seed",
       [](absl::string_view v, SimConfig& c) -> absl::Status {
         auto x = ToU64("data_seed", v);
         if (!x.ok()) return x.status();
         c.data.data_seed = *x;
         return absl::OkStatus();
       }},
      {"run", "seed",
       [](absl::string_view v, SimConfig& c) -> absl::Status {
         auto x = ToU64("seed", v);
         if (!x.ok()) return x.status();
         c.seed = *x;
         return absl::OkStatus();
       }},
      {"run", "max_slots_per_hop",
       [](absl::string_view v, SimConfig& c) -> absl::Status {
         auto x = ToInt("max_slots_per_hop", v, 1,
                        std::numeric_limits<int64_t>::max());
         if (!x.ok()) return x.status();
         c.max_slots_per_hop = *x;
         return absl::OkStatus();
       }},
      {"run", "similarity",
       [](absl::string_view v, SimConfig& c) -> absl::Status {
         bool b = false;
         if (!absl::SimpleAtob(v, &b)) {
           return absl::InvalidArgumentError(
               absl::StrCat("similarity: expected true or false, got '", v, "'"));
         }
         c.compute_similarity = b;
         return absl::OkStatus();
       }},
  };
  return *keys;
}

const KeySpec* Find(absl::string_view key) {
  for (const KeySpec& k : Keys()) {
    if (key == k.name) return &k;
  }
  return nullptr;
}

bool KnownSection(absl::string_view s) {
  for (const KeySpec& k : Keys()) {
    if (s == k.section) return true;
  }
  return false;
}

absl::string_view Unquote(absl::string_view v) {
  if (v.size() >= 2 && (v.front() == '"' || v.front() == '\'') &&
      v.back() == v.front()) {
    return v.substr(1, v.size() - 2);
  }
  return v;
}

// Drops a trailing comment that is not inside quotes.
absl::string_view StripComment(absl::string_view line) {
  char quote = 0;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quote != 0) {
      if (ch == quote) quote = 0;
    } else if (ch == '"' || ch == '\'') {
      quote = ch;
    } else if (ch == '#') {
      return line.substr(0, i);
    }
  }
  return line;
}

absl::Status SetInSection(absl::string_view section, absl::string_view key,
                          absl::string_view value, SimConfig& config) {
  const KeySpec* entry = Find(key);
  if (entry == nullptr) {
    return absl::InvalidArgumentError(absl::StrCat("unknown key '", key, "'"));
  }
  if (!section.empty() && section != entry->section) {
    return absl::InvalidArgumentError(absl::StrCat(
        "key '", key, "' belongs in [", entry->section, "], not [", section, "]"));
  }
  return entry->set(Unquote(value), config);
}

}  // namespace

absl::Status ApplyConfigKey(absl::string_view key, absl::string_view value,
                            SimConfig& config) {
  return SetInSection("", absl::StripAsciiWhitespace(key),
                      absl::StripAsciiWhitespace(value), config);
}

absl::StatusOr<SimConfig> ParseConfig(absl::string_view text,
                                      absl::string_view source_name,
                                      SimConfig base) {
  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == absl::string_view::npos) end = text.size();
    absl::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    auto fail = [&](absl::string_view msg) {
      return absl::InvalidArgumentError(
          absl::StrCat(source_name, ":", line_no, ": ", msg));
    };

    line = absl::StripAsciiWhitespace(StripComment(line));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') return fail("unterminated section header");
      absl::string_view name =
          absl::StripAsciiWhitespace(line.substr(1, line.size() - 2));
      if (!KnownSection(name)) {
        return fail(absl::StrCat("unknown section [", name, "]"));
      }
      section = std::string(name);
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == absl::string_view::npos) return fail("expected key = value");
    const absl::string_view key = absl::StripAsciiWhitespace(line.substr(0, eq));
    const absl::string_view value = absl::StripAsciiWhitespace(line.substr(eq + 1));
    if (key.empty()) return fail("missing key before '='");
    if (absl::Status s = SetInSection(section, key, value, base); !s.ok()) {
      return fail(s.message());
    }
  }
  return base;
}

absl::StatusOr<SimConfig> LoadConfigFile(const std::string& path, SimConfig base) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open config ", path));
  std::ostringstream buf;
  buf << in.rdbuf();
  return ParseConfig(buf.str(), path, std::move(base));
}

absl::Status ApplyOverride(absl::string_view assignment, SimConfig& config) {
  const std::size_t eq = assignment.find('=');
  if (eq == absl::string_view::npos) {
    return absl::InvalidArgumentError(
        absl::StrCat("override '", assignment, "' is not key=value"));
  }
  absl::string_view key = absl::StripAsciiWhitespace(assignment.substr(0, eq));
  const absl::string_view value =
      absl::StripAsciiWhitespace(assignment.substr(eq + 1));
  absl::string_view section;
  if (const std::size_t dot = key.find('.'); dot != absl::string_view::npos) {
    section = key.substr(0, dot);
    key = key.substr(dot + 1);
    if (!KnownSection(section)) {
      return absl::InvalidArgumentError(
          absl::StrCat("override: unknown section '", section, "'"));
    }
  }
  if (absl::Status s = SetInSection(section, key, value, config); !s.ok()) {
    return absl::InvalidArgumentError(absl::StrCat("override: ", s.message()));
  }
  return absl::OkStatus();
}

std::vector<std::string> ConfigKeys() {
  std::vector<std::string> out;
  for (const KeySpec& k : Keys()) out.push_back(absl::StrCat(k.section, ".", k.name));
  return out;
}

}  // namespace seedrelay
