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

#include "seedrelay/codec.h"

#include <cmath>

#include "absl/strings/str_cat.h"

namespace seedrelay {

namespace {

void PutU16(std::vector<uint8_t>& out, uint16_t v) {
  out.push_back(static_cast<uint8_t>(v & 0xff));
  out.push_back(static_cast<uint8_t>(v >> 8));
}

uint16_t GetU16(std::span<const uint8_t> b, std::size_t at) {
  return static_cast<uint16_t>(b[at] | (b[at + 1] << 8));
}

}  // namespace

absl::StatusOr<CompressionRate> CompressionRate::Create(double rho) {
  if (!(rho >= 0.0 && rho < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("compression rate must lie in [0, 1), got ", rho));
  }
  return CompressionRate(rho);
}

int CompressionRate::ZeroedPositions() const {
  return static_cast<int>(std::floor(rho_ * kImagePixels));
}

Image Sparsify(const Image& image, CompressionRate rate, Rng& rng) {
  Image out = image;
  const auto k = static_cast<std::size_t>(rate.ZeroedPositions());
  if (k == 0) return out;
  for (std::size_t pos : rng.SampleWithoutReplacement(kImagePixels, k)) {
    out.pixels[pos] = 0;
  }
  return out;
}

SparseSample EncodeCsr(const Image& image, int label) {
  SparseSample s;
  s.label = static_cast<uint8_t>(label);
  for (int r = 0; r < kImageRows; ++r) {
    for (int c = 0; c < kImageCols; ++c) {
      const uint8_t v = image.at(r, c);
      if (v == 0) continue;
      s.col_idx.push_back(static_cast<uint8_t>(c));
      s.values.push_back(v);
    }
    s.row_ptr[static_cast<std::size_t>(r + 1)] =
        static_cast<uint16_t>(s.values.size());
  }
  return s;
}

LabeledImage ToDense(const SparseSample& sample) {
  LabeledImage out;
  out.label = sample.label;
  for (int r = 0; r < kImageRows; ++r) {
    for (uint16_t k = sample.row_ptr[static_cast<std::size_t>(r)];
         k < sample.row_ptr[static_cast<std::size_t>(r + 1)]; ++k) {
      out.image.at(r, sample.col_idx[k]) = sample.values[k];
    }
  }
  return out;
}

void AppendRecord(const SparseSample& sample, std::vector<uint8_t>& out) {
  out.push_back(sample.label);
  PutU16(out, static_cast<uint16_t>(sample.nnz()));
  for (uint16_t p : sample.row_ptr) PutU16(out, p);
  out.insert(out.end(), sample.col_idx.begin(), sample.col_idx.end());
  out.insert(out.end(), sample.values.begin(), sample.values.end());
}

std::vector<uint8_t> SerializeRecord(const SparseSample& sample) {
  std::vector<uint8_t> out;
  out.reserve(sample.EncodedSize());
  AppendRecord(sample, out);
  return out;
}

absl::StatusOr<SparseSample> DecodeRecordPrefix(std::span<const uint8_t> bytes,
                                                std::size_t* consumed) {
  if (bytes.size() < kRecordHeaderBytes) {
    return absl::DataLossError(absl::StrCat("CSR record truncated: ",
                                            bytes.size(), " bytes, header needs ",
                                            kRecordHeaderBytes));
  }
  SparseSample s;
  s.label = bytes[0];
  if (s.label >= kNumLabels) {
    return absl::InvalidArgumentError(
        absl::StrCat("CSR record label ", int{s.label}, " outside 0..9"));
  }
  const uint16_t nnz = GetU16(bytes, 1);
  for (std::size_t r = 0; r <= kImageRows; ++r) {
    s.row_ptr[r] = GetU16(bytes, 3 + 2 * r);
  }
  if (s.row_ptr[0] != 0 || s.row_ptr[kImageRows] != nnz) {
    return absl::FailedPreconditionError(absl::StrCat(
        "CSR row_ptr must start at 0 and end at nnz = ", nnz, ", got ",
        s.row_ptr[0], "..", s.row_ptr[kImageRows]));
  }
  for (std::size_t r = 0; r < kImageRows; ++r) {
    if (s.row_ptr[r] > s.row_ptr[r + 1]) {
      return absl::FailedPreconditionError(
          absl::StrCat("CSR row_ptr decreases at row ", r));
    }
  }
  const std::size_t size = kRecordHeaderBytes + 2 * std::size_t{nnz};
  if (bytes.size() < size) {
    return absl::DataLossError(absl::StrCat("CSR record truncated: nnz = ", nnz,
                                            " needs ", size, " bytes, have ",
                                            bytes.size()));
  }
  const auto cols = bytes.subspan(kRecordHeaderBytes, nnz);
  const auto vals = bytes.subspan(kRecordHeaderBytes + nnz, nnz);
  s.col_idx.assign(cols.begin(), cols.end());
  s.values.assign(vals.begin(), vals.end());
  for (std::size_t r = 0; r < kImageRows; ++r) {
    for (std::size_t k = s.row_ptr[r]; k < s.row_ptr[r + 1]; ++k) {
      if (s.col_idx[k] >= kImageCols ||
          (k > s.row_ptr[r] && s.col_idx[k] <= s.col_idx[k - 1])) {
        return absl::FailedPreconditionError(absl::StrCat(
            "CSR column indices in row ", r, " not strictly increasing in 0..27"));
      }
    }
  }
  for (std::size_t k = 0; k < nnz; ++k) {
    if (s.values[k] == 0) {
      return absl::InvalidArgumentError(
          absl::StrCat("CSR value ", k, " is zero"));
    }
  }
  if (consumed != nullptr) *consumed = size;
  return s;
}

absl::StatusOr<LabeledImage> DecodeCsr(std::span<const uint8_t> bytes) {
  if (bytes.size() >= kRecordHeaderBytes) {
    const std::size_t declared = kRecordHeaderBytes + 2 * std::size_t{GetU16(bytes, 1)};
    if (declared != bytes.size()) {
      return absl::FailedPreconditionError(absl::StrCat(
          "CSR nnz field implies ", declared, " bytes but buffer holds ",
          bytes.size()));
    }
  }
  std::size_t used = 0;
  auto s = DecodeRecordPrefix(bytes, &used);
  if (!s.ok()) return s.status();
  return ToDense(*s);
}

std::size_t Payload::EncodedSize() const {
  std::size_t n = kPayloadHeaderBytes;
  for (const auto& s : samples) n += s.EncodedSize();
  return n;
}

uint64_t PayloadBits(std::span<const SparseSample> samples, LabelSet /*sdi*/) {
  uint64_t bytes = 2;
  for (const auto& s : samples) bytes += s.EncodedSize();
  return 8 * bytes + 16;
}

absl::StatusOr<std::vector<uint8_t>> SerializePayload(const Payload& payload) {
  if (payload.samples.size() > kMaxPayloadSamples) {
    return absl::InvalidArgumentError(absl::StrCat(
        "payload holds ", payload.samples.size(), " samples, format allows ",
        kMaxPayloadSamples));
  }
  std::vector<uint8_t> out;
  out.reserve(payload.EncodedSize());
  out.push_back(kPayloadMagic);
  out.push_back(static_cast<uint8_t>(payload.samples.size()));
  PutU16(out, payload.public_sdi.mask());
  for (const auto& s : payload.samples) AppendRecord(s, out);
  return out;
}

absl::StatusOr<Payload> ParsePayload(std::span<const uint8_t> bytes,
                                     std::size_t* consumed) {
  if (bytes.size() < kPayloadHeaderBytes) {
    return absl::DataLossError("payload truncated inside its header");
  }
  if (bytes[0] != kPayloadMagic) {
    return absl::InvalidArgumentError(
        absl::StrCat("payload magic 0x", absl::Hex(bytes[0]), ", expected 0xfa"));
  }
  const std::size_t count = bytes[1];
  const uint16_t mask = GetU16(bytes, 2);
  if (mask >> kNumLabels) {
    return absl::InvalidArgumentError("payload label mask uses bits above 9");
  }
  Payload p;
  p.public_sdi = LabelSet::FromMask(mask);
  std::size_t at = kPayloadHeaderBytes;
  for (std::size_t i = 0; i < count; ++i) {
    std::size_t used = 0;
    auto s = DecodeRecordPrefix(bytes.subspan(at), &used);
    if (!s.ok()) {
      return absl::Status(s.status().code(),
                          absl::StrCat("payload sample ", i, ": ",
                                       s.status().message()));
    }
    if (!p.public_sdi.Contains(s->label)) {
      return absl::FailedPreconditionError(absl::StrCat(
          "payload sample ", i, " has label ", int{s->label},
          " missing from the label mask"));
    }
    p.samples.push_back(*std::move(s));
    at += used;
  }
  if (consumed != nullptr) {
    *consumed = at;
  } else if (at != bytes.size()) {
    return absl::FailedPreconditionError(absl::StrCat(
        "payload has ", bytes.size() - at, " trailing bytes"));
  }
  return p;
}

}  // namespace seedrelay
