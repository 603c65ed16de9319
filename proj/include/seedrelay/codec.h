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

// Seed-sample compression: randomized sparsification followed by a byte-exact
// compressed-sparse-row record.
//
// Record layout (little-endian):
//   label    u8
//   nnz      u16
//   row_ptr  29 x u16   row_ptr[0] = 0, row_ptr[28] = nnz, nondecreasing
//   col_idx  nnz x u8   strictly increasing within a row, < 28
//   values   nnz x u8   nonzero
// for a total of 61 + 2 * nnz bytes.
//
// Payload layout:
//   magic 0xFA u8, sample count u8, label bitmask u16 (bits 0..9), records.

#ifndef SEEDRELAY_CODEC_H_
#define SEEDRELAY_CODEC_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "seedrelay/dataset.h"
#include "seedrelay/labels.h"
#include "seedrelay/random.h"

namespace seedrelay {

inline constexpr std::size_t kRecordHeaderBytes = 1 + 2 + 2 * (kImageRows + 1);
inline constexpr uint8_t kPayloadMagic = 0xFA;
inline constexpr std::size_t kPayloadHeaderBytes = 4;
inline constexpr std::size_t kMaxPayloadSamples = 255;

// Fraction of pixel positions zeroed before encoding; 0 <= rho < 1.
class CompressionRate {
 public:
  static absl::StatusOr<CompressionRate> Create(double rho);
  CompressionRate() = default;

  double value() const { return rho_; }
  // floor(rho * 784)
  int ZeroedPositions() const;

 private:
  explicit CompressionRate(double rho) : rho_(rho) {}
  double rho_ = 0.0;
};

struct SparseSample {
  uint8_t label = 0;
  std::array<uint16_t, kImageRows + 1> row_ptr{};
  std::vector<uint8_t> col_idx;
  std::vector<uint8_t> values;

  std::size_t nnz() const { return values.size(); }
  std::size_t EncodedSize() const { return kRecordHeaderBytes + 2 * nnz(); }
  friend bool operator==(const SparseSample&, const SparseSample&) = default;
};

// Zeroes exactly rate.ZeroedPositions() distinct positions chosen uniformly
// over all 784 cells; every other pixel is untouched.
Image Sparsify(const Image& image, CompressionRate rate, Rng& rng);

SparseSample EncodeCsr(const Image& image, int label);
LabeledImage ToDense(const SparseSample& sample);

void AppendRecord(const SparseSample& sample, std::vector<uint8_t>& out);
std::vector<uint8_t> SerializeRecord(const SparseSample& sample);

// Decodes one record at the front of `bytes` and reports how many bytes it
// used. DataLoss when the buffer ends early; FailedPrecondition for row
// pointer or column index violations; InvalidArgument for a zero value byte
// or a label outside 0..9.
absl::StatusOr<SparseSample> DecodeRecordPrefix(std::span<const uint8_t> bytes,
                                                std::size_t* consumed);

// Standalone record: as above, and the declared nnz must account for the
// whole buffer (FailedPrecondition otherwise).
absl::StatusOr<LabeledImage> DecodeCsr(std::span<const uint8_t> bytes);

// Accumulated seed samples plus the public label indicator.
struct Payload {
  std::vector<SparseSample> samples;
  LabelSet public_sdi;

  std::size_t EncodedSize() const;
  friend bool operator==(const Payload&, const Payload&) = default;
};

// 8 * (2 + sum of record sizes) + 16: magic and count bytes, records, then the
// 16-bit label mask.
uint64_t PayloadBits(std::span<const SparseSample> samples, LabelSet sdi);

absl::StatusOr<std::vector<uint8_t>> SerializePayload(const Payload& payload);

// Parses one payload at the front of `bytes`. Sets *consumed when non-null;
// with a null `consumed` trailing bytes are an error.
absl::StatusOr<Payload> ParsePayload(std::span<const uint8_t> bytes,
                                     std::size_t* consumed = nullptr);

}  // namespace seedrelay

#endif  // SEEDRELAY_CODEC_H_
