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

#include <numeric>

#include "gtest/gtest.h"
#include "seedrelay/random.h"
#include "test_support.h"

namespace seedrelay {
namespace {

Image RandomImage(Rng& rng) {
  Image img;
  const double density = rng.Uniform01();
  for (auto& p : img.pixels) {
    p = rng.Uniform01() < density ? static_cast<uint8_t>(1 + rng.UniformInt(255)) : 0;
  }
  return img;
}

Image ImageWithNonZeros(int nnz) {
  Image img;
  for (int i = 0; i < nnz; ++i) img.pixels[static_cast<std::size_t>(i * 5 % 784)] = 9;
  return img;
}

// Byte layout written out by hand from the record format.
std::vector<uint8_t> ReferenceRecord(const Image& img, int label) {
  std::vector<uint8_t> cols, vals;
  std::vector<uint16_t> row_ptr{0};
  for (int r = 0; r < 28; ++r) {
    for (int c = 0; c < 28; ++c) {
      if (img.pixels[static_cast<std::size_t>(r * 28 + c)] != 0) {
        cols.push_back(static_cast<uint8_t>(c));
        vals.push_back(img.pixels[static_cast<std::size_t>(r * 28 + c)]);
      }
    }
    row_ptr.push_back(static_cast<uint16_t>(cols.size()));
  }
  std::vector<uint8_t> out{static_cast<uint8_t>(label),
                           static_cast<uint8_t>(cols.size() & 0xff),
                           static_cast<uint8_t>(cols.size() >> 8)};
  for (uint16_t p : row_ptr) {
    out.push_back(static_cast<uint8_t>(p & 0xff));
    out.push_back(static_cast<uint8_t>(p >> 8));
  }
  out.insert(out.end(), cols.begin(), cols.end());
  out.insert(out.end(), vals.begin(), vals.end());
  return out;
}

TEST(CompressionRateTest, Bounds) {
  EXPECT_TRUE(CompressionRate::Create(0.0).ok());
  EXPECT_TRUE(CompressionRate::Create(0.999).ok());
  EXPECT_FALSE(CompressionRate::Create(1.0).ok());
  EXPECT_FALSE(CompressionRate::Create(-0.01).ok());
  EXPECT_EQ(CompressionRate::Create(0.15)->ZeroedPositions(), 117);
  EXPECT_EQ(CompressionRate::Create(0.02)->ZeroedPositions(), 15);
  EXPECT_EQ(CompressionRate::Create(0.0)->ZeroedPositions(), 0);
}

TEST(SparsifyTest, ZeroRateIsIdentity) {
  Rng rng(1);
  const Image img = RandomImage(rng);
  EXPECT_EQ(Sparsify(img, *CompressionRate::Create(0.0), rng), img);
}

TEST(SparsifyTest, ZeroesExactlyFloorRhoPositions) {
  Rng rng(2);
  Image full;
  full.pixels.fill(200);
  for (double rho : {0.02, 0.04, 0.15, 0.5}) {
    const auto rate = *CompressionRate::Create(rho);
    const Image out = Sparsify(full, rate, rng);
    EXPECT_EQ(kImagePixels - out.NonZeroCount(),
              static_cast<int>(std::floor(rho * 784)));
  }
}

TEST(SparsifyTest, OnlyTouchesChosenPositions) {
  Rng rng(3);
  const auto rate = *CompressionRate::Create(0.15);
  for (int t = 0; t < 200; ++t) {
    const Image img = RandomImage(rng);
    const Image out = Sparsify(img, rate, rng);
    int changed = 0;
    for (int i = 0; i < kImagePixels; ++i) {
      if (out.pixels[i] != img.pixels[i]) {
        ASSERT_EQ(out.pixels[i], 0);
        ++changed;
      }
    }
    EXPECT_LE(changed, 117);
    EXPECT_GE(out.NonZeroCount(), img.NonZeroCount() - 117);
    EXPECT_LE(out.NonZeroCount(), img.NonZeroCount());
  }
}

TEST(SparsifyTest, AllZeroStaysZero) {
  Rng rng(4);
  EXPECT_EQ(Sparsify(Image{}, *CompressionRate::Create(0.3), rng), Image{});
}

TEST(SparsifyTest, PositionsUniform) {
  Rng rng(5);
  Image full;
  full.pixels.fill(1);
  const auto rate = *CompressionRate::Create(0.15);
  std::vector<int64_t> hits(kImagePixels, 0);
  for (int t = 0; t < 3000; ++t) {
    const Image out = Sparsify(full, rate, rng);
    for (int i = 0; i < kImagePixels; ++i) hits[i] += out.pixels[i] == 0;
  }
  EXPECT_GT(testing::ChiSquareUniformPValue(hits), 0.001);
}

TEST(CsrTest, AllZeroImageIs61Bytes) {
  const SparseSample s = EncodeCsr(Image{}, 0);
  EXPECT_EQ(s.nnz(), 0u);
  EXPECT_EQ(SerializeRecord(s).size(), 61u);
}

TEST(CsrTest, SizeFormula) {
  EXPECT_EQ(SerializeRecord(EncodeCsr(ImageWithNonZeros(150), 1)).size(), 361u);
  Rng rng(6);
  for (int t = 0; t < 500; ++t) {
    const Image img = RandomImage(rng);
    const auto bytes = SerializeRecord(EncodeCsr(img, t % 10));
    EXPECT_EQ(bytes.size(), 61u + 2u * static_cast<std::size_t>(img.NonZeroCount()));
  }
}

TEST(CsrTest, ByteLayoutMatchesReference) {
  Rng rng(7);
  for (int t = 0; t < 200; ++t) {
    const Image img = RandomImage(rng);
    EXPECT_EQ(SerializeRecord(EncodeCsr(img, t % 10)), ReferenceRecord(img, t % 10));
  }
  Image small;
  small.at(0, 5) = 7;
  small.at(2, 1) = 9;
  small.at(2, 3) = 200;
  const auto b = SerializeRecord(EncodeCsr(small, 3));
  ASSERT_EQ(b.size(), 67u);
  EXPECT_EQ(b[0], 3);
  EXPECT_EQ(b[1], 3);
  EXPECT_EQ(b[2], 0);
  EXPECT_EQ(b[3], 0);   // row_ptr[0]
  EXPECT_EQ(b[5], 1);   // row_ptr[1]
  EXPECT_EQ(b[7], 1);   // row_ptr[2]
  EXPECT_EQ(b[9], 3);   // row_ptr[3]
  EXPECT_EQ(b[59], 3);  // row_ptr[28]
  EXPECT_EQ(b[61], 5);
  EXPECT_EQ(b[62], 1);
  EXPECT_EQ(b[63], 3);
  EXPECT_EQ(b[64], 7);
  EXPECT_EQ(b[65], 9);
  EXPECT_EQ(b[66], 200);
}

TEST(CsrTest, RoundTripRandomImages) {
  Rng rng(8);
  for (int t = 0; t < 1000; ++t) {
    const Image img = RandomImage(rng);
    auto back = DecodeCsr(SerializeRecord(EncodeCsr(img, t % 10)));
    ASSERT_TRUE(back.ok()) << back.status();
    EXPECT_EQ(back->image, img);
    EXPECT_EQ(back->label, t % 10);
  }
}

TEST(CsrTest, RoundTripSparsifiedDigits) {
  auto pool = testing::SharedTestPool();
  Rng rng(9);
  const auto rate = *CompressionRate::Create(0.15);
  for (std::size_t i = 0; i < pool->size(); i += 7) {
    const Image sparse = Sparsify((*pool)[i].image, rate, rng);
    auto back = DecodeCsr(SerializeRecord(EncodeCsr(sparse, (*pool)[i].label)));
    ASSERT_TRUE(back.ok());
    EXPECT_EQ(back->image, sparse);
  }
}

TEST(CsrTest, TruncatedBufferIsDataLoss) {
  auto bytes = SerializeRecord(EncodeCsr(ImageWithNonZeros(20), 2));
  std::vector<uint8_t> cut(bytes.begin(), bytes.begin() + 60);
  EXPECT_EQ(DecodeCsr(cut).status().code(), absl::StatusCode::kDataLoss);
  std::size_t used = 0;
  std::vector<uint8_t> part(bytes.begin(), bytes.end() - 1);
  EXPECT_EQ(DecodeRecordPrefix(part, &used).status().code(),
            absl::StatusCode::kDataLoss);
}

TEST(CsrTest, TamperedNnzIsStructural) {
  auto bytes = SerializeRecord(EncodeCsr(ImageWithNonZeros(20), 2));
  bytes[1] = 21;
  EXPECT_EQ(DecodeCsr(bytes).status().code(), absl::StatusCode::kFailedPrecondition);
}

TEST(CsrTest, RowPointerViolation) {
  auto bytes = SerializeRecord(EncodeCsr(ImageWithNonZeros(20), 2));
  bytes[3 + 2 * 6] = 0;  // row_ptr[6] drops below row_ptr[5]
  EXPECT_EQ(DecodeCsr(bytes).status().code(), absl::StatusCode::kFailedPrecondition);
}

TEST(CsrTest, ColumnOrderViolation) {
  Image img;
  img.at(4, 2) = 1;
  img.at(4, 9) = 1;
  auto bytes = SerializeRecord(EncodeCsr(img, 0));
  std::swap(bytes[61], bytes[62]);
  EXPECT_EQ(DecodeCsr(bytes).status().code(), absl::StatusCode::kFailedPrecondition);
}

TEST(CsrTest, ZeroValueByte) {
  auto bytes = SerializeRecord(EncodeCsr(ImageWithNonZeros(3), 0));
  bytes.back() = 0;
  EXPECT_EQ(DecodeCsr(bytes).status().code(), absl::StatusCode::kInvalidArgument);
}

TEST(PayloadTest, BitsFormula) {
  SparseSample a = EncodeCsr(ImageWithNonZeros(100), 1);
  SparseSample b = EncodeCsr(ImageWithNonZeros(120), 2);
  ASSERT_EQ(a.EncodedSize(), 261u);
  ASSERT_EQ(b.EncodedSize(), 301u);
  const std::vector<SparseSample> two{a, b};
  EXPECT_EQ(PayloadBits(two, LabelSet::FromMask(0b110)), 8u * (2 + 261 + 301) + 16);
  EXPECT_EQ(PayloadBits({}, LabelSet{}), 32u);
}

TEST(PayloadTest, BitsIncreaseWithEverySample) {
  std::vector<SparseSample> samples;
  uint64_t prev = PayloadBits(samples, LabelSet{});
  for (int nnz : {0, 5, 0, 200}) {
    samples.push_back(EncodeCsr(ImageWithNonZeros(nnz), 0));
    const uint64_t now = PayloadBits(samples, LabelSet::FromMask(1));
    EXPECT_GT(now, prev);
    prev = now;
  }
}

TEST(PayloadTest, WireRoundTrip) {
  Rng rng(10);
  Payload p;
  for (int i = 0; i < 12; ++i) {
    p.samples.push_back(EncodeCsr(RandomImage(rng), i % 3));
  }
  p.public_sdi = LabelSet::FromMask(0b1000000111);
  auto bytes = SerializePayload(p);
  ASSERT_TRUE(bytes.ok());
  ASSERT_EQ(bytes->size(), p.EncodedSize());
  EXPECT_EQ((*bytes)[0], 0xFA);
  EXPECT_EQ((*bytes)[1], 12);
  EXPECT_EQ((*bytes)[2], 0x07);
  EXPECT_EQ((*bytes)[3], 0x02);
  EXPECT_EQ(PayloadBits(p.samples, p.public_sdi), 8 * bytes->size());
  auto back = ParsePayload(*bytes);
  ASSERT_TRUE(back.ok()) << back.status();
  EXPECT_EQ(*back, p);
}

TEST(PayloadTest, ParseErrors) {
  Payload p;
  p.samples.push_back(EncodeCsr(ImageWithNonZeros(4), 5));
  p.public_sdi = LabelSet::FromMask(1 << 5);
  auto bytes = *SerializePayload(p);

  auto bad_magic = bytes;
  bad_magic[0] = 0xFB;
  EXPECT_EQ(ParsePayload(bad_magic).status().code(), absl::StatusCode::kInvalidArgument);

  auto missing_label = bytes;
  missing_label[2] = 0x01;
  EXPECT_FALSE(ParsePayload(missing_label).ok());

  auto high_bits = bytes;
  high_bits[3] = 0x80;
  EXPECT_FALSE(ParsePayload(high_bits).ok());

  auto trailing = bytes;
  trailing.push_back(0);
  EXPECT_FALSE(ParsePayload(trailing).ok());
  std::size_t used = 0;
  ASSERT_TRUE(ParsePayload(trailing, &used).ok());
  EXPECT_EQ(used, bytes.size());

  EXPECT_EQ(ParsePayload(std::vector<uint8_t>{0xFA, 1}).status().code(),
            absl::StatusCode::kDataLoss);
  std::vector<uint8_t> cut(bytes.begin(), bytes.end() - 2);
  EXPECT_EQ(ParsePayload(cut).status().code(), absl::StatusCode::kDataLoss);
}

TEST(PayloadTest, CountFieldLimit) {
  Payload p;
  p.public_sdi = LabelSet::FromMask(1);
  p.samples.assign(256, EncodeCsr(Image{}, 0));
  EXPECT_FALSE(SerializePayload(p).ok());
  p.samples.resize(255);
  EXPECT_TRUE(SerializePayload(p).ok());
}

TEST(CompressionRatioTest, DigitsEncodeBelowHalfDense) {
  auto pool = testing::SharedTestPool();
  Rng rng(11);
  const auto rate = *CompressionRate::Create(0.02);
  double total = 0.0;
  for (const auto& s : *pool) {
    total += static_cast<double>(EncodeCsr(Sparsify(s.image, rate, rng), s.label)
                                     .EncodedSize()) / kImagePixels;
  }
  EXPECT_LT(total / static_cast<double>(pool->size()), 0.5);
}

}  // namespace
}  // namespace seedrelay
