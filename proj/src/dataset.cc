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

#include "seedrelay/dataset.h"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <utility>

#include "absl/strings/str_cat.h"

namespace seedrelay {

int Image::NonZeroCount() const {
  return static_cast<int>(
      std::count_if(pixels.begin(), pixels.end(), [](uint8_t p) { return p != 0; }));
}

namespace {

absl::StatusOr<std::vector<uint8_t>> ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  return std::vector<uint8_t>(std::istreambuf_iterator<char>(in),
                              std::istreambuf_iterator<char>());
}

uint32_t ReadBigEndian32(const std::vector<uint8_t>& buf, std::size_t offset) {
  return (uint32_t{buf[offset]} << 24) | (uint32_t{buf[offset + 1]} << 16) |
         (uint32_t{buf[offset + 2]} << 8) | uint32_t{buf[offset + 3]};
}

void AppendBigEndian32(std::vector<char>& out, uint32_t v) {
  out.push_back(static_cast<char>((v >> 24) & 0xff));
  out.push_back(static_cast<char>((v >> 16) & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
  out.push_back(static_cast<char>(v & 0xff));
}

// Seven-segment bits in order a b c d e f g.
constexpr std::array<uint8_t, kNumLabels> kSegments = {
    0b1111110,  // 0: a b c d e f
    0b0110000,  // 1: b c
    0b1101101,  // 2: a b d e g
    0b1111001,  // 3: a b c d g
    0b0110011,  // 4: b c f g
    0b1011011,  // 5: a c d f g
    0b1011111,  // 6: a c d e f g
    0b1110000,  // 7: a b c
    0b1111111,  // 8
    0b1111011,  // 9: a b c d f g
};

struct Glyph {
  int left = 8;
  int right = 19;
  int top = 4;
  int bottom = 23;
  int thickness = 2;
};

// Marks the stroke mask for `label` drawn inside `g`.
std::array<bool, kImagePixels> StrokeMask(int label, const Glyph& g) {
  std::array<bool, kImagePixels> mask{};
  auto fill = [&](int r0, int r1, int c0, int c1) {
    for (int r = std::max(r0, 0); r <= std::min(r1, kImageRows - 1); ++r) {
      for (int c = std::max(c0, 0); c <= std::min(c1, kImageCols - 1); ++c) {
        mask[static_cast<std::size_t>(r * kImageCols + c)] = true;
      }
    }
  };
  const int t = g.thickness;
  const int mid = (g.top + g.bottom) / 2;
  const uint8_t seg = kSegments[static_cast<std::size_t>(label)];
  if (seg & 0b1000000) fill(g.top, g.top + t - 1, g.left, g.right);             // a
  if (seg & 0b0100000) fill(g.top, mid, g.right - t + 1, g.right);              // b
  if (seg & 0b0010000) fill(mid, g.bottom, g.right - t + 1, g.right);           // c
  if (seg & 0b0001000) fill(g.bottom - t + 1, g.bottom, g.left, g.right);       // d
  if (seg & 0b0000100) fill(mid, g.bottom, g.left, g.left + t - 1);             // e
  if (seg & 0b0000010) fill(g.top, mid, g.left, g.left + t - 1);                // f
  if (seg & 0b0000001) fill(mid - t / 2, mid - t / 2 + t - 1, g.left, g.right); // g
  return mask;
}

}  // namespace

absl::StatusOr<ImagePool> LoadIdx(const std::string& images_path,
                                  const std::string& labels_path) {
  auto images = ReadFile(images_path);
  if (!images.ok()) return images.status();
  auto labels = ReadFile(labels_path);
  if (!labels.ok()) return labels.status();

  if (images->size() < 16) {
    return absl::DataLossError(
        absl::StrCat(images_path, ": truncated IDX header"));
  }
  if (ReadBigEndian32(*images, 0) != kIdxImageMagic) {
    return absl::InvalidArgumentError(
        absl::StrCat(images_path, ": bad IDX image magic"));
  }
  if (labels->size() < 8) {
    return absl::DataLossError(
        absl::StrCat(labels_path, ": truncated IDX header"));
  }
  if (ReadBigEndian32(*labels, 0) != kIdxLabelMagic) {
    return absl::InvalidArgumentError(
        absl::StrCat(labels_path, ": bad IDX label magic"));
  }
  const uint32_t n_images = ReadBigEndian32(*images, 4);
  const uint32_t rows = ReadBigEndian32(*images, 8);
  const uint32_t cols = ReadBigEndian32(*images, 12);
  const uint32_t n_labels = ReadBigEndian32(*labels, 4);
  if (rows != kImageRows || cols != kImageCols) {
    return absl::InvalidArgumentError(absl::StrCat(
        images_path, ": expected 28x28 images, got ", rows, "x", cols));
  }
  if (n_images != n_labels) {
    return absl::FailedPreconditionError(absl::StrCat(
        "IDX count mismatch: ", n_images, " images vs ", n_labels, " labels"));
  }
  if (images->size() < 16 + std::size_t{n_images} * kImagePixels) {
    return absl::DataLossError(absl::StrCat(images_path, ": truncated, expected ",
                                            n_images, " images"));
  }
  if (labels->size() < 8 + std::size_t{n_labels}) {
    return absl::DataLossError(absl::StrCat(labels_path, ": truncated, expected ",
                                            n_labels, " labels"));
  }

  ImagePool pool(n_images);
  for (std::size_t i = 0; i < n_images; ++i) {
    std::copy_n(images->begin() + static_cast<std::ptrdiff_t>(16 + i * kImagePixels),
                kImagePixels, pool[i].image.pixels.begin());
    const uint8_t label = (*labels)[8 + i];
    if (label >= kNumLabels) {
      return absl::InvalidArgumentError(
          absl::StrCat(labels_path, ": label ", int{label}, " at index ", i,
                       " outside 0..9"));
    }
    pool[i].label = label;
  }
  return pool;
}

absl::Status WriteIdx(std::span<const LabeledImage> samples,
                      const std::string& images_path,
                      const std::string& labels_path) {
  std::vector<char> img;
  std::vector<char> lab;
  AppendBigEndian32(img, kIdxImageMagic);
  AppendBigEndian32(img, static_cast<uint32_t>(samples.size()));
  AppendBigEndian32(img, kImageRows);
  AppendBigEndian32(img, kImageCols);
  AppendBigEndian32(lab, kIdxLabelMagic);
  AppendBigEndian32(lab, static_cast<uint32_t>(samples.size()));
  for (const LabeledImage& s : samples) {
    for (uint8_t p : s.image.pixels) img.push_back(static_cast<char>(p));
    lab.push_back(static_cast<char>(s.label));
  }
  for (auto& [path, bytes] : {std::pair{&images_path, &img}, std::pair{&labels_path, &lab}}) {
    std::ofstream out(*path, std::ios::binary);
    if (!out) return absl::UnavailableError(absl::StrCat("cannot write ", *path));
    out.write(bytes->data(), static_cast<std::streamsize>(bytes->size()));
    if (!out) return absl::UnavailableError(absl::StrCat("short write to ", *path));
  }
  return absl::OkStatus();
}

Image DigitTemplate(int label) {
  const auto mask = StrokeMask(label, Glyph{});
  Image img;
  for (std::size_t i = 0; i < mask.size(); ++i) img.pixels[i] = mask[i] ? 255 : 0;
  return img;
}

ImagePool SynthDigits(Rng& rng, int per_label) {
  ImagePool out;
  out.reserve(static_cast<std::size_t>(std::max(per_label, 0)) * kNumLabels);
  for (int label = 0; label < kNumLabels; ++label) {
    for (int k = 0; k < per_label; ++k) {
      Glyph g;
      const int dx = static_cast<int>(rng.UniformInt(5)) - 2;
      const int dy = static_cast<int>(rng.UniformInt(5)) - 2;
      g.left += dx;
      g.right += dx + static_cast<int>(rng.UniformInt(3)) - 1;
      g.top += dy;
      g.bottom += dy;
      g.thickness = 2 + static_cast<int>(rng.UniformInt(2));
      const auto mask = StrokeMask(label, g);

      LabeledImage s;
      s.label = label;
      for (int r = 0; r < kImageRows; ++r) {
        for (int c = 0; c < kImageCols; ++c) {
          const auto i = static_cast<std::size_t>(r * kImageCols + c);
          if (mask[i]) {
            // Stroke dropout keeps glyphs from being pixel-identical.
            if (rng.Uniform01() < 0.05) continue;
            s.image.pixels[i] = static_cast<uint8_t>(180 + rng.UniformInt(76));
            continue;
          }
          bool edge = false;
          for (auto [er, ec] : {std::pair{r - 1, c}, std::pair{r + 1, c},
                                std::pair{r, c - 1}, std::pair{r, c + 1}}) {
            if (er >= 0 && er < kImageRows && ec >= 0 && ec < kImageCols &&
                mask[static_cast<std::size_t>(er * kImageCols + ec)]) {
              edge = true;
            }
          }
          if (edge && rng.Uniform01() < 0.25) {
            s.image.pixels[i] = static_cast<uint8_t>(30 + rng.UniformInt(91));
          }
        }
      }
      out.push_back(s);
    }
  }
  return out;
}

DeviceDataset::DeviceDataset(
    std::shared_ptr<const ImagePool> pool, LabelSet target_labels,
    std::array<std::vector<std::size_t>, kNumLabels> by_label)
    : pool_(std::move(pool)),
      target_labels_(target_labels),
      by_label_(std::move(by_label)) {}

int DeviceDataset::total() const {
  int n = 0;
  for (const auto& v : by_label_) n += static_cast<int>(v.size());
  return n;
}

absl::StatusOr<std::vector<DeviceDataset>> PartitionNonIid(
    std::shared_ptr<const ImagePool> pool, int n_devices,
    const PartitionConfig& config, Rng& rng) {
  if (n_devices < 1) {
    return absl::InvalidArgumentError("PartitionNonIid: n_devices must be >= 1");
  }
  if (config.target_count < 0 || config.full_count < 0) {
    return absl::InvalidArgumentError(
        "PartitionNonIid: sample counts must be nonnegative");
  }
  if (config.num_targets < 1 || config.num_targets > kNumLabels) {
    return absl::InvalidArgumentError(absl::StrCat(
        "PartitionNonIid: num_targets must be in 1..10, got ", config.num_targets));
  }
  std::array<std::vector<std::size_t>, kNumLabels> available;
  for (std::size_t i = 0; i < pool->size(); ++i) {
    available[static_cast<std::size_t>((*pool)[i].label)].push_back(i);
  }
  for (auto& v : available) rng.Shuffle(v);
  std::array<std::size_t, kNumLabels> cursor{};

  std::vector<DeviceDataset> out;
  out.reserve(static_cast<std::size_t>(n_devices));
  for (int d = 0; d < n_devices; ++d) {
    LabelSet targets;
    for (std::size_t l : rng.SampleWithoutReplacement(
             kNumLabels, static_cast<std::size_t>(config.num_targets))) {
      targets.Insert(static_cast<int>(l));
    }
    std::array<std::vector<std::size_t>, kNumLabels> by_label;
    for (int label = 0; label < kNumLabels; ++label) {
      const auto li = static_cast<std::size_t>(label);
      const auto want = static_cast<std::size_t>(
          targets.Contains(label) ? config.target_count : config.full_count);
      if (cursor[li] + want > available[li].size()) {
        return absl::ResourceExhaustedError(absl::StrCat(
            "PartitionNonIid: pool shortage for label ", label, " at device ",
            d + 1, " (need ", cursor[li] + want, ", pool has ",
            available[li].size(), ")"));
      }
      by_label[li].assign(
          available[li].begin() + static_cast<std::ptrdiff_t>(cursor[li]),
          available[li].begin() + static_cast<std::ptrdiff_t>(cursor[li] + want));
      cursor[li] += want;
    }
    out.emplace_back(pool, targets, std::move(by_label));
  }
  return out;
}

}  // namespace seedrelay
