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

#ifndef SEEDRELAY_DATASET_H_
#define SEEDRELAY_DATASET_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "seedrelay/labels.h"
#include "seedrelay/random.h"

namespace seedrelay {

inline constexpr int kImageRows = 28;
inline constexpr int kImageCols = 28;
inline constexpr int kImagePixels = kImageRows * kImageCols;

struct Image {
  std::array<uint8_t, kImagePixels> pixels{};

  uint8_t at(int row, int col) const {
    return pixels[static_cast<std::size_t>(row * kImageCols + col)];
  }
  uint8_t& at(int row, int col) {
    return pixels[static_cast<std::size_t>(row * kImageCols + col)];
  }
  int NonZeroCount() const;
  friend bool operator==(const Image&, const Image&) = default;
};

struct LabeledImage {
  Image image;
  int label = 0;
  friend bool operator==(const LabeledImage&, const LabeledImage&) = default;
};

using ImagePool = std::vector<LabeledImage>;

// IDX magic numbers (big-endian on disk).
inline constexpr uint32_t kIdxImageMagic = 0x00000803;
inline constexpr uint32_t kIdxLabelMagic = 0x00000801;

// Reads an IDX image/label file pair. Error codes are distinct per failure:
// InvalidArgument for a bad magic or geometry, DataLoss for a truncated file,
// FailedPrecondition for an image/label count mismatch, NotFound when a file
// cannot be opened.
absl::StatusOr<ImagePool> LoadIdx(const std::string& images_path,
                                  const std::string& labels_path);

// Writes the pair in the same format LoadIdx reads.
absl::Status WriteIdx(std::span<const LabeledImage> samples,
                      const std::string& images_path,
                      const std::string& labels_path);

// Procedural seven-segment digit glyphs with random offset, stroke dropout and
// intensity noise: per_label images for each of the ten labels, label-major.
ImagePool SynthDigits(Rng& rng, int per_label);

// The noiseless, centered glyph for a label.
Image DigitTemplate(int label);

struct PartitionConfig {
  int target_count = 4;
  int full_count = 200;
  int num_targets = 1;
};

// One device's non-IID local dataset. Samples are indices into a shared
// immutable pool.
class DeviceDataset {
 public:
  DeviceDataset(std::shared_ptr<const ImagePool> pool, LabelSet target_labels,
                std::array<std::vector<std::size_t>, kNumLabels> by_label);

  LabelSet target_labels() const { return target_labels_; }
  std::span<const std::size_t> indices(int label) const {
    return by_label_[static_cast<std::size_t>(label)];
  }
  int count(int label) const {
    return static_cast<int>(by_label_[static_cast<std::size_t>(label)].size());
  }
  int total() const;
  const LabeledImage& sample(std::size_t pool_index) const {
    return (*pool_)[pool_index];
  }

 private:
  std::shared_ptr<const ImagePool> pool_;
  LabelSet target_labels_;
  std::array<std::vector<std::size_t>, kNumLabels> by_label_;
};

// Each device gets num_targets target labels drawn uniformly without
// replacement, target_count samples in each target and full_count in every
// other label. Samples are drawn without replacement across all devices;
// a shortage is reported as ResourceExhausted naming the label.
absl::StatusOr<std::vector<DeviceDataset>> PartitionNonIid(
    std::shared_ptr<const ImagePool> pool, int n_devices,
    const PartitionConfig& config, Rng& rng);

}  // namespace seedrelay

#endif  // SEEDRELAY_DATASET_H_
