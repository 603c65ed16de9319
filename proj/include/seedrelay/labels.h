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

#ifndef SEEDRELAY_LABELS_H_
#define SEEDRELAY_LABELS_H_

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace seedrelay {

inline constexpr int kNumLabels = 10;

// Label-presence bit vector over the ten digit classes. Used for the private
// indicator (true target labels), the dummy indicator, and the public
// indicator a payload advertises.
class LabelSet {
 public:
  constexpr LabelSet() = default;
  constexpr LabelSet(std::initializer_list<int> labels) {
    for (int l : labels) Insert(l);
  }

  // Bits 10..15 are masked off.
  static constexpr LabelSet FromMask(uint16_t mask) {
    LabelSet s;
    s.bits_ = mask & kFullMask;
    return s;
  }
  static constexpr LabelSet All() { return FromMask(kFullMask); }

  constexpr uint16_t mask() const { return bits_; }
  constexpr bool Contains(int label) const {
    return label >= 0 && label < kNumLabels && ((bits_ >> label) & 1u) != 0;
  }
  constexpr void Insert(int label) {
    if (label >= 0 && label < kNumLabels) {
      bits_ = static_cast<uint16_t>(bits_ | (1u << label));
    }
  }
  constexpr int Count() const { return std::popcount(bits_); }
  constexpr bool Empty() const { return bits_ == 0; }
  constexpr bool IsSubsetOf(LabelSet other) const {
    return (bits_ & ~other.bits_) == 0;
  }

  std::vector<int> ToVector() const {
    std::vector<int> out;
    for (int l = 0; l < kNumLabels; ++l) {
      if (Contains(l)) out.push_back(l);
    }
    return out;
  }

  // "[1,0,0,...]" style, label 0 first.
  std::string ToString() const {
    std::string s = "[";
    for (int l = 0; l < kNumLabels; ++l) {
      if (l > 0) s += ',';
      s += Contains(l) ? '1' : '0';
    }
    return s + "]";
  }

  friend constexpr LabelSet operator|(LabelSet a, LabelSet b) {
    return FromMask(static_cast<uint16_t>(a.bits_ | b.bits_));
  }
  friend constexpr LabelSet operator&(LabelSet a, LabelSet b) {
    return FromMask(static_cast<uint16_t>(a.bits_ & b.bits_));
  }
  // Set difference a \ b.
  friend constexpr LabelSet operator-(LabelSet a, LabelSet b) {
    return FromMask(static_cast<uint16_t>(a.bits_ & ~b.bits_));
  }
  LabelSet& operator|=(LabelSet o) { return *this = *this | o; }
  friend constexpr bool operator==(LabelSet, LabelSet) = default;

 private:
  static constexpr uint16_t kFullMask = (1u << kNumLabels) - 1;
  uint16_t bits_ = 0;
};

}  // namespace seedrelay

#endif  // SEEDRELAY_LABELS_H_
