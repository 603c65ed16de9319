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

#ifndef SEEDRELAY_PRIVACY_H_
#define SEEDRELAY_PRIVACY_H_

#include <cstddef>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "seedrelay/dataset.h"
#include "seedrelay/labels.h"

namespace seedrelay {

// 1 - |targets| / |advertised|. Both indicators must already be restricted to
// labels the destination actually received. FailedPrecondition when nothing
// was advertised (privacy undefined), InvalidArgument when targets are not a
// subset of advertised.
absl::StatusOr<double> LabelPrivacySingle(LabelSet targets, LabelSet advertised);

// 1 - |targets| / |OR of the public indicators seen at hops 0..M|.
// received_unions[0] is the device's own public indicator.
absl::StatusOr<double> LabelPrivacyMultihop(
    LabelSet targets, std::span<const LabelSet> received_unions);

struct SimilarityResult {
  // max over unordered pairs of ln d, d the Euclidean distance between images
  // with pixels scaled to [0, 1]. -infinity when every pair coincides.
  double value = 0.0;
  double max_distance = 0.0;
  std::size_t zero_distance_pairs = 0;
  bool degenerate = false;  // value is the -infinity sentinel
};

// InvalidArgument for fewer than two images.
absl::StatusOr<SimilarityResult> Similarity(std::span<const Image> images);

// 1 / similarity. OutOfRange for similarity <= 0.
absl::StatusOr<double> SamplePrivacy(double similarity);

// Dense symmetric n x n matrix, row-major.
class SquareMatrix {
 public:
  explicit SquareMatrix(std::size_t n = 0) : n_(n), data_(n * n, 0.0) {}
  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }

 private:
  std::size_t n_;
  std::vector<double> data_;
};

// Euclidean distances between images in [0, 1]-scaled pixel space.
SquareMatrix PairwiseDistances(std::span<const Image> images);

struct MdsOptions {
  double tolerance = 1e-10;  // relative eigen-residual
  int max_iterations = 10'000;
};

// Classical multidimensional scaling. Double-centers the squared distances,
// B = -1/2 J D^2 J, extracts the top `dim` eigenpairs by power iteration with
// deflation and returns n points (each of length dim) scaled by
// sqrt(eigenvalue), centered at the origin. Components whose eigenvalue is
// below tolerance * ||B||_F are left at zero.
//
// InvalidArgument for a non-square, asymmetric (beyond 1e-9), negative-entry or
// nonzero-diagonal input; FailedPrecondition when the top eigenvalue is
// negative.
absl::StatusOr<std::vector<std::vector<double>>> ClassicalMds(
    const SquareMatrix& distances, int dim = 2, const MdsOptions& options = {});

}  // namespace seedrelay

#endif  // SEEDRELAY_PRIVACY_H_
