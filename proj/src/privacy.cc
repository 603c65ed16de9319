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

#include "seedrelay/privacy.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/strings/str_cat.h"
#include "seedrelay/random.h"

namespace seedrelay {

absl::StatusOr<double> LabelPrivacySingle(LabelSet targets, LabelSet advertised) {
  if (advertised.Empty()) {
    return absl::FailedPreconditionError(
        "label privacy undefined: destination received no labels");
  }
  if (!targets.IsSubsetOf(advertised)) {
    return absl::InvalidArgumentError(
        absl::StrCat("target labels ", targets.ToString(),
                     " not contained in advertised labels ",
                     advertised.ToString()));
  }
  return 1.0 - static_cast<double>(targets.Count()) /
                   static_cast<double>(advertised.Count());
}

absl::StatusOr<double> LabelPrivacyMultihop(
    LabelSet targets, std::span<const LabelSet> received_unions) {
  LabelSet all;
  for (LabelSet s : received_unions) all |= s;
  return LabelPrivacySingle(targets, all);
}

namespace {

std::vector<double> Normalized(const Image& img) {
  std::vector<double> v(kImagePixels);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = img.pixels[i] / 255.0;
  return v;
}

double EuclideanDistance(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

}  // namespace

absl::StatusOr<SimilarityResult> Similarity(std::span<const Image> images) {
  if (images.size() < 2) {
    return absl::InvalidArgumentError(absl::StrCat(
        "similarity needs at least two samples, got ", images.size()));
  }
  std::vector<std::vector<double>> scaled;
  scaled.reserve(images.size());
  for (const Image& img : images) scaled.push_back(Normalized(img));

  SimilarityResult r;
  for (std::size_t i = 0; i < scaled.size(); ++i) {
    for (std::size_t j = i + 1; j < scaled.size(); ++j) {
      const double d = EuclideanDistance(scaled[i], scaled[j]);
      if (d == 0.0) ++r.zero_distance_pairs;
      r.max_distance = std::max(r.max_distance, d);
    }
  }
  if (r.max_distance == 0.0) {
    r.degenerate = true;
    r.value = -std::numeric_limits<double>::infinity();
  } else {
    r.value = std::log(r.max_distance);
  }
  return r;
}

absl::StatusOr<double> SamplePrivacy(double similarity) {
  if (!(similarity > 0.0)) {
    return absl::OutOfRangeError(absl::StrCat(
        "sample privacy needs a positive similarity, got ", similarity));
  }
  return 1.0 / similarity;
}

SquareMatrix PairwiseDistances(std::span<const Image> images) {
  std::vector<std::vector<double>> scaled;
  scaled.reserve(images.size());
  for (const Image& img : images) scaled.push_back(Normalized(img));
  SquareMatrix d(images.size());
  for (std::size_t i = 0; i < scaled.size(); ++i) {
    for (std::size_t j = i + 1; j < scaled.size(); ++j) {
      d(i, j) = d(j, i) = EuclideanDistance(scaled[i], scaled[j]);
    }
  }
  return d;
}

namespace {

struct EigenPair {
  double value = 0.0;
  std::vector<double> vector;
};

double Norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// Dominant eigenpair of (m + shift * I) by power iteration, reported for m.
// Each component gets its own start vector: after deflating a repeated
// eigenvalue, the previous start is orthogonal to the remaining eigenvector.
EigenPair PowerIterate(const SquareMatrix& m, double shift, double scale,
                       int component, const MdsOptions& options) {
  const std::size_t n = m.size();
  Rng rng = Rng::Derive(0x6d6473ULL, "mds", static_cast<uint64_t>(component));
  EigenPair p;
  p.vector.resize(n);
  for (double& x : p.vector) x = rng.Normal();
  double norm = Norm(p.vector);
  for (double& x : p.vector) x /= norm;

  std::vector<double> w(n);
  for (int it = 0; it < options.max_iterations; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      double s = shift * p.vector[i];
      for (std::size_t j = 0; j < n; ++j) s += m(i, j) * p.vector[j];
      w[i] = s;
    }
    double lambda = 0.0;
    for (std::size_t i = 0; i < n; ++i) lambda += p.vector[i] * w[i];
    double residual = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = w[i] - lambda * p.vector[i];
      residual += r * r;
    }
    p.value = lambda - shift;
    norm = Norm(w);
    if (std::sqrt(residual) <= options.tolerance * scale || norm == 0.0) break;
    for (std::size_t i = 0; i < n; ++i) p.vector[i] = w[i] / norm;
  }
  // Sign convention: largest-magnitude component positive.
  std::size_t big = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (std::abs(p.vector[i]) > std::abs(p.vector[big])) big = i;
  }
  if (n > 0 && p.vector[big] < 0) {
    for (double& x : p.vector) x = -x;
  }
  return p;
}

}  // namespace

absl::StatusOr<std::vector<std::vector<double>>> ClassicalMds(
    const SquareMatrix& distances, int dim, const MdsOptions& options) {
  const std::size_t n = distances.size();
  if (dim < 1) return absl::InvalidArgumentError("MDS dimension must be >= 1");
  for (std::size_t i = 0; i < n; ++i) {
    if (distances(i, i) != 0.0) {
      return absl::InvalidArgumentError(
          absl::StrCat("distance matrix diagonal entry ", i, " is nonzero"));
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (!(distances(i, j) >= 0.0)) {
        return absl::InvalidArgumentError(
            absl::StrCat("distance (", i, ",", j, ") is negative or NaN"));
      }
      if (std::abs(distances(i, j) - distances(j, i)) > 1e-9) {
        return absl::InvalidArgumentError(
            absl::StrCat("distance matrix is not symmetric at (", i, ",", j, ")"));
      }
    }
  }

  // B = -1/2 J D^2 J
  SquareMatrix b(n);
  std::vector<double> row_mean(n, 0.0);
  double grand = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double sq = distances(i, j) * distances(i, j);
      b(i, j) = sq;
      row_mean[i] += sq;
    }
    grand += row_mean[i];
    row_mean[i] /= static_cast<double>(n);
  }
  grand /= static_cast<double>(n * n);
  double frobenius = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      b(i, j) = -0.5 * (b(i, j) - row_mean[i] - row_mean[j] + grand);
      frobenius += b(i, j) * b(i, j);
    }
  }
  frobenius = std::sqrt(frobenius);

  std::vector<std::vector<double>> coords(n, std::vector<double>(
                                                 static_cast<std::size_t>(dim), 0.0));
  if (n == 0 || frobenius == 0.0) return coords;

  for (int k = 0; k < dim; ++k) {
    EigenPair top = PowerIterate(b, 0.0, frobenius, k, options);
    if (top.value < 0.0) {
      // Dominant by magnitude is negative; shift to reach the largest one.
      top = PowerIterate(b, -top.value, frobenius, k, options);
    }
    if (k == 0 && top.value < -options.tolerance * frobenius) {
      return absl::FailedPreconditionError(absl::StrCat(
          "degenerate MDS embedding: top eigenvalue ", top.value, " is negative"));
    }
    if (top.value <= options.tolerance * frobenius) break;
    const double root = std::sqrt(top.value);
    for (std::size_t i = 0; i < n; ++i) {
      coords[i][static_cast<std::size_t>(k)] = root * top.vector[i];
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        b(i, j) -= top.value * top.vector[i] * top.vector[j];
      }
    }
  }
  for (int k = 0; k < dim; ++k) {
    double mean = 0.0;
    for (const auto& p : coords) mean += p[static_cast<std::size_t>(k)];
    mean /= static_cast<double>(n);
    for (auto& p : coords) p[static_cast<std::size_t>(k)] -= mean;
  }
  return coords;
}

}  // namespace seedrelay
