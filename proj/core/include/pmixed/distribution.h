// Copyright 2026 The pmixed Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PMIXED_DISTRIBUTION_H_
#define PMIXED_DISTRIBUTION_H_

#include <cstddef>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/types/span.h"

namespace pmixed {

// Absolute tolerance on the sum of a probability vector accepted by
// Distribution::Create. Inputs within tolerance are renormalized.
inline constexpr double kNormalizationTolerance = 1e-9;

// A normalized probability vector over a finite token vocabulary.
//
// Every entry is finite and nonnegative, the entries sum to one and there
// are at least two of them. Instances are immutable.
class Distribution {
 public:
  // Validates `probs` and renormalizes it when the sum is within
  // kNormalizationTolerance of one. Fails with InvalidArgument otherwise.
  static absl::StatusOr<Distribution> Create(std::vector<double> probs);

  // Uniform distribution over `size` tokens. `size` must be at least 2.
  static absl::StatusOr<Distribution> Uniform(size_t size);

  // Point mass on `index` over `size` tokens.
  static absl::StatusOr<Distribution> PointMass(size_t size, size_t index);

  // weight * a + (1 - weight) * b, entrywise. Both arguments are valid
  // distributions of the same size and weight lies in [0, 1], so the result
  // is valid without renormalization. The caller checks both preconditions.
  static Distribution Mixture(const Distribution& a, const Distribution& b,
                              double weight);

  // Entrywise arithmetic mean of a nonempty list of same-size distributions.
  // Preconditions are checked by the caller.
  static Distribution Mean(absl::Span<const Distribution> parts);

  size_t size() const { return probs_.size(); }
  double operator[](size_t i) const { return probs_[i]; }
  absl::Span<const double> probs() const { return probs_; }

  // Index of the largest entry; ties resolve to the lowest index.
  size_t Argmax() const;

  friend bool operator==(const Distribution& a, const Distribution& b) {
    return a.probs_ == b.probs_;
  }

 private:
  explicit Distribution(std::vector<double> probs) : probs_(std::move(probs)) {}

  std::vector<double> probs_;
};

}  // namespace pmixed

#endif  // PMIXED_DISTRIBUTION_H_
