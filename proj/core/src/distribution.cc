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

#include "pmixed/distribution.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"

namespace pmixed {

absl::StatusOr<Distribution> Distribution::Create(std::vector<double> probs) {
  if (probs.size() < 2) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "Distribution needs at least 2 entries, got %d", probs.size()));
  }
  double sum = 0.0;
  for (size_t i = 0; i < probs.size(); ++i) {
    if (!std::isfinite(probs[i]) || probs[i] < 0.0) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "Distribution entry %d is not a finite nonnegative value: %g", i,
          probs[i]));
    }
    sum += probs[i];
  }
  if (std::abs(sum - 1.0) > kNormalizationTolerance) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "Distribution entries sum to %.17g, outside tolerance %g of 1", sum,
        kNormalizationTolerance));
  }
  if (sum != 1.0) {
    for (double& p : probs) p /= sum;
  }
  return Distribution(std::move(probs));
}

absl::StatusOr<Distribution> Distribution::Uniform(size_t size) {
  if (size < 2) {
    return absl::InvalidArgumentError("Uniform distribution needs size >= 2");
  }
  return Distribution(
      std::vector<double>(size, 1.0 / static_cast<double>(size)));
}

absl::StatusOr<Distribution> Distribution::PointMass(size_t size,
                                                     size_t index) {
  if (size < 2 || index >= size) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "Invalid point mass at %d over %d tokens", index, size));
  }
  std::vector<double> probs(size, 0.0);
  probs[index] = 1.0;
  return Distribution(std::move(probs));
}

Distribution Distribution::Mixture(const Distribution& a, const Distribution& b,
                                   double weight) {
  std::vector<double> out(a.size());
  const double complement = 1.0 - weight;
  for (size_t i = 0; i < out.size(); ++i) {
    out[i] = weight * a.probs_[i] + complement * b.probs_[i];
  }
  return Distribution(std::move(out));
}

Distribution Distribution::Mean(absl::Span<const Distribution> parts) {
  // Identical parts average to themselves exactly.
  if (std::all_of(parts.begin(), parts.end(),
                  [&](const Distribution& d) { return d == parts.front(); })) {
    return parts.front();
  }
  std::vector<double> out(parts.front().size(), 0.0);
  for (const Distribution& part : parts) {
    for (size_t i = 0; i < out.size(); ++i) out[i] += part.probs_[i];
  }
  const double count = static_cast<double>(parts.size());
  for (double& v : out) v /= count;
  return Distribution(std::move(out));
}

size_t Distribution::Argmax() const {
  return static_cast<size_t>(std::max_element(probs_.begin(), probs_.end()) -
                             probs_.begin());
}

}  // namespace pmixed
