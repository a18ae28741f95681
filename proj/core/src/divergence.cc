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

#include "pmixed/divergence.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"

namespace pmixed {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

absl::Status CheckSameSize(const Distribution& p, const Distribution& q) {
  if (p.size() != q.size()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "Distribution size mismatch: %d vs %d", p.size(), q.size()));
  }
  return absl::OkStatus();
}

double MaxLogRatio(const Distribution& p, const Distribution& q) {
  double best = -kInf;
  for (size_t x = 0; x < p.size(); ++x) {
    if (p[x] == 0.0) continue;
    if (q[x] == 0.0) return kInf;
    best = std::max(best, std::log(p[x]) - std::log(q[x]));
  }
  return best;
}

}  // namespace

absl::StatusOr<RenyiOrder> RenyiOrder::Finite(double value) {
  if (!(value > 1.0) || !std::isfinite(value)) {
    return absl::OutOfRangeError(absl::StrFormat(
        "Renyi order must be a finite value > 1, got %g", value));
  }
  return RenyiOrder(value, false);
}

absl::StatusOr<double> RenyiDivergence(const Distribution& p,
                                       const Distribution& q,
                                       RenyiOrder alpha) {
  if (absl::Status s = CheckSameSize(p, q); !s.ok()) return s;
  if (p == q) return 0.0;

  // The max log-ratio is never below zero for two normalized vectors, but
  // rounding can push it a hair under.
  if (alpha.is_infinite()) return std::max(0.0, MaxLogRatio(p, q));

  const double a = alpha.value();
  std::vector<double> terms;
  terms.reserve(p.size());
  double shift = -kInf;
  for (size_t x = 0; x < p.size(); ++x) {
    if (p[x] == 0.0) continue;
    if (q[x] == 0.0) return kInf;
    const double t = a * std::log(p[x]) + (1.0 - a) * std::log(q[x]);
    terms.push_back(t);
    shift = std::max(shift, t);
  }
  double sum = 0.0;
  for (double t : terms) sum += std::exp(t - shift);
  const double value = (shift + std::log(sum)) / (a - 1.0);
  return std::max(0.0, value);
}

absl::StatusOr<double> SymmetricRenyiDivergence(const Distribution& p,
                                                const Distribution& q,
                                                RenyiOrder alpha) {
  absl::StatusOr<double> forward = RenyiDivergence(p, q, alpha);
  if (!forward.ok()) return forward.status();
  absl::StatusOr<double> backward = RenyiDivergence(q, p, alpha);
  if (!backward.ok()) return backward.status();
  return std::max(*forward, *backward);
}

}  // namespace pmixed
