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

// Renyi divergences between finite discrete distributions. All values are
// in nats.

#ifndef PMIXED_DIVERGENCE_H_
#define PMIXED_DIVERGENCE_H_

#include "absl/status/statusor.h"
#include "pmixed/distribution.h"

namespace pmixed {

// Order of a Renyi divergence: a finite real strictly greater than one, or
// infinity.
class RenyiOrder {
 public:
  static absl::StatusOr<RenyiOrder> Finite(double value);
  static RenyiOrder Infinity() { return RenyiOrder(0.0, true); }

  bool is_infinite() const { return infinite_; }
  // Only meaningful when !is_infinite().
  double value() const { return value_; }

 private:
  RenyiOrder(double value, bool infinite)
      : value_(value), infinite_(infinite) {}

  double value_;
  bool infinite_;
};

// D_alpha(p || q) = 1/(alpha-1) log sum_x p(x)^alpha q(x)^(1-alpha), and
// log max_x p(x)/q(x) for the infinite order.
//
// Returns +infinity when some x has q(x) = 0 < p(x). Entries with p(x) = 0
// contribute nothing. The sum is evaluated as a max-shifted log-sum-exp over
// the support of p, so peaked distributions over large vocabularies do not
// underflow. Fails with InvalidArgument on a size mismatch.
absl::StatusOr<double> RenyiDivergence(const Distribution& p,
                                       const Distribution& q, RenyiOrder alpha);

// max(D_alpha(p || q), D_alpha(q || p)).
absl::StatusOr<double> SymmetricRenyiDivergence(const Distribution& p,
                                                const Distribution& q,
                                                RenyiOrder alpha);

}  // namespace pmixed

#endif  // PMIXED_DIVERGENCE_H_
