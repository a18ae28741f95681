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

// RD-mollification: pulling a private next-token distribution toward the
// public one along the segment lambda * p + (1 - lambda) * p0 until it lies
// within symmetric Renyi divergence beta * alpha of the public distribution.

#ifndef PMIXED_MOLLIFIER_H_
#define PMIXED_MOLLIFIER_H_

#include "absl/status/statusor.h"
#include "pmixed/distribution.h"
#include "pmixed/divergence.h"

namespace pmixed {

inline constexpr double kDefaultLambdaTolerance = 1e-6;
inline constexpr int kMaxLambdaIterations = 100;

// Radius parameter beta of a relative RD mollifier. The divergence bound is
// beta * alpha.
class MollifierRadius {
 public:
  static absl::StatusOr<MollifierRadius> Create(double beta);

  double beta() const { return beta_; }

 private:
  explicit MollifierRadius(double beta) : beta_(beta) {}
  double beta_;
};

struct MollificationResult {
  double lambda;
  Distribution projected;
};

// lambda * p + (1 - lambda) * p0. lambda must lie in [0, 1].
absl::StatusOr<Distribution> Mix(const Distribution& p, const Distribution& p0,
                                 double lambda);

// True iff the symmetric divergence between `projected` and `p0` is at most
// beta * alpha.
absl::StatusOr<bool> InMollifier(const Distribution& projected,
                                 const Distribution& p0, RenyiOrder alpha,
                                 MollifierRadius radius);

// Largest lambda in [0, 1] whose mixture stays inside the relative mollifier
// around p0. The constraint is nondecreasing in lambda, so it is found by
// bisection that always keeps the feasible endpoint: the returned mixture
// satisfies the bound exactly and lambda + tol is infeasible unless
// lambda = 1. Requires alpha finite.
absl::StatusOr<MollificationResult> SolveLambda(
    const Distribution& p, const Distribution& p0, RenyiOrder alpha,
    MollifierRadius radius, double tol = kDefaultLambdaTolerance);

}  // namespace pmixed

#endif  // PMIXED_MOLLIFIER_H_
