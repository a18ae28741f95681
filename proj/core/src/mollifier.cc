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

#include "pmixed/mollifier.h"

#include <cmath>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"

namespace pmixed {

absl::StatusOr<MollifierRadius> MollifierRadius::Create(double beta) {
  if (!(beta >= 0.0) || !std::isfinite(beta)) {
    return absl::OutOfRangeError(absl::StrFormat(
        "Mollifier radius must be finite and >= 0, got %g", beta));
  }
  return MollifierRadius(beta);
}

absl::StatusOr<Distribution> Mix(const Distribution& p, const Distribution& p0,
                                 double lambda) {
  if (p.size() != p0.size()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "Cannot mix distributions of sizes %d and %d", p.size(), p0.size()));
  }
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    return absl::OutOfRangeError(
        absl::StrFormat("Mixing weight must lie in [0, 1], got %g", lambda));
  }
  return Distribution::Mixture(p, p0, lambda);
}

absl::StatusOr<bool> InMollifier(const Distribution& projected,
                                 const Distribution& p0, RenyiOrder alpha,
                                 MollifierRadius radius) {
  if (alpha.is_infinite()) {
    return absl::InvalidArgumentError(
        "Mollifier membership needs a finite Renyi order");
  }
  absl::StatusOr<double> d = SymmetricRenyiDivergence(projected, p0, alpha);
  if (!d.ok()) return d.status();
  return *d <= radius.beta() * alpha.value();
}

absl::StatusOr<MollificationResult> SolveLambda(const Distribution& p,
                                                const Distribution& p0,
                                                RenyiOrder alpha,
                                                MollifierRadius radius,
                                                double tol) {
  if (!(tol > 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("Bisection tolerance must be positive, got %g", tol));
  }
  if (alpha.is_infinite()) {
    return absl::InvalidArgumentError("SolveLambda needs a finite Renyi order");
  }
  if (p.size() != p0.size()) {
    return absl::InvalidArgumentError(
        absl::StrFormat("Cannot mollify distributions of sizes %d and %d",
                        p.size(), p0.size()));
  }

  auto feasible = [&](double lambda) -> absl::StatusOr<bool> {
    return InMollifier(Distribution::Mixture(p, p0, lambda), p0, alpha, radius);
  };

  absl::StatusOr<bool> at_one = feasible(1.0);
  if (!at_one.ok()) return at_one.status();
  if (*at_one) return MollificationResult{1.0, p};

  // lambda = 0 reproduces p0 and is always feasible.
  double lo = 0.0;
  double hi = 1.0;
  for (int i = 0; i < kMaxLambdaIterations && hi - lo > tol; ++i) {
    const double mid = 0.5 * (lo + hi);
    absl::StatusOr<bool> ok = feasible(mid);
    if (!ok.ok()) return ok.status();
    if (*ok) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return MollificationResult{lo, Distribution::Mixture(p, p0, lo)};
}

}  // namespace pmixed
