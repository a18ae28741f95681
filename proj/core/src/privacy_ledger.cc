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

#include "pmixed/privacy_ledger.h"

#include <cmath>

#include "absl/strings/str_format.h"

namespace pmixed {

absl::StatusOr<PrivacyLedger> PrivacyLedger::Create(const PrivacyParams& params,
                                                    double per_query_epsilon) {
  return Restore(params, per_query_epsilon, 0);
}

absl::StatusOr<PrivacyLedger> PrivacyLedger::Restore(
    const PrivacyParams& params, double per_query_epsilon,
    int64_t queries_answered) {
  if (absl::Status s = params.Validate(); !s.ok()) return s;
  if (!(per_query_epsilon >= 0.0) || !std::isfinite(per_query_epsilon)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("per-query epsilon must be finite and >= 0, got %g",
                        per_query_epsilon));
  }
  if (Compose(per_query_epsilon, params.query_budget) >
      params.global_epsilon + kBudgetSlack) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "%d queries at %.9g each exceed the global budget %.9g",
        params.query_budget, per_query_epsilon, params.global_epsilon));
  }
  if (queries_answered < 0 || queries_answered > params.query_budget) {
    return absl::InvalidArgumentError(
        absl::StrFormat("queries answered (%d) outside [0, %d]",
                        queries_answered, params.query_budget));
  }
  return PrivacyLedger(params, per_query_epsilon, queries_answered);
}

absl::Status PrivacyLedger::Charge() {
  if (exhausted()) {
    return absl::ResourceExhaustedError(absl::StrFormat(
        "privacy budget exhausted after %d queries; refusing to answer",
        queries_answered_));
  }
  ++queries_answered_;
  return absl::OkStatus();
}

}  // namespace pmixed
