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

#ifndef PMIXED_PRIVACY_LEDGER_H_
#define PMIXED_PRIVACY_LEDGER_H_

#include <cstdint>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "pmixed/accountant.h"

namespace pmixed {

// Slack allowed between the composed spend and the global budget.
inline constexpr double kBudgetSlack = 1e-12;

// Tracks how many queries a session has answered. Every answered query
// costs the same precomputed amount, so the spend after m queries is
// Compose(per_query_epsilon, m). Single writer; not thread-safe.
class PrivacyLedger {
 public:
  // Fails if T * per_query_epsilon exceeds the global budget.
  static absl::StatusOr<PrivacyLedger> Create(const PrivacyParams& params,
                                              double per_query_epsilon);

  // Resumes a ledger that already answered `queries_answered` queries.
  static absl::StatusOr<PrivacyLedger> Restore(const PrivacyParams& params,
                                               double per_query_epsilon,
                                               int64_t queries_answered);

  // Records one released answer. Returns ResourceExhausted, without
  // changing state, once T queries have been answered.
  absl::Status Charge();

  bool exhausted() const { return queries_answered_ >= params_.query_budget; }
  int64_t queries_answered() const { return queries_answered_; }
  int64_t remaining() const { return params_.query_budget - queries_answered_; }
  double per_query_epsilon() const { return per_query_epsilon_; }
  double spent() const {
    return Compose(per_query_epsilon_, queries_answered_);
  }
  const PrivacyParams& params() const { return params_; }

 private:
  PrivacyLedger(const PrivacyParams& params, double per_query_epsilon,
                int64_t queries_answered)
      : params_(params),
        per_query_epsilon_(per_query_epsilon),
        queries_answered_(queries_answered) {}

  PrivacyParams params_;
  double per_query_epsilon_;
  int64_t queries_answered_;
};

}  // namespace pmixed

#endif  // PMIXED_PRIVACY_LEDGER_H_
