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

// The private next-token prediction loop.
//
// Each query is answered by
//   1. including every ensemble member independently with probability q,
//   2. mollifying each included member's next-token distribution toward the
//      public model's with the session radius beta*,
//   3. averaging the mollified distributions (the public distribution when
//      nobody was included),
//   4. drawing one token from the average by ancestral sampling, and
//   5. charging the ledger.
// A session answers at most T queries and refuses afterwards.

#ifndef PMIXED_PROTOCOL_H_
#define PMIXED_PROTOCOL_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/types/span.h"
#include "pmixed/accountant.h"
#include "pmixed/distribution.h"
#include "pmixed/language_model.h"
#include "pmixed/mollifier.h"
#include "pmixed/privacy_ledger.h"
#include "pmixed/random.h"

namespace pmixed {

// Indices (0-based) of the members included by Poisson subsampling, in
// increasing order. Always consumes exactly `ensemble_size` uniforms.
std::vector<int> PoissonSubsample(int ensemble_size, double q,
                                  RandomSource& rng);

// Entrywise mean. Fails on an empty list or mismatched sizes.
absl::StatusOr<Distribution> Aggregate(absl::Span<const Distribution> parts);

// Inverse-CDF draw from the full distribution; no truncation or temperature.
TokenId SampleToken(const Distribution& dist, RandomSource& rng);

struct MollifiedAggregate {
  Distribution aggregate;
  std::vector<double> lambdas;  // One per private output, in order.
};

// Mollifies every private output toward `public_output` and averages them.
// With no private outputs the aggregate is `public_output` itself. Each
// lambda depends only on its own private output.
absl::StatusOr<MollifiedAggregate> MollifyAndAggregate(
    absl::Span<const Distribution> private_outputs,
    const Distribution& public_output, RenyiOrder alpha, MollifierRadius radius,
    double lambda_tol = kDefaultLambdaTolerance);

struct QueryRecord {
  std::vector<TokenId> context;
  std::vector<int> subset;      // 0-based member indices.
  std::vector<double> lambdas;  // Parallel to `subset`.
  Distribution aggregate;
  TokenId sampled_token;
};

struct SessionOptions {
  EpsMode mode = EpsMode::kConservative;
  uint64_t seed = 0;
  double lambda_tol = kDefaultLambdaTolerance;
  double beta_tol = kDefaultBetaTolerance;
  // Replaces the solved beta*. The amplified loss at this radius is what the
  // ledger charges, so it must still fit the budget.
  std::optional<double> radius_override;
  // Resumes accounting for a session that already answered this many
  // queries.
  int64_t queries_already_answered = 0;
};

// Outcome of a batch of queries: the answered records, in order, and the
// status that stopped the batch (OK if every query was answered).
struct SessionTrace {
  std::vector<QueryRecord> records;
  absl::Status status;
};

class ProtocolSession {
 public:
  // Fails if the ensemble size differs from params.ensemble_size, a model
  // handle is null, or the vocabularies disagree.
  static absl::StatusOr<ProtocolSession> Create(
      std::vector<ModelHandle> ensemble, ModelHandle public_model,
      const PrivacyParams& params, const SessionOptions& options);

  // Answers one query. Returns ResourceExhausted once the budget is spent.
  // A model failure returns its error and charges nothing.
  absl::StatusOr<QueryRecord> Respond(absl::Span<const TokenId> context);

  // Calls Respond on each query in order and stops at the first error.
  SessionTrace Run(absl::Span<const std::vector<TokenId>> queries);

  const PrivacyParams& params() const { return ledger_.params(); }
  const PrivacyLedger& ledger() const { return ledger_; }
  EpsMode mode() const { return options_.mode; }
  double beta_star() const { return radius_.beta(); }
  const AccountantRecord& accountant() const { return accountant_; }

 private:
  ProtocolSession(std::vector<ModelHandle> ensemble, ModelHandle public_model,
                  SessionOptions options, MollifierRadius radius,
                  RenyiOrder alpha, PrivacyLedger ledger,
                  AccountantRecord accountant)
      : ensemble_(std::move(ensemble)),
        public_model_(std::move(public_model)),
        options_(std::move(options)),
        radius_(radius),
        alpha_(alpha),
        ledger_(std::move(ledger)),
        accountant_(accountant),
        rng_(options_.seed) {}

  std::vector<ModelHandle> ensemble_;
  ModelHandle public_model_;
  SessionOptions options_;
  MollifierRadius radius_;
  RenyiOrder alpha_;
  PrivacyLedger ledger_;
  AccountantRecord accountant_;
  RandomSource rng_;
};

}  // namespace pmixed

#endif  // PMIXED_PROTOCOL_H_
