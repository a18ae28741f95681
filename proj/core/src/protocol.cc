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

#include "pmixed/protocol.h"

#include <utility>

#include "absl/strings/str_format.h"

namespace pmixed {

std::vector<int> PoissonSubsample(int ensemble_size, double q,
                                  RandomSource& rng) {
  std::vector<int> subset;
  for (int i = 0; i < ensemble_size; ++i) {
    if (rng.Bernoulli(q)) subset.push_back(i);
  }
  return subset;
}

absl::StatusOr<Distribution> Aggregate(absl::Span<const Distribution> parts) {
  if (parts.empty()) {
    return absl::InvalidArgumentError(
        "cannot aggregate an empty set of distributions");
  }
  for (const Distribution& d : parts) {
    if (d.size() != parts.front().size()) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "aggregate size mismatch: %d vs %d", d.size(), parts.front().size()));
    }
  }
  return Distribution::Mean(parts);
}

TokenId SampleToken(const Distribution& dist, RandomSource& rng) {
  const double u = rng.UniformDouble();
  double cumulative = 0.0;
  size_t last_positive = 0;
  for (size_t i = 0; i < dist.size(); ++i) {
    if (dist[i] == 0.0) continue;
    cumulative += dist[i];
    last_positive = i;
    if (u < cumulative) return static_cast<TokenId>(i);
  }
  // Rounding left the cumulative sum a hair below u.
  return static_cast<TokenId>(last_positive);
}

absl::StatusOr<MollifiedAggregate> MollifyAndAggregate(
    absl::Span<const Distribution> private_outputs,
    const Distribution& public_output, RenyiOrder alpha, MollifierRadius radius,
    double lambda_tol) {
  if (private_outputs.empty()) {
    return MollifiedAggregate{public_output, {}};
  }
  std::vector<Distribution> projected;
  std::vector<double> lambdas;
  projected.reserve(private_outputs.size());
  lambdas.reserve(private_outputs.size());
  for (const Distribution& p : private_outputs) {
    absl::StatusOr<MollificationResult> m =
        SolveLambda(p, public_output, alpha, radius, lambda_tol);
    if (!m.ok()) return m.status();
    lambdas.push_back(m->lambda);
    projected.push_back(std::move(m->projected));
  }
  absl::StatusOr<Distribution> mean = Aggregate(projected);
  if (!mean.ok()) return mean.status();
  return MollifiedAggregate{*std::move(mean), std::move(lambdas)};
}

absl::StatusOr<ProtocolSession> ProtocolSession::Create(
    std::vector<ModelHandle> ensemble, ModelHandle public_model,
    const PrivacyParams& params, const SessionOptions& options) {
  if (absl::Status s = params.Validate(); !s.ok()) return s;
  if (ensemble.size() != static_cast<size_t>(params.ensemble_size)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "ensemble holds %d models but the privacy parameters say N = %d",
        ensemble.size(), params.ensemble_size));
  }
  if (public_model == nullptr) {
    return absl::InvalidArgumentError("public model is null");
  }
  for (const ModelHandle& m : ensemble) {
    if (m == nullptr) return absl::InvalidArgumentError("null ensemble model");
    if (m->vocab_size() != public_model->vocab_size()) {
      return absl::InvalidArgumentError(
          "ensemble and public model vocabularies differ");
    }
  }

  absl::StatusOr<AccountantRecord> record;
  if (options.radius_override.has_value()) {
    absl::StatusOr<MollifierRadius> fixed =
        MollifierRadius::Create(*options.radius_override);
    if (!fixed.ok()) return fixed.status();
    absl::StatusOr<double> eps =
        ProtocolEpsilon(params, fixed->beta(), options.mode);
    if (!eps.ok()) return eps.status();
    AccountantRecord r{.params = params, .mode = options.mode};
    r.beta_star = fixed->beta();
    r.per_query_epsilon = *eps;
    r.composed_epsilon = Compose(*eps, params.query_budget);
    r.dp_epsilon = RdpToDp(params.alpha, r.composed_epsilon, params.delta);
    record = r;
  } else {
    record = ComputeAccountantRecord(params, options.mode, options.beta_tol);
  }
  if (!record.ok()) return record.status();

  absl::StatusOr<PrivacyLedger> ledger = PrivacyLedger::Restore(
      params, record->per_query_epsilon, options.queries_already_answered);
  if (!ledger.ok()) return ledger.status();
  absl::StatusOr<MollifierRadius> radius =
      MollifierRadius::Create(record->beta_star);
  if (!radius.ok()) return radius.status();
  absl::StatusOr<RenyiOrder> alpha = RenyiOrder::Finite(params.alpha);
  if (!alpha.ok()) return alpha.status();

  return ProtocolSession(std::move(ensemble), std::move(public_model), options,
                         *radius, *alpha, *std::move(ledger), *record);
}

absl::StatusOr<QueryRecord> ProtocolSession::Respond(
    absl::Span<const TokenId> context) {
  if (ledger_.exhausted()) {
    return absl::ResourceExhaustedError(absl::StrFormat(
        "privacy budget exhausted after %d queries; refusing to answer",
        ledger_.queries_answered()));
  }
  const PrivacyParams& p = ledger_.params();
  std::vector<int> subset =
      PoissonSubsample(p.ensemble_size, p.sampling_rate, rng_);

  absl::StatusOr<Distribution> public_output = public_model_->Predict(context);
  if (!public_output.ok()) return public_output.status();
  std::vector<Distribution> private_outputs;
  private_outputs.reserve(subset.size());
  for (int i : subset) {
    absl::StatusOr<Distribution> out = ensemble_[i]->Predict(context);
    if (!out.ok()) return out.status();
    private_outputs.push_back(*std::move(out));
  }

  absl::StatusOr<MollifiedAggregate> mixed = MollifyAndAggregate(
      private_outputs, *public_output, alpha_, radius_, options_.lambda_tol);
  if (!mixed.ok()) return mixed.status();
  const TokenId token = SampleToken(mixed->aggregate, rng_);
  QueryRecord record{.context = {context.begin(), context.end()},
                     .subset = std::move(subset),
                     .lambdas = std::move(mixed->lambdas),
                     .aggregate = std::move(mixed->aggregate),
                     .sampled_token = token};

  if (absl::Status s = ledger_.Charge(); !s.ok()) return s;
  return record;
}

SessionTrace ProtocolSession::Run(
    absl::Span<const std::vector<TokenId>> queries) {
  SessionTrace trace;
  trace.records.reserve(queries.size());
  for (const std::vector<TokenId>& q : queries) {
    absl::StatusOr<QueryRecord> r = Respond(q);
    if (!r.ok()) {
      trace.status = r.status();
      break;
    }
    trace.records.push_back(*std::move(r));
  }
  return trace;
}

}  // namespace pmixed
