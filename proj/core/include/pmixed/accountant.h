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

// Renyi-DP accounting for private ensemble prediction.
//
// The protocol answers each query by mollifying the output of every
// subsampled ensemble member toward a public distribution with radius beta,
// averaging, and sampling. This header collects the arithmetic that links
// beta to privacy loss:
//
//   * BetaMax: the largest radius for which one unsubsampled query is
//     (alpha, eps_G / T)-RDP.
//   * PerQueryEpsilon: the RDP loss of one query over a subset of a given
//     size, as a function of beta.
//   * SubsampledEpsilon: amplification by Poisson subsampling of the
//     ensemble (integer orders only).
//   * SolveBetaStar: the largest radius whose amplified loss fits in
//     eps_G / T.
//   * Compose / RdpToDp: composition over T queries and conversion to
//     (epsilon, delta)-DP for reporting.
//
// Everything is in nats.

#ifndef PMIXED_ACCOUNTANT_H_
#define PMIXED_ACCOUNTANT_H_

#include <cstdint>
#include <optional>
#include <string>

#include "absl/functional/function_ref.h"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "pmixed/mollifier.h"

namespace pmixed {

inline constexpr double kDefaultBetaTolerance = 1e-9;

struct PrivacyParams {
  double global_epsilon = 8.0;  // eps_G, RDP budget for the whole session.
  double delta = 1e-5;          // Only used when converting to (eps, delta).
  int64_t query_budget = 1024;  // T.
  int alpha = 3;                // Integer Renyi order >= 2.
  double sampling_rate = 0.03;  // q, Poisson inclusion probability.
  int ensemble_size = 80;       // N.

  absl::Status Validate() const;
};

// How the per-query loss feeding the amplification bound treats the subset
// size, which is only known after subsampling.
enum class EpsMode {
  // Evaluate at subset size N.
  kPaperFaithful,
  // Worst case over subset sizes 1..N.
  kConservative,
};

std::string EpsModeName(EpsMode mode);
absl::StatusOr<EpsMode> ParseEpsMode(absl::string_view name);

// Largest beta for which one query over all N models is
// (alpha, eps_G / T)-RDP:
//   log(N e^{(alpha-1) eps_G / T} + 1 - N) / (4 (alpha-1) alpha)   if N > 1
//   eps_G / (T alpha)                                             if N = 1
absl::StatusOr<MollifierRadius> BetaMax(int ensemble_size,
                                        double global_epsilon,
                                        int64_t query_budget, int alpha);

// RDP loss of one query answered from `subset_size` mollified models:
// 0 for an empty subset, beta * alpha for one model and
// log((s - 1 + e^{(alpha-1) 4 beta alpha}) / s) / (alpha - 1) otherwise.
double PerQueryEpsilon(double beta, int alpha, int subset_size);

// The order-k loss fed into the amplification bound. See EpsMode.
double BaseEpsilonForOrder(double beta, int k, int ensemble_size, EpsMode mode);

// Amplification by Poisson subsampling with rate q for integer alpha >= 2:
//   1/(alpha-1) log((1-q)^{alpha-1} (1 + (alpha-1) q)
//       + sum_{k=2}^{alpha} C(alpha,k) (1-q)^{alpha-k} q^k e^{(k-1) eps(k)})
// `eps_fn` is queried for every k in [2, alpha]. At q = 1 this is exactly
// eps_fn(alpha).
absl::StatusOr<double> SubsampledEpsilon(double q, int alpha,
                                         absl::FunctionRef<double(int)> eps_fn);

// Amplified per-query loss of the protocol at radius beta.
absl::StatusOr<double> ProtocolEpsilon(const PrivacyParams& params, double beta,
                                       EpsMode mode);

// Largest beta (within `tol`) with ProtocolEpsilon <= eps_G / T. The
// returned radius is always feasible.
absl::StatusOr<MollifierRadius> SolveBetaStar(
    const PrivacyParams& params, EpsMode mode,
    double tol = kDefaultBetaTolerance);

// Sequential composition of `query_budget` queries of equal loss.
double Compose(double per_query_epsilon, int64_t query_budget);

// (alpha, eps)-RDP to (eps', delta)-DP:
//   eps + log((alpha-1)/alpha) - (log delta + log alpha) / (alpha-1).
// Requires 0 < delta < 1.
double RdpToDp(int alpha, double epsilon, double delta);

// Radius bound from the infinite-order (pure DP) analysis:
// log(N e^{eps_G/T} + 1 - N) / (2 alpha).
double BetaInfiniteOrder(int ensemble_size, double global_epsilon,
                         int64_t query_budget, double alpha);

// The companion lower bound log(N - (N-1) e^{eps_G/T}) / (2 alpha), defined
// only while its log argument is positive.
std::optional<double> BetaInfiniteOrderLowerBound(int ensemble_size,
                                                  double global_epsilon,
                                                  int64_t query_budget,
                                                  double alpha);

// Everything reported about a session's privacy configuration.
struct AccountantRecord {
  PrivacyParams params;
  EpsMode mode;
  double beta_star;
  double per_query_epsilon;  // Amplified loss charged per query.
  double composed_epsilon;   // Compose(per_query_epsilon, T).
  double dp_epsilon;         // RdpToDp(alpha, composed_epsilon, delta).
};

absl::StatusOr<AccountantRecord> ComputeAccountantRecord(
    const PrivacyParams& params, EpsMode mode,
    double beta_tol = kDefaultBetaTolerance);

}  // namespace pmixed

#endif  // PMIXED_ACCOUNTANT_H_
