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

#include "pmixed/accountant.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "absl/strings/str_format.h"

namespace pmixed {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMaxBracketDoublings = 64;
constexpr int kMaxBetaIterations = 200;

// log C(n, k).
double LogBinomial(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double ScaledLog1p(int n, double x) {
  if (n == 0) return 0.0;
  return n * std::log1p(x);
}

double LogSumExp(const std::vector<double>& terms) {
  double shift = -kInf;
  for (double t : terms) shift = std::max(shift, t);
  if (shift == kInf || shift == -kInf) return shift;
  double sum = 0.0;
  for (double t : terms) sum += std::exp(t - shift);
  return shift + std::log(sum);
}

}  // namespace

absl::Status PrivacyParams::Validate() const {
  if (!(global_epsilon > 0.0) || !std::isfinite(global_epsilon)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "global epsilon must be finite and > 0, got %g", global_epsilon));
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("delta must lie in (0, 1), got %g", delta));
  }
  if (query_budget < 1) {
    return absl::InvalidArgumentError(
        absl::StrFormat("query budget must be >= 1, got %d", query_budget));
  }
  if (alpha < 2) {
    return absl::InvalidArgumentError(
        absl::StrFormat("alpha must be an integer >= 2, got %d", alpha));
  }
  if (!(sampling_rate > 0.0 && sampling_rate <= 1.0)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "sampling rate must lie in (0, 1], got %g", sampling_rate));
  }
  if (ensemble_size < 1) {
    return absl::InvalidArgumentError(
        absl::StrFormat("ensemble size must be >= 1, got %d", ensemble_size));
  }
  return absl::OkStatus();
}

std::string EpsModeName(EpsMode mode) {
  switch (mode) {
    case EpsMode::kPaperFaithful:
      return "paper-faithful";
    case EpsMode::kConservative:
      return "conservative";
  }
  return "unknown";
}

absl::StatusOr<EpsMode> ParseEpsMode(absl::string_view name) {
  if (name == "paper-faithful") return EpsMode::kPaperFaithful;
  if (name == "conservative") return EpsMode::kConservative;
  return absl::InvalidArgumentError(absl::StrFormat(
      "unknown mode '%s' (expected paper-faithful or conservative)", name));
}

absl::StatusOr<MollifierRadius> BetaMax(int ensemble_size,
                                        double global_epsilon,
                                        int64_t query_budget, int alpha) {
  PrivacyParams params;
  params.global_epsilon = global_epsilon;
  params.query_budget = query_budget;
  params.alpha = alpha;
  params.ensemble_size = ensemble_size;
  if (absl::Status s = params.Validate(); !s.ok()) return s;

  const double per_query = global_epsilon / static_cast<double>(query_budget);
  if (ensemble_size == 1) return MollifierRadius::Create(per_query / alpha);
  // N e^x + 1 - N == 1 + N (e^x - 1); the expm1 form keeps precision when
  // the per-query budget is tiny.
  const double x = (alpha - 1) * per_query;
  const double beta =
      std::log1p(ensemble_size * std::expm1(x)) / (4.0 * (alpha - 1) * alpha);
  return MollifierRadius::Create(beta);
}

double PerQueryEpsilon(double beta, int alpha, int subset_size) {
  if (subset_size <= 0) return 0.0;
  if (subset_size == 1) return beta * alpha;
  const double x = (alpha - 1) * 4.0 * beta * alpha;
  const double s = subset_size;
  double log_ratio;
  if (x < 1.0) {
    log_ratio = std::log1p(std::expm1(x) / s);
  } else {
    log_ratio = x + std::log1p((s - 1.0) * std::exp(-x)) - std::log(s);
  }
  return log_ratio / (alpha - 1);
}

double BaseEpsilonForOrder(double beta, int k, int ensemble_size,
                           EpsMode mode) {
  if (mode == EpsMode::kPaperFaithful) {
    return PerQueryEpsilon(beta, k, ensemble_size);
  }
  double worst = 0.0;
  for (int s = 1; s <= ensemble_size; ++s) {
    worst = std::max(worst, PerQueryEpsilon(beta, k, s));
  }
  return worst;
}

absl::StatusOr<double> SubsampledEpsilon(
    double q, int alpha, absl::FunctionRef<double(int)> eps_fn) {
  if (alpha < 2) {
    return absl::OutOfRangeError(absl::StrFormat(
        "subsampling amplification needs an integer order >= 2, got %d",
        alpha));
  }
  if (!(q > 0.0 && q <= 1.0)) {
    return absl::OutOfRangeError(
        absl::StrFormat("sampling rate must lie in (0, 1], got %g", q));
  }
  // Every term but k = alpha carries a factor (1 - q).
  if (q == 1.0) return eps_fn(alpha);

  std::vector<double> terms;
  terms.reserve(alpha);
  terms.push_back(ScaledLog1p(alpha - 1, -q) + std::log1p((alpha - 1) * q));
  const double log_q = std::log(q);
  for (int k = 2; k <= alpha; ++k) {
    const double eps = eps_fn(k);
    if (std::isnan(eps) || eps < 0.0) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "order-%d epsilon must be nonnegative, got %g", k, eps));
    }
    if (eps == kInf) return kInf;
    terms.push_back(LogBinomial(alpha, k) + ScaledLog1p(alpha - k, -q) +
                    k * log_q + (k - 1) * eps);
  }
  return std::max(0.0, LogSumExp(terms) / (alpha - 1));
}

absl::StatusOr<double> ProtocolEpsilon(const PrivacyParams& params, double beta,
                                       EpsMode mode) {
  return SubsampledEpsilon(params.sampling_rate, params.alpha, [&](int k) {
    return BaseEpsilonForOrder(beta, k, params.ensemble_size, mode);
  });
}

absl::StatusOr<MollifierRadius> SolveBetaStar(const PrivacyParams& params,
                                              EpsMode mode, double tol) {
  if (absl::Status s = params.Validate(); !s.ok()) return s;
  if (!(tol > 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("beta tolerance must be positive, got %g", tol));
  }
  const double target =
      params.global_epsilon / static_cast<double>(params.query_budget);
  auto feasible = [&](double beta) -> absl::StatusOr<bool> {
    absl::StatusOr<double> eps = ProtocolEpsilon(params, beta, mode);
    if (!eps.ok()) return eps.status();
    return *eps <= target;
  };

  double lo = 0.0;
  double hi = 1.0;
  for (int i = 0;; ++i) {
    absl::StatusOr<bool> ok = feasible(hi);
    if (!ok.ok()) return ok.status();
    if (!*ok) break;
    if (i == kMaxBracketDoublings) {
      return absl::InternalError(
          "could not bracket beta*: loss never exceeds "
          "the per-query budget");
    }
    lo = hi;
    hi *= 2.0;
  }
  for (int i = 0; i < kMaxBetaIterations && hi - lo > tol; ++i) {
    const double mid = 0.5 * (lo + hi);
    absl::StatusOr<bool> ok = feasible(mid);
    if (!ok.ok()) return ok.status();
    if (*ok) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return MollifierRadius::Create(lo);
}

double Compose(double per_query_epsilon, int64_t query_budget) {
  return static_cast<double>(query_budget) * per_query_epsilon;
}

double RdpToDp(int alpha, double epsilon, double delta) {
  const double a = alpha;
  return epsilon + std::log((a - 1.0) / a) -
         (std::log(delta) + std::log(a)) / (a - 1.0);
}

double BetaInfiniteOrder(int ensemble_size, double global_epsilon,
                         int64_t query_budget, double alpha) {
  const double per_query = global_epsilon / static_cast<double>(query_budget);
  return std::log1p(ensemble_size * std::expm1(per_query)) / (2.0 * alpha);
}

std::optional<double> BetaInfiniteOrderLowerBound(int ensemble_size,
                                                  double global_epsilon,
                                                  int64_t query_budget,
                                                  double alpha) {
  const double per_query = global_epsilon / static_cast<double>(query_budget);
  // N - (N-1) e^x == 1 - (N-1)(e^x - 1).
  const double arg = -(ensemble_size - 1) * std::expm1(per_query);
  if (!(arg > -1.0)) return std::nullopt;
  return std::log1p(arg) / (2.0 * alpha);
}

absl::StatusOr<AccountantRecord> ComputeAccountantRecord(
    const PrivacyParams& params, EpsMode mode, double beta_tol) {
  absl::StatusOr<MollifierRadius> beta = SolveBetaStar(params, mode, beta_tol);
  if (!beta.ok()) return beta.status();
  absl::StatusOr<double> per_query =
      ProtocolEpsilon(params, beta->beta(), mode);
  if (!per_query.ok()) return per_query.status();

  AccountantRecord record{.params = params, .mode = mode};
  record.beta_star = beta->beta();
  record.per_query_epsilon = *per_query;
  record.composed_epsilon = Compose(*per_query, params.query_budget);
  record.dp_epsilon =
      RdpToDp(params.alpha, record.composed_epsilon, params.delta);
  return record;
}

}  // namespace pmixed
