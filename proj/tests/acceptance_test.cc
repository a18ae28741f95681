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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/str_format.h"
#include "pmixed/accountant.h"
#include "pmixed/distribution.h"
#include "pmixed/divergence.h"
#include "pmixed/experiment.h"
#include "pmixed/language_model.h"
#include "pmixed/mollifier.h"
#include "pmixed/protocol.h"
#include "pmixed/random.h"
#include "test_util.h"

namespace pmixed {
namespace {

using testing::RandomDistribution;
using testing::Unwrap;

constexpr uint64_t kSeed = 20261015;
const std::string kFixtureDir = PMIXED_FIXTURE_DIR;

struct Outcome {
  bool pass = true;
  std::string detail;
};

double D(const Distribution& p, const Distribution& q, double alpha) {
  return Unwrap(RenyiDivergence(p, q, Unwrap(RenyiOrder::Finite(alpha))));
}

double SymD(const Distribution& p, const Distribution& q, double alpha) {
  return Unwrap(
      SymmetricRenyiDivergence(p, q, Unwrap(RenyiOrder::Finite(alpha))));
}

// 1. Divergence axioms and structural inequalities.
Outcome DivergenceAxioms() {
  constexpr int kTuples = 1000;
  constexpr double kSlack = 1e-9;
  RandomSource rng(kSeed);
  auto size = [&] { return 2 + rng.UniformIndex(63); };
  auto order = [&] { return 1.1 + 8.9 * rng.UniformDouble(); };
  int nonneg = 0, identity = 0, monotone = 0, triangle = 0, quasi = 0,
      second = 0;
  for (int i = 0; i < kTuples; ++i) {
    const size_t n = size();
    Distribution p = RandomDistribution(n, rng);
    Distribution q = RandomDistribution(n, rng);
    const double a = order();
    if (D(p, q, a) < -kSlack) ++nonneg;
    if (D(p, p, a) != 0.0) ++identity;
  }
  for (int i = 0; i < kTuples; ++i) {
    const size_t n = size();
    Distribution p = RandomDistribution(n, rng);
    Distribution q = RandomDistribution(n, rng);
    double a = order(), b = order();
    if (a > b) std::swap(a, b);
    if (D(p, q, a) > D(p, q, b) + kSlack) ++monotone;
  }
  for (int i = 0; i < kTuples; ++i) {
    const size_t n = size();
    Distribution p = RandomDistribution(n, rng);
    Distribution q = RandomDistribution(n, rng);
    Distribution r = RandomDistribution(n, rng);
    const double a = order();
    const double e1 = D(p, q, a) / a;
    const double e2 = D(q, r, a) / a;
    const double bound = std::pow(std::sqrt(e1) + std::sqrt(e2), 2) * a;
    if (D(p, r, a) > bound + kSlack) ++triangle;
  }
  for (int i = 0; i < kTuples; ++i) {
    const size_t n = size();
    Distribution p = RandomDistribution(n, rng);
    Distribution pp = RandomDistribution(n, rng);
    Distribution q = RandomDistribution(n, rng);
    Distribution qq = RandomDistribution(n, rng);
    const double s = rng.UniformDouble();
    const double a = order();
    const double lhs =
        D(Distribution::Mixture(pp, p, s), Distribution::Mixture(qq, q, s), a);
    if (lhs > std::max(D(p, q, a), D(pp, qq, a)) + kSlack) ++quasi;
  }
  for (int i = 0; i < kTuples; ++i) {
    const size_t n = size();
    Distribution p = RandomDistribution(n, rng);
    Distribution q = RandomDistribution(n, rng);
    Distribution qq = RandomDistribution(n, rng);
    const double s = rng.UniformDouble();
    const double a = order();
    const double lhs = D(p, Distribution::Mixture(qq, q, s), a);
    if (lhs > (1 - s) * D(p, q, a) + s * D(p, qq, a) + kSlack) ++second;
  }
  const int total = nonneg + identity + monotone + triangle + quasi + second;
  return {total == 0,
          absl::StrFormat("violations per %d tuples: nonnegativity %d, "
                          "identity %d, monotonicity %d, triangle-like %d, "
                          "quasi-convexity %d, second-argument convexity %d",
                          kTuples, nonneg, identity, monotone, triangle, quasi,
                          second)};
}

// 2. Mollifier projection against a grid scan.
Outcome MollifierCorrectness() {
  constexpr int kInstances = 500;
  constexpr int kGrid = 10000;
  constexpr double kTol = kDefaultLambdaTolerance;
  RandomSource rng(kSeed);
  int membership = 0, maximality = 0, grid = 0;
  double worst_gap = 0.0;
  for (int i = 0; i < kInstances; ++i) {
    const size_t n = 2 + rng.UniformIndex(63);
    Distribution p = RandomDistribution(n, rng);
    Distribution p0 = RandomDistribution(n, rng);
    const RenyiOrder a =
        Unwrap(RenyiOrder::Finite(1.1 + 8.9 * rng.UniformDouble()));
    // Log-uniform radius in [1e-4, 1].
    const MollifierRadius b = Unwrap(
        MollifierRadius::Create(std::pow(10.0, -4 * rng.UniformDouble())));
    MollificationResult r = Unwrap(SolveLambda(p, p0, a, b, kTol));
    auto feasible = [&](double lambda) {
      return Unwrap(
          InMollifier(Distribution::Mixture(p, p0, lambda), p0, a, b));
    };
    if (!Unwrap(InMollifier(r.projected, p0, a, b))) ++membership;
    if (r.lambda < 1.0 && feasible(std::min(1.0, r.lambda + 2 * kTol))) {
      ++maximality;
    }
    int best = 0;
    for (int j = kGrid; j >= 0; --j) {
      if (feasible(static_cast<double>(j) / kGrid)) {
        best = j;
        break;
      }
    }
    const double gap = std::abs(r.lambda - static_cast<double>(best) / kGrid);
    worst_gap = std::max(worst_gap, gap);
    if (gap > kTol + 1.0 / kGrid) ++grid;
  }
  return {membership + maximality + grid == 0,
          absl::StrFormat("%d instances: membership failures %d, maximality "
                          "failures %d, grid mismatches %d, max |lambda - "
                          "grid| %.3g",
                          kInstances, membership, maximality, grid, worst_gap)};
}

// 3. Full versus leave-one-out aggregates at beta_max with q = 1.
Outcome LeaveOneOut() {
  constexpr int kInstances = 200;
  constexpr int64_t kBudget = 1000;
  RandomSource rng(kSeed);
  int violations = 0;
  double worst_ratio = 0.0;
  for (int i = 0; i < kInstances; ++i) {
    const size_t vocab = 2 + rng.UniformIndex(9);
    const int n = 1 + static_cast<int>(rng.UniformIndex(6));
    const int alpha = 2 + static_cast<int>(rng.UniformIndex(3));
    const double per_query = 0.001 + 0.099 * rng.UniformDouble();
    const MollifierRadius beta =
        Unwrap(BetaMax(n, per_query * kBudget, kBudget, alpha));
    const RenyiOrder order = Unwrap(RenyiOrder::Finite(alpha));
    std::vector<Distribution> outputs;
    for (int m = 0; m < n; ++m)
      outputs.push_back(RandomDistribution(vocab, rng));
    Distribution p0 = RandomDistribution(vocab, rng);
    Distribution full =
        Unwrap(MollifyAndAggregate(outputs, p0, order, beta)).aggregate;
    for (int m = 0; m < n; ++m) {
      std::vector<Distribution> rest = outputs;
      rest.erase(rest.begin() + m);
      Distribution loo =
          Unwrap(MollifyAndAggregate(rest, p0, order, beta)).aggregate;
      const double d = SymD(full, loo, alpha);
      worst_ratio = std::max(worst_ratio, d / per_query);
      if (d > per_query + 1e-6) ++violations;
    }
  }
  return {violations == 0,
          absl::StrFormat("%d instances: violations %d, max divergence / "
                          "(eps_G/T) %.4f",
                          kInstances, violations, worst_ratio)};
}

// 4. Closed-form accountant values against tests/oracles/accountant_oracle.py.
Outcome AccountantFidelity() {
  struct Check {
    const char* name;
    double value;
    double oracle;
  };
  const Check checks[] = {
      {"beta_max(80,8,1024,3)", Unwrap(BetaMax(80, 8, 1024, 3)).beta(),
       0.033970154084113107},
      {"per_query_eps(0.01,3,2)", PerQueryEpsilon(0.01, 3, 2),
       0.063591393033240267},
      {"rdp_to_dp(3,8,1e-5)", RdpToDp(3, 8, 1e-5), 12.801691480042895},
      {"beta_infinite_order(80,8,1024,3)", BetaInfiniteOrder(80, 8, 1024, 3),
       0.081168834403906629},
  };
  bool pass = true;
  std::string detail;
  for (const Check& c : checks) {
    const bool ok =
        absl::StrFormat("%.5e", c.value) == absl::StrFormat("%.5e", c.oracle);
    pass = pass && ok;
    absl::StrAppendFormat(&detail, "%s%s=%.6g (oracle %.6g)%s",
                          detail.empty() ? "" : "; ", c.name, c.value, c.oracle,
                          ok ? "" : " MISMATCH");
  }
  return {pass, detail};
}

// 5. Poisson amplification consistency.
Outcome Amplification() {
  bool pass = true;
  std::string detail;
  for (int alpha = 2; alpha <= 6; ++alpha) {
    auto eps = [](int k) { return 0.05 * k * k; };
    if (Unwrap(SubsampledEpsilon(1.0, alpha, eps)) != eps(alpha)) {
      pass = false;
      absl::StrAppendFormat(&detail, "q=1 differs at alpha=%d; ", alpha);
    }
  }
  auto eps = [](int k) {
    return BaseEpsilonForOrder(0.1, k, 80, EpsMode::kConservative);
  };
  double previous = Unwrap(SubsampledEpsilon(0.1, 3, eps));
  for (double q : {1e-2, 1e-4, 1e-6, 1e-8}) {
    const double v = Unwrap(SubsampledEpsilon(q, 3, eps));
    if (!(v < previous) || v < 0) pass = false;
    previous = v;
  }
  if (previous > 1e-12) pass = false;
  absl::StrAppendFormat(&detail, "eps at q=1e-8 %.3g; ", previous);

  PrivacyParams full;
  full.sampling_rate = 1.0;
  const double star_q1 =
      Unwrap(SolveBetaStar(full, EpsMode::kPaperFaithful)).beta();
  const double beta_max = Unwrap(BetaMax(80, 8, 1024, 3)).beta();
  if (std::abs(star_q1 - beta_max) > 1e-6) pass = false;
  absl::StrAppendFormat(&detail, "beta* at q=1 %.9f vs beta_max %.9f; ",
                        star_q1, beta_max);

  for (EpsMode mode : {EpsMode::kConservative, EpsMode::kPaperFaithful}) {
    const double at_q = Unwrap(SolveBetaStar(PrivacyParams(), mode)).beta();
    const double at_1 = Unwrap(SolveBetaStar(full, mode)).beta();
    if (!(at_q > at_1)) pass = false;
    absl::StrAppendFormat(&detail, "%s beta* q=0.03 %.6f > q=1 %.6f; ",
                          EpsModeName(mode), at_q, at_1);
  }
  detail.resize(detail.size() - 2);
  return {pass, detail};
}

// 6. Budget enforcement with the default parameters.
Outcome Budget() {
  constexpr size_t kVocab = 8;
  RandomSource rng(kSeed);
  PrivacyParams params;
  std::vector<ModelHandle> ensemble;
  for (int i = 0; i < params.ensemble_size; ++i) {
    ensemble.push_back(
        std::make_shared<TableModel>(kVocab, RandomDistribution(kVocab, rng)));
  }
  ModelHandle public_model =
      std::make_shared<TableModel>(kVocab, RandomDistribution(kVocab, rng));
  ProtocolSession session = Unwrap(ProtocolSession::Create(
      ensemble, public_model, params, SessionOptions{.seed = kSeed}));
  int64_t answered = 0;
  for (int i = 0; i < 1024; ++i) {
    const TokenId context[] = {static_cast<TokenId>(i % kVocab)};
    if (session.Respond(context).ok()) ++answered;
  }
  const double spent = session.ledger().spent();
  const double expected = 1024 * session.accountant().per_query_epsilon;
  const absl::Status refused = session.Respond({}).status();
  const bool pass = answered == 1024 && std::abs(spent - expected) <= 1e-12 &&
                    spent <= params.global_epsilon &&
                    absl::IsResourceExhausted(refused);
  return {pass, absl::StrFormat("answered %d, spent %.9f = 1024 x %.9g (budget "
                                "%.1f), query 1025: %s",
                                answered, spent,
                                session.accountant().per_query_epsilon,
                                params.global_epsilon,
                                refused.ok() ? "answered" : "refused")};
}

ExperimentConfig FixtureConfig() {
  ExperimentConfig c =
      Unwrap(LoadExperimentConfig(kFixtureDir + "/config.json"));
  c.runs = 8;
  return c;
}

// 7. Perplexity ordering on the fixture corpus.
Outcome Ordering() {
  ExperimentReport report = Unwrap(RunComparison(FixtureConfig()));
  const ComparisonResult& r = *report.comparison;
  const ArmReport* pub = r.Arm(kPublicArm);
  const ArmReport* ens = r.Arm(kEnsembleArm);
  const ArmReport* priv = r.Arm(kPrivateArm);
  const double gain = (pub->mean - priv->mean) / pub->mean;
  const bool pass = !pub->failed && !ens->failed && !priv->failed &&
                    pub->mean > priv->mean && priv->mean > ens->mean &&
                    gain >= 0.02;
  return {pass,
          absl::StrFormat("public %.4f > pmixed %.4f > ensemble %.4f over %d "
                          "runs, improvement on public %.2f%%",
                          pub->mean, priv->mean, ens->mean, priv->runs.size(),
                          100 * gain)};
}

std::vector<double> SweepMeans(SweepAxis axis,
                               const std::vector<double>& values) {
  ExperimentReport report = Unwrap(RunSweep(FixtureConfig(), axis, values));
  std::vector<double> means;
  for (const SweepRow& row : report.sweep) {
    const ArmReport* priv =
        row.status.ok() ? row.result.Arm(kPrivateArm) : nullptr;
    means.push_back(priv != nullptr && !priv->failed ? priv->mean : NAN);
  }
  return means;
}

// 8. Sweep directionality over eps_G and alpha.
Outcome Directionality() {
  const std::vector<double> eps =
      SweepMeans(SweepAxis::kGlobalEpsilon, {2, 4, 8});
  const std::vector<double> alpha = SweepMeans(SweepAxis::kAlpha, {2, 3, 4});
  const bool eps_ok = eps[0] >= eps[1] && eps[1] >= eps[2];
  const bool alpha_ok = alpha[0] <= alpha[1] && alpha[1] <= alpha[2];
  return {
      eps_ok && alpha_ok,
      absl::StrFormat("pmixed over eps_G 2,4,8: %.4f %.4f %.4f; over "
                      "alpha 2,3,4: %.4f %.4f %.4f",
                      eps[0], eps[1], eps[2], alpha[0], alpha[1], alpha[2])};
}

std::string ReadFile(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

// 9. Byte-identical reports from two `compare` invocations.
Outcome Determinism() {
  const std::filesystem::path dir = std::filesystem::temp_directory_path();
  std::string outputs[2];
  for (int i = 0; i < 2; ++i) {
    const std::string path =
        (dir / absl::StrFormat("pmixed_acceptance_%d.jsonl", i)).string();
    const std::string cmd = absl::StrFormat(
        "'%s' compare --config '%s/config.json' --runs 8 > '%s'", PMIXED_BINARY,
        kFixtureDir, path);
    if (std::system(cmd.c_str()) != 0) {
      return {false, "compare exited nonzero"};
    }
    outputs[i] = ReadFile(path);
    std::filesystem::remove(path);
  }
  return {
      !outputs[0].empty() && outputs[0] == outputs[1],
      absl::StrFormat("two reports of %d bytes, %s", outputs[0].size(),
                      outputs[0] == outputs[1] ? "identical" : "different")};
}

struct Criterion {
  int id;
  const char* name;
  double time_limit_seconds;  // 0 means none.
  std::function<Outcome()> run;
};

int Main() {
  const Criterion criteria[] = {
      {1, "divergence axioms", 10, DivergenceAxioms},
      {2, "mollifier correctness", 30, MollifierCorrectness},
      {3, "leave-one-out privacy bound", 60, LeaveOneOut},
      {4, "accountant formula fidelity", 0, AccountantFidelity},
      {5, "amplification consistency", 0, Amplification},
      {6, "budget enforcement", 0, Budget},
      {7, "end-to-end ordering", 300, Ordering},
      {8, "sweep directionality", 0, Directionality},
      {9, "determinism", 0, Determinism},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o = c.run();
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (c.time_limit_seconds > 0 && seconds > c.time_limit_seconds) {
      o.pass = false;
      absl::StrAppendFormat(&o.detail, "; over the %.0f s limit",
                            c.time_limit_seconds);
    }
    if (!o.pass) ++failed;
    std::printf("[%s] criterion %d: %s: %s (%.2f s)\n",
                o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(),
                seconds);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n",
              static_cast<int>(std::size(criteria)) - failed,
              std::size(criteria));
  return failed == 0 ? 0 : 1;
}

}  // namespace
}  // namespace pmixed

int main() { return pmixed::Main(); }
