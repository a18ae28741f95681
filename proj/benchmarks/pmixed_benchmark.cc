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

#include <memory>
#include <vector>

#include "benchmark/benchmark.h"
#include "pmixed/accountant.h"
#include "pmixed/distribution.h"
#include "pmixed/divergence.h"
#include "pmixed/language_model.h"
#include "pmixed/mollifier.h"
#include "pmixed/protocol.h"
#include "pmixed/random.h"

namespace pmixed {
namespace {

Distribution Random(size_t size, RandomSource& rng) {
  std::vector<double> w(size);
  double sum = 0.0;
  for (double& x : w) sum += (x = rng.UniformDouble() + 1e-12);
  for (double& x : w) x /= sum;
  return *Distribution::Create(std::move(w));
}

void BM_RenyiDivergence(benchmark::State& state) {
  RandomSource rng(1);
  const Distribution p = Random(state.range(0), rng);
  const Distribution q = Random(state.range(0), rng);
  const RenyiOrder alpha = *RenyiOrder::Finite(3.0);
  for (auto _ : state) benchmark::DoNotOptimize(RenyiDivergence(p, q, alpha));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RenyiDivergence)->Range(64, 1 << 16);

void BM_SolveLambda(benchmark::State& state) {
  RandomSource rng(2);
  const Distribution p = Random(state.range(0), rng);
  const Distribution p0 = Random(state.range(0), rng);
  const RenyiOrder alpha = *RenyiOrder::Finite(3.0);
  const MollifierRadius beta = *MollifierRadius::Create(0.01);
  for (auto _ : state)
    benchmark::DoNotOptimize(SolveLambda(p, p0, alpha, beta));
}
BENCHMARK(BM_SolveLambda)->Range(64, 1 << 16);

void BM_SolveBetaStar(benchmark::State& state) {
  const PrivacyParams params;
  for (auto _ : state) {
    benchmark::DoNotOptimize(SolveBetaStar(params, EpsMode::kConservative));
  }
}
BENCHMARK(BM_SolveBetaStar);

// One protocol query with the default parameters over fixed member outputs.
void BM_ProtocolRespond(benchmark::State& state) {
  const size_t vocab = state.range(0);
  RandomSource rng(3);
  PrivacyParams params;
  params.query_budget = int64_t{1} << 40;
  params.global_epsilon = 8.0 * (params.query_budget / 1024);
  std::vector<ModelHandle> ensemble;
  for (int i = 0; i < params.ensemble_size; ++i) {
    ensemble.push_back(std::make_shared<TableModel>(vocab, Random(vocab, rng)));
  }
  ModelHandle public_model =
      std::make_shared<TableModel>(vocab, Random(vocab, rng));
  auto session = ProtocolSession::Create(ensemble, public_model, params,
                                         SessionOptions{.seed = 4});
  if (!session.ok()) {
    state.SkipWithError(std::string(session.status().message()).c_str());
    return;
  }
  const TokenId context[] = {1};
  for (auto _ : state) benchmark::DoNotOptimize(session->Respond(context));
}
BENCHMARK(BM_ProtocolRespond)->Range(64, 1 << 14);

}  // namespace
}  // namespace pmixed

BENCHMARK_MAIN();
