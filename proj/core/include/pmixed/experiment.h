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

// Desk-scale experiments: three arms (public model, non-private ensemble
// average, private protocol) scored by test-set perplexity, plus one-axis
// sweeps over the privacy parameters.
//
// Every scored position of the private arm is a released distribution and
// is charged against the session budget, so at most T positions are scored.
// All arms score the same positions: the first `eval_positions` tokens of
// the test corpus (T when unset).

#ifndef PMIXED_EXPERIMENT_H_
#define PMIXED_EXPERIMENT_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "absl/types/span.h"
#include "pmixed/accountant.h"
#include "pmixed/corpus.h"
#include "pmixed/language_model.h"
#include "pmixed/ngram_model.h"
#include "pmixed/vocabulary.h"

namespace pmixed {

inline constexpr int kDefaultComparisonRuns = 32;
inline constexpr int kDefaultSweepRuns = 8;

struct ExperimentConfig {
  std::string private_corpus_path;
  std::string public_corpus_path;
  std::string test_corpus_path;
  std::string vocab_path;
  std::string output_path;  // Empty means stdout.

  int order = kDefaultNGramOrder;
  double smoothing_k = kDefaultSmoothingK;
  PrivacyParams privacy;
  EpsMode mode = EpsMode::kConservative;
  uint64_t seed = 0;
  int runs = kDefaultComparisonRuns;
  int64_t eval_positions = 0;  // 0 means T.

  // Checks values and that every input path exists.
  absl::Status Validate() const;
  int64_t EffectiveEvalPositions() const;
};

// Reads a JSON config. Relative paths are resolved against the directory of
// the config file. Missing keys keep their defaults; a missing "runs" key
// gives `default_runs`.
absl::StatusOr<ExperimentConfig> LoadExperimentConfig(
    const std::string& path, int default_runs = kDefaultComparisonRuns);

struct ExperimentData {
  Vocabulary vocab;
  std::vector<TokenSequence> private_docs;
  std::vector<TokenSequence> public_docs;
  std::vector<TokenSequence> test_docs;
};

absl::StatusOr<ExperimentData> LoadExperimentData(
    const ExperimentConfig& config);

struct TrainedModels {
  std::vector<ModelHandle> ensemble;
  ModelHandle public_model;
};

// Partitions the private documents with `config.seed` and trains one model
// per shard, plus the public model.
absl::StatusOr<TrainedModels> TrainModels(const ExperimentData& data,
                                          const ExperimentConfig& config);

inline constexpr absl::string_view kPublicArm = "public";
inline constexpr absl::string_view kEnsembleArm = "ensemble";
inline constexpr absl::string_view kPrivateArm = "pmixed";

struct RunResult {
  int run = 0;
  uint64_t seed = 0;
  bool ok = false;
  double perplexity = 0.0;
  int64_t positions = 0;
  int64_t queries_charged = 0;  // Private arm only.
  std::string error;
};

struct ArmReport {
  std::string name;
  std::vector<RunResult> runs;
  bool failed = false;  // Some run failed; statistics cover the rest.
  // Over successful runs. Sample standard deviation, 0 for a single run.
  double mean = 0.0;
  double stddev = 0.0;
};

struct ComparisonResult {
  std::optional<AccountantRecord> accountant;
  std::string accountant_error;
  int64_t eval_positions = 0;
  std::vector<ArmReport> arms;  // public, ensemble, pmixed.

  const ArmReport* Arm(absl::string_view name) const;
};

enum class SweepAxis {
  kGlobalEpsilon,
  kQueryBudget,
  kEnsembleSize,
  kSamplingRate,
  kAlpha
};

std::string SweepAxisName(SweepAxis axis);  // eps_g, T, N, q, alpha.
absl::StatusOr<SweepAxis> ParseSweepAxis(absl::string_view name);

// `config` with the axis set to `value`. Fails if the value does not fit the
// axis (non-integral N, T or alpha).
absl::StatusOr<ExperimentConfig> WithAxisValue(const ExperimentConfig& config,
                                               SweepAxis axis, double value);

struct SweepRow {
  double value = 0.0;
  absl::Status status;  // Setup failure for this value.
  ComparisonResult result;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<uint64_t> seeds;  // Run r uses seeds[r] = seed + r.
  std::optional<ComparisonResult> comparison;
  std::optional<SweepAxis> axis;
  std::vector<SweepRow> sweep;
};

// Mean and sample standard deviation.
void Summarize(ArmReport& arm);

absl::StatusOr<ComparisonResult> CompareOnModels(
    const ExperimentData& data, const TrainedModels& models,
    const ExperimentConfig& config);

absl::StatusOr<ExperimentReport> RunComparison(const ExperimentConfig& config);
absl::StatusOr<ExperimentReport> RunSweep(const ExperimentConfig& config,
                                          SweepAxis axis,
                                          absl::Span<const double> values);

}  // namespace pmixed

#endif  // PMIXED_EXPERIMENT_H_
