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

#include "pmixed/experiment.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <utility>

#include "absl/strings/str_format.h"
#include "nlohmann/json.hpp"
#include "pmixed/perplexity.h"
#include "pmixed/protocol.h"

namespace pmixed {
namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

absl::Status RequireFile(absl::string_view field, const std::string& path) {
  if (path.empty()) {
    return absl::InvalidArgumentError(absl::StrFormat("%s is not set", field));
  }
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) {
    return absl::NotFoundError(
        absl::StrFormat("%s '%s' does not exist", field, path));
  }
  return absl::OkStatus();
}

absl::StatusOr<std::vector<TokenSequence>> ReadEncoded(
    const Vocabulary& vocab, const std::string& path) {
  absl::StatusOr<std::vector<std::string>> docs = ReadDocuments(path);
  if (!docs.ok()) return docs.status();
  return EncodeDocuments(vocab, *docs);
}

std::string Resolve(const fs::path& base, const std::string& p) {
  if (p.empty() || fs::path(p).is_absolute()) return p;
  return (base / p).lexically_normal().string();
}

bool IsIntegral(double v) { return std::isfinite(v) && v == std::floor(v); }

RunResult FailedRun(int run, uint64_t seed, const absl::Status& status) {
  RunResult r{.run = run, .seed = seed};
  r.error = std::string(status.message());
  return r;
}

// Baseline arms are deterministic, so one evaluation serves every run.
ArmReport DeterministicArm(absl::string_view name, const LanguageModel& model,
                           absl::Span<const TokenSequence> test,
                           int64_t positions, const ExperimentConfig& config) {
  ArmReport arm{.name = std::string(name)};
  absl::StatusOr<PerplexityResult> ppl =
      ModelPerplexity(model, test, positions);
  for (int r = 0; r < config.runs; ++r) {
    const uint64_t seed = config.seed + static_cast<uint64_t>(r);
    if (!ppl.ok()) {
      arm.runs.push_back(FailedRun(r, seed, ppl.status()));
      continue;
    }
    arm.runs.push_back(RunResult{.run = r,
                                 .seed = seed,
                                 .ok = true,
                                 .perplexity = ppl->perplexity,
                                 .positions = ppl->positions});
  }
  Summarize(arm);
  return arm;
}

}  // namespace

absl::Status ExperimentConfig::Validate() const {
  if (absl::Status s = RequireFile("private_corpus", private_corpus_path);
      !s.ok()) {
    return s;
  }
  if (absl::Status s = RequireFile("public_corpus", public_corpus_path);
      !s.ok()) {
    return s;
  }
  if (absl::Status s = RequireFile("test_corpus", test_corpus_path); !s.ok()) {
    return s;
  }
  if (absl::Status s = RequireFile("vocab", vocab_path); !s.ok()) return s;
  if (order < 1) return absl::InvalidArgumentError("order must be >= 1");
  if (!(smoothing_k > 0.0) || !std::isfinite(smoothing_k)) {
    return absl::InvalidArgumentError("smoothing_k must be positive");
  }
  if (runs < 1) return absl::InvalidArgumentError("runs must be >= 1");
  if (eval_positions < 0) {
    return absl::InvalidArgumentError("eval_positions must be >= 0");
  }
  return privacy.Validate();
}

int64_t ExperimentConfig::EffectiveEvalPositions() const {
  return eval_positions > 0 ? eval_positions : privacy.query_budget;
}

absl::StatusOr<ExperimentConfig> LoadExperimentConfig(const std::string& path,
                                                      int default_runs) {
  std::ifstream in(path);
  if (!in) {
    return absl::NotFoundError(
        absl::StrFormat("cannot open config '%s'", path));
  }
  std::stringstream buf;
  buf << in.rdbuf();
  json j = json::parse(buf.str(), nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    return absl::InvalidArgumentError(
        absl::StrFormat("config '%s' is not a JSON object", path));
  }
  const fs::path base = fs::path(path).parent_path();
  ExperimentConfig c;
  try {
    c.private_corpus_path = Resolve(base, j.value("private_corpus", ""));
    c.public_corpus_path = Resolve(base, j.value("public_corpus", ""));
    c.test_corpus_path = Resolve(base, j.value("test_corpus", ""));
    c.vocab_path = Resolve(base, j.value("vocab", ""));
    c.output_path = Resolve(base, j.value("output", ""));
    c.order = j.value("order", c.order);
    c.smoothing_k = j.value("smoothing_k", c.smoothing_k);
    c.privacy.global_epsilon = j.value("eps_g", c.privacy.global_epsilon);
    c.privacy.delta = j.value("delta", c.privacy.delta);
    c.privacy.query_budget = j.value("T", c.privacy.query_budget);
    c.privacy.alpha = j.value("alpha", c.privacy.alpha);
    c.privacy.sampling_rate = j.value("q", c.privacy.sampling_rate);
    c.privacy.ensemble_size = j.value("N", c.privacy.ensemble_size);
    c.seed = j.value("seed", c.seed);
    c.runs = j.value("runs", default_runs);
    c.eval_positions = j.value("eval_positions", c.eval_positions);
    if (j.contains("mode")) {
      absl::StatusOr<EpsMode> mode =
          ParseEpsMode(j.at("mode").get<std::string>());
      if (!mode.ok()) return mode.status();
      c.mode = *mode;
    }
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrFormat("bad config field in '%s': %s", path, e.what()));
  }
  return c;
}

absl::StatusOr<ExperimentData> LoadExperimentData(
    const ExperimentConfig& config) {
  absl::StatusOr<Vocabulary> vocab = Vocabulary::Load(config.vocab_path);
  if (!vocab.ok()) return vocab.status();
  absl::StatusOr<std::vector<TokenSequence>> priv =
      ReadEncoded(*vocab, config.private_corpus_path);
  if (!priv.ok()) return priv.status();
  absl::StatusOr<std::vector<TokenSequence>> pub =
      ReadEncoded(*vocab, config.public_corpus_path);
  if (!pub.ok()) return pub.status();
  absl::StatusOr<std::vector<TokenSequence>> test =
      ReadEncoded(*vocab, config.test_corpus_path);
  if (!test.ok()) return test.status();
  return ExperimentData{.vocab = *std::move(vocab),
                        .private_docs = *std::move(priv),
                        .public_docs = *std::move(pub),
                        .test_docs = *std::move(test)};
}

absl::StatusOr<TrainedModels> TrainModels(const ExperimentData& data,
                                          const ExperimentConfig& config) {
  const int n = config.privacy.ensemble_size;
  absl::StatusOr<Partition> partition =
      PartitionCorpus(data.private_docs, n, config.seed);
  if (!partition.ok()) return partition.status();
  TrainedModels models;
  models.ensemble.reserve(n);
  for (int i = 0; i < n; ++i) {
    const std::vector<TokenSequence> shard =
        partition->Shard(data.private_docs, i);
    absl::StatusOr<NGramModel> m = NGramModel::Train(
        shard, config.order, config.smoothing_k, data.vocab.size());
    if (!m.ok()) return m.status();
    models.ensemble.push_back(
        std::make_shared<const NGramModel>(*std::move(m)));
  }
  absl::StatusOr<NGramModel> pub = BuildPublicModel(
      data.public_docs, config.order, config.smoothing_k, data.vocab.size());
  if (!pub.ok()) return pub.status();
  models.public_model = std::make_shared<const NGramModel>(*std::move(pub));
  return models;
}

const ArmReport* ComparisonResult::Arm(absl::string_view name) const {
  for (const ArmReport& a : arms) {
    if (a.name == name) return &a;
  }
  return nullptr;
}

std::string SweepAxisName(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kGlobalEpsilon:
      return "eps_g";
    case SweepAxis::kQueryBudget:
      return "T";
    case SweepAxis::kEnsembleSize:
      return "N";
    case SweepAxis::kSamplingRate:
      return "q";
    case SweepAxis::kAlpha:
      return "alpha";
  }
  return "unknown";
}

absl::StatusOr<SweepAxis> ParseSweepAxis(absl::string_view name) {
  for (SweepAxis a : {SweepAxis::kGlobalEpsilon, SweepAxis::kQueryBudget,
                      SweepAxis::kEnsembleSize, SweepAxis::kSamplingRate,
                      SweepAxis::kAlpha}) {
    if (SweepAxisName(a) == name) return a;
  }
  return absl::InvalidArgumentError(absl::StrFormat(
      "unknown sweep axis '%s' (want eps_g, T, N, q or alpha)", name));
}

absl::StatusOr<ExperimentConfig> WithAxisValue(const ExperimentConfig& config,
                                               SweepAxis axis, double value) {
  ExperimentConfig c = config;
  const bool integral_axis = axis == SweepAxis::kQueryBudget ||
                             axis == SweepAxis::kEnsembleSize ||
                             axis == SweepAxis::kAlpha;
  if (integral_axis && !IsIntegral(value)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "%s needs integer values, got %g", SweepAxisName(axis), value));
  }
  switch (axis) {
    case SweepAxis::kGlobalEpsilon:
      c.privacy.global_epsilon = value;
      break;
    case SweepAxis::kQueryBudget:
      c.privacy.query_budget = static_cast<int64_t>(value);
      break;
    case SweepAxis::kEnsembleSize:
      c.privacy.ensemble_size = static_cast<int>(value);
      break;
    case SweepAxis::kSamplingRate:
      c.privacy.sampling_rate = value;
      break;
    case SweepAxis::kAlpha:
      c.privacy.alpha = static_cast<int>(value);
      break;
  }
  if (absl::Status s = c.privacy.Validate(); !s.ok()) return s;
  return c;
}

void Summarize(ArmReport& arm) {
  // Deviations from the first value, so identical runs give stddev 0.
  std::vector<double> ok;
  arm.failed = false;
  for (const RunResult& r : arm.runs) {
    if (r.ok) {
      ok.push_back(r.perplexity);
    } else {
      arm.failed = true;
    }
  }
  arm.mean = 0.0;
  arm.stddev = 0.0;
  if (ok.empty()) return;
  const double ref = ok.front();
  double shift = 0.0;
  for (double v : ok) shift += v - ref;
  shift /= static_cast<double>(ok.size());
  arm.mean = ref + shift;
  if (ok.size() < 2) return;
  double ss = 0.0;
  for (double v : ok) ss += (v - ref - shift) * (v - ref - shift);
  arm.stddev = std::sqrt(ss / static_cast<double>(ok.size() - 1));
}

absl::StatusOr<ComparisonResult> CompareOnModels(
    const ExperimentData& data, const TrainedModels& models,
    const ExperimentConfig& config) {
  ComparisonResult result;
  result.eval_positions = config.EffectiveEvalPositions();
  const absl::Span<const TokenSequence> test(data.test_docs);

  result.arms.push_back(DeterministicArm(kPublicArm, *models.public_model, test,
                                         result.eval_positions, config));

  absl::StatusOr<std::unique_ptr<EnsembleAverageModel>> avg =
      EnsembleAverageModel::Create(models.ensemble);
  if (!avg.ok()) return avg.status();
  result.arms.push_back(DeterministicArm(kEnsembleArm, **avg, test,
                                         result.eval_positions, config));

  absl::StatusOr<AccountantRecord> record =
      ComputeAccountantRecord(config.privacy, config.mode);
  if (record.ok()) {
    result.accountant = *record;
  } else {
    result.accountant_error = std::string(record.status().message());
  }

  ArmReport arm{.name = std::string(kPrivateArm)};
  for (int r = 0; r < config.runs; ++r) {
    const uint64_t seed = config.seed + static_cast<uint64_t>(r);
    if (!record.ok()) {
      arm.runs.push_back(FailedRun(r, seed, record.status()));
      continue;
    }
    SessionOptions options{.mode = config.mode, .seed = seed};
    absl::StatusOr<ProtocolSession> session = ProtocolSession::Create(
        models.ensemble, models.public_model, config.privacy, options);
    if (!session.ok()) {
      arm.runs.push_back(FailedRun(r, seed, session.status()));
      continue;
    }
    PerplexityResult partial;
    absl::StatusOr<PerplexityResult> ppl =
        ProtocolPerplexity(*session, test, result.eval_positions, &partial);
    RunResult run{.run = r, .seed = seed};
    run.queries_charged = session->ledger().queries_answered();
    if (ppl.ok()) {
      run.ok = true;
      run.perplexity = ppl->perplexity;
      run.positions = ppl->positions;
    } else {
      run.positions = partial.positions;
      run.error = std::string(ppl.status().message());
    }
    arm.runs.push_back(std::move(run));
  }
  Summarize(arm);
  result.arms.push_back(std::move(arm));
  return result;
}

absl::StatusOr<ExperimentReport> RunComparison(const ExperimentConfig& config) {
  if (absl::Status s = config.Validate(); !s.ok()) return s;
  absl::StatusOr<ExperimentData> data = LoadExperimentData(config);
  if (!data.ok()) return data.status();
  absl::StatusOr<TrainedModels> models = TrainModels(*data, config);
  if (!models.ok()) return models.status();
  absl::StatusOr<ComparisonResult> result =
      CompareOnModels(*data, *models, config);
  if (!result.ok()) return result.status();

  ExperimentReport report{.config = config};
  for (int r = 0; r < config.runs; ++r) report.seeds.push_back(config.seed + r);
  report.comparison = *std::move(result);
  return report;
}

absl::StatusOr<ExperimentReport> RunSweep(const ExperimentConfig& config,
                                          SweepAxis axis,
                                          absl::Span<const double> values) {
  if (values.empty()) {
    return absl::InvalidArgumentError("sweep needs at least one value");
  }
  if (absl::Status s = config.Validate(); !s.ok()) return s;
  absl::StatusOr<ExperimentData> data = LoadExperimentData(config);
  if (!data.ok()) return data.status();

  // Only N changes the trained models.
  std::map<int, TrainedModels> cache;
  ExperimentReport report{.config = config, .axis = axis};
  for (int r = 0; r < config.runs; ++r) report.seeds.push_back(config.seed + r);
  for (double value : values) {
    SweepRow row{.value = value};
    absl::StatusOr<ExperimentConfig> c = WithAxisValue(config, axis, value);
    if (!c.ok()) {
      row.status = c.status();
      report.sweep.push_back(std::move(row));
      continue;
    }
    const int n = c->privacy.ensemble_size;
    auto it = cache.find(n);
    if (it == cache.end()) {
      absl::StatusOr<TrainedModels> models = TrainModels(*data, *c);
      if (!models.ok()) {
        row.status = models.status();
        report.sweep.push_back(std::move(row));
        continue;
      }
      it = cache.emplace(n, *std::move(models)).first;
    }
    absl::StatusOr<ComparisonResult> result =
        CompareOnModels(*data, it->second, *c);
    if (result.ok()) {
      row.result = *std::move(result);
    } else {
      row.status = result.status();
    }
    report.sweep.push_back(std::move(row));
  }
  return report;
}

}  // namespace pmixed
