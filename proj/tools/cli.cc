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

#include "cli.h"

#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "pmixed/accountant.h"
#include "pmixed/corpus.h"
#include "pmixed/experiment.h"
#include "pmixed/model_snapshot.h"
#include "pmixed/protocol.h"
#include "pmixed/report.h"
#include "pmixed/vocabulary.h"

namespace pmixed {
namespace {

// Raised by a subcommand to exit with a diagnostic.
struct Failure {
  int code;
  std::string message;
  bool show_usage = false;
};

Failure Usage(const absl::Status& s) {
  return {kExitUsage, std::string(s.message()), true};
}
Failure Runtime(const absl::Status& s) {
  return {kExitRuntimeError, std::string(s.message())};
}

struct PrivacyFlags {
  PrivacyParams params;
  std::string mode = "conservative";
  std::vector<CLI::Option*> options;
  CLI::Option* mode_option = nullptr;
  CLI::Option* eps_g = nullptr;
  CLI::Option* delta = nullptr;
  CLI::Option* budget = nullptr;
  CLI::Option* alpha = nullptr;
  CLI::Option* q = nullptr;
  CLI::Option* n = nullptr;

  void Add(CLI::App* app) {
    eps_g = app->add_option("--eps-g", params.global_epsilon,
                            "Global RDP budget eps_G");
    delta = app->add_option("--delta", params.delta,
                            "delta for the (eps, delta) conversion");
    budget = app->add_option("-T,--query-budget", params.query_budget,
                             "Query budget T");
    alpha = app->add_option("--alpha", params.alpha, "Integer Renyi order");
    q = app->add_option("-q,--sampling-rate", params.sampling_rate,
                        "Poisson inclusion probability");
    n = app->add_option("-N,--ensemble-size", params.ensemble_size,
                        "Ensemble size N");
    mode_option =
        app->add_option("--mode", mode, "paper-faithful or conservative")
            ->check(CLI::IsMember({"paper-faithful", "conservative"}));
    options = {eps_g, delta, budget, alpha, q, n};
  }

  bool AnyGiven() const {
    for (CLI::Option* o : options) {
      if (o->count() > 0) return true;
    }
    return false;
  }

  // Copies the flags that were given on the command line into `into`.
  void Override(PrivacyParams& into) const {
    if (eps_g->count()) into.global_epsilon = params.global_epsilon;
    if (delta->count()) into.delta = params.delta;
    if (budget->count()) into.query_budget = params.query_budget;
    if (alpha->count()) into.alpha = params.alpha;
    if (q->count()) into.sampling_rate = params.sampling_rate;
    if (n->count()) into.ensemble_size = params.ensemble_size;
  }

  EpsMode Mode() const { return *ParseEpsMode(mode); }
};

struct ExperimentFlags {
  std::string config_path;
  ExperimentConfig values;
  PrivacyFlags privacy;
  CLI::Option* private_corpus = nullptr;
  CLI::Option* public_corpus = nullptr;
  CLI::Option* test_corpus = nullptr;
  CLI::Option* vocab = nullptr;
  CLI::Option* order = nullptr;
  CLI::Option* smoothing_k = nullptr;
  CLI::Option* seed = nullptr;
  CLI::Option* runs = nullptr;
  CLI::Option* eval_positions = nullptr;
  CLI::Option* output = nullptr;

  void Add(CLI::App* app) {
    app->add_option("--config", config_path, "JSON experiment config")
        ->check(CLI::ExistingFile);
    private_corpus =
        app->add_option("--private-corpus", values.private_corpus_path);
    public_corpus =
        app->add_option("--public-corpus", values.public_corpus_path);
    test_corpus = app->add_option("--test-corpus", values.test_corpus_path);
    vocab = app->add_option("--vocab", values.vocab_path, "Vocabulary file");
    order = app->add_option("--order", values.order, "n-gram order");
    smoothing_k = app->add_option("--smoothing-k", values.smoothing_k,
                                  "Add-k smoothing constant");
    seed = app->add_option("--seed", values.seed, "Base seed");
    runs = app->add_option("--runs", values.runs, "Seeded repetitions");
    eval_positions = app->add_option("--eval-positions", values.eval_positions,
                                     "Scored test positions (default T)");
    output = app->add_option("--output", values.output_path, "Report path");
    privacy.Add(app);
  }

  absl::StatusOr<ExperimentConfig> Resolve(int default_runs) const {
    ExperimentConfig c;
    c.runs = default_runs;
    if (!config_path.empty()) {
      absl::StatusOr<ExperimentConfig> loaded =
          LoadExperimentConfig(config_path, default_runs);
      if (!loaded.ok()) return loaded.status();
      c = *std::move(loaded);
    }
    if (private_corpus->count()) {
      c.private_corpus_path = values.private_corpus_path;
    }
    if (public_corpus->count())
      c.public_corpus_path = values.public_corpus_path;
    if (test_corpus->count()) c.test_corpus_path = values.test_corpus_path;
    if (vocab->count()) c.vocab_path = values.vocab_path;
    if (order->count()) c.order = values.order;
    if (smoothing_k->count()) c.smoothing_k = values.smoothing_k;
    if (seed->count()) c.seed = values.seed;
    if (runs->count()) c.runs = values.runs;
    if (eval_positions->count()) c.eval_positions = values.eval_positions;
    if (output->count()) c.output_path = values.output_path;
    if (privacy.mode_option->count()) c.mode = privacy.Mode();
    privacy.Override(c.privacy);
    if (absl::Status s = c.Validate(); !s.ok()) return s;
    return c;
  }
};

void Emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  if (absl::Status s = WriteTextFile(path, text); !s.ok()) throw Runtime(s);
}

void RunAccount(const PrivacyFlags& flags, std::ostream& out) {
  PrivacyParams params;
  flags.Override(params);
  if (absl::Status s = params.Validate(); !s.ok()) throw Usage(s);
  absl::StatusOr<AccountantRecord> record =
      ComputeAccountantRecord(params, flags.Mode());
  if (!record.ok()) throw Runtime(record.status());
  out << SerializeAccountantRecord(*record) << "\n";
}

void RunVocab(const std::vector<std::string>& corpora, int min_count,
              const std::string& output, std::ostream& out) {
  std::vector<std::string> docs;
  for (const std::string& path : corpora) {
    absl::StatusOr<std::vector<std::string>> d = ReadDocuments(path);
    if (!d.ok()) throw Runtime(d.status());
    docs.insert(docs.end(), d->begin(), d->end());
  }
  absl::StatusOr<Vocabulary> vocab = Vocabulary::Build(docs, min_count);
  if (!vocab.ok()) throw Runtime(vocab.status());
  if (absl::Status s = vocab->Save(output); !s.ok()) throw Runtime(s);
  out << "wrote " << vocab->size() << " tokens to " << output << "\n";
}

void RunTrain(const ExperimentFlags& flags, const std::string& snapshot_path,
              std::ostream& out) {
  absl::StatusOr<ExperimentConfig> config =
      flags.Resolve(kDefaultComparisonRuns);
  if (!config.ok()) throw Usage(config.status());
  absl::StatusOr<ExperimentData> data = LoadExperimentData(*config);
  if (!data.ok()) throw Runtime(data.status());
  absl::StatusOr<TrainedModels> models = TrainModels(*data, *config);
  if (!models.ok()) throw Runtime(models.status());

  EnsembleSnapshot snapshot{.vocab = data->vocab,
                            .partition_seed = config->seed};
  snapshot.public_model =
      std::static_pointer_cast<const NGramModel>(models->public_model);
  for (const ModelHandle& m : models->ensemble) {
    snapshot.ensemble.push_back(std::static_pointer_cast<const NGramModel>(m));
  }
  if (absl::Status s = SaveEnsembleSnapshot(snapshot_path, snapshot); !s.ok()) {
    throw Runtime(s);
  }
  out << "wrote snapshot with " << snapshot.ensemble.size()
      << " private models to " << snapshot_path << "\n";
}

struct PredictFlags {
  std::string snapshot_path;
  std::string ledger_path;
  std::string input_path;
  std::string output_path;
  std::vector<std::string> contexts;
  uint64_t seed = 0;
  PrivacyFlags privacy;
};

void RunPredict(const PredictFlags& flags, std::istream& in, std::ostream& out,
                std::ostream& err) {
  absl::StatusOr<EnsembleSnapshot> snapshot =
      LoadEnsembleSnapshot(flags.snapshot_path);
  if (!snapshot.ok()) throw Runtime(snapshot.status());

  LedgerState state;
  state.params.ensemble_size = static_cast<int>(snapshot->ensemble.size());
  state.mode = flags.privacy.Mode();
  const bool resume =
      !flags.ledger_path.empty() && std::filesystem::exists(flags.ledger_path);
  if (resume) {
    if (flags.privacy.AnyGiven() || flags.privacy.mode_option->count()) {
      throw Usage(absl::InvalidArgumentError(
          "privacy flags conflict with an existing --ledger; the ledger "
          "fixes them"));
    }
    std::ifstream f(flags.ledger_path);
    std::stringstream buf;
    buf << f.rdbuf();
    absl::StatusOr<LedgerState> loaded = ParseLedgerState(buf.str());
    if (!loaded.ok()) throw Runtime(loaded.status());
    state = *loaded;
  } else {
    flags.privacy.Override(state.params);
  }
  if (absl::Status s = state.params.Validate(); !s.ok()) throw Usage(s);

  std::vector<ModelHandle> ensemble(snapshot->ensemble.begin(),
                                    snapshot->ensemble.end());
  // Resumed sessions must not replay the random stream of earlier ones.
  SessionOptions options{
      .mode = state.mode,
      .seed = flags.seed + 0x9E3779B97F4A7C15ull *
                               static_cast<uint64_t>(state.queries_answered),
      .queries_already_answered = state.queries_answered};
  absl::StatusOr<ProtocolSession> session = ProtocolSession::Create(
      std::move(ensemble), snapshot->public_model, state.params, options);
  if (!session.ok()) throw Runtime(session.status());

  std::vector<std::string> contexts = flags.contexts;
  if (contexts.empty()) {
    std::ifstream file;
    if (!flags.input_path.empty()) file.open(flags.input_path);
    std::istream& src = flags.input_path.empty() ? in : file;
    for (std::string line; std::getline(src, line);) contexts.push_back(line);
  }

  std::string transcript;
  absl::Status status;
  for (const std::string& text : contexts) {
    const std::vector<TokenId> context = snapshot->vocab.Encode(text);
    absl::StatusOr<QueryRecord> record = session->Respond(context);
    if (!record.ok()) {
      status = record.status();
      break;
    }
    absl::StrAppend(&transcript, SerializeQueryRecord(*record, snapshot->vocab),
                    "\n");
  }
  Emit(flags.output_path, transcript, out);

  if (!flags.ledger_path.empty()) {
    state.queries_answered = session->ledger().queries_answered();
    if (absl::Status s =
            WriteTextFile(flags.ledger_path, SerializeLedgerState(state));
        !s.ok()) {
      throw Runtime(s);
    }
  }
  err << "answered " << session->ledger().queries_answered() << " of "
      << state.params.query_budget << " queries; spent "
      << session->ledger().spent() << " of " << state.params.global_epsilon
      << "\n";
  if (absl::IsResourceExhausted(status)) {
    throw Failure{kExitRuntimeError,
                  absl::StrCat("refused: ", status.message())};
  }
  if (!status.ok()) throw Runtime(status);
}

void RunCompare(const ExperimentFlags& flags, std::ostream& out) {
  absl::StatusOr<ExperimentConfig> config =
      flags.Resolve(kDefaultComparisonRuns);
  if (!config.ok()) throw Usage(config.status());
  absl::StatusOr<ExperimentReport> report = RunComparison(*config);
  if (!report.ok()) throw Runtime(report.status());
  Emit(config->output_path, SerializeReport(*report), out);
}

void RunSweepCommand(const ExperimentFlags& flags, const std::string& axis_name,
                     const std::vector<double>& values,
                     const std::string& table_path, std::ostream& out) {
  absl::StatusOr<SweepAxis> axis = ParseSweepAxis(axis_name);
  if (!axis.ok()) throw Usage(axis.status());
  absl::StatusOr<ExperimentConfig> config = flags.Resolve(kDefaultSweepRuns);
  if (!config.ok()) throw Usage(config.status());
  absl::StatusOr<ExperimentReport> report = RunSweep(*config, *axis, values);
  if (!report.ok()) throw Runtime(report.status());
  Emit(config->output_path, SerializeReport(*report), out);
  if (!table_path.empty()) {
    if (absl::Status s = WriteTextFile(table_path, SweepTableTsv(*report));
        !s.ok()) {
      throw Runtime(s);
    }
  }
}

}  // namespace

int CliMain(int argc, const char* const* argv, std::istream& in,
            std::ostream& out, std::ostream& err) {
  CLI::App app{"Differentially private next-token prediction", "pmixed"};
  app.require_subcommand(1);

  CLI::App* account =
      app.add_subcommand("account", "Print the accountant record");
  PrivacyFlags account_flags;
  account_flags.Add(account);

  CLI::App* vocab = app.add_subcommand("vocab", "Build a vocabulary file");
  std::vector<std::string> vocab_corpora;
  int min_count = 1;
  std::string vocab_output;
  vocab->add_option("--corpus", vocab_corpora, "Corpus files")
      ->required()
      ->check(CLI::ExistingFile);
  vocab->add_option("--min-count", min_count, "Minimum token count")
      ->check(CLI::PositiveNumber);
  vocab->add_option("--output", vocab_output, "Vocabulary path")->required();

  CLI::App* train =
      app.add_subcommand("train", "Train and snapshot the ensemble");
  ExperimentFlags train_flags;
  train_flags.Add(train);
  std::string snapshot_out;
  train->add_option("--snapshot", snapshot_out, "Snapshot output path")
      ->required();

  CLI::App* predict =
      app.add_subcommand("predict", "Answer queries against a snapshot");
  PredictFlags predict_flags;
  predict->add_option("--snapshot", predict_flags.snapshot_path)
      ->required()
      ->check(CLI::ExistingFile);
  predict->add_option("--ledger", predict_flags.ledger_path,
                      "Accounting state kept across invocations");
  predict->add_option("--context", predict_flags.contexts,
                      "Query context text (repeatable)");
  predict
      ->add_option("--input", predict_flags.input_path,
                   "File of contexts, one per line")
      ->check(CLI::ExistingFile);
  predict->add_option("--output", predict_flags.output_path, "Transcript path");
  predict->add_option("--seed", predict_flags.seed, "Sampling seed");
  predict_flags.privacy.Add(predict);

  CLI::App* compare = app.add_subcommand(
      "compare", "Compare public, ensemble and private arms");
  ExperimentFlags compare_flags;
  compare_flags.Add(compare);

  CLI::App* sweep = app.add_subcommand("sweep", "Sweep one privacy parameter");
  ExperimentFlags sweep_flags;
  sweep_flags.Add(sweep);
  std::string axis;
  std::vector<double> values;
  std::string table_path;
  sweep->add_option("--axis", axis, "eps_g, T, N, q or alpha")->required();
  sweep->add_option("--values", values, "Comma-separated axis values")
      ->required()
      ->delimiter(',');
  sweep->add_option("--table", table_path, "Tab-separated sweep table path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  CLI::App* active = app.get_subcommands().front();
  try {
    if (active == account) {
      RunAccount(account_flags, out);
    } else if (active == vocab) {
      RunVocab(vocab_corpora, min_count, vocab_output, out);
    } else if (active == train) {
      RunTrain(train_flags, snapshot_out, out);
    } else if (active == predict) {
      RunPredict(predict_flags, in, out, err);
    } else if (active == compare) {
      RunCompare(compare_flags, out);
    } else if (active == sweep) {
      RunSweepCommand(sweep_flags, axis, values, table_path, out);
    }
  } catch (const Failure& f) {
    err << "pmixed " << active->get_name() << ": " << f.message << "\n";
    if (f.show_usage) err << active->help();
    return f.code;
  }
  return kExitOk;
}

}  // namespace pmixed
