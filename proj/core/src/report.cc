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

#include "pmixed/report.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <system_error>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "nlohmann/json.hpp"

namespace pmixed {
namespace {

using json = nlohmann::json;

json Real(double v) {
  if (!std::isfinite(v)) return nullptr;
  return RoundSignificant(v);
}

std::string RealText(double v) {
  if (!std::isfinite(v)) return "nan";
  return json(RoundSignificant(v)).dump();
}

json ParamsJson(const PrivacyParams& p) {
  return {{"eps_g", Real(p.global_epsilon)},
          {"delta", Real(p.delta)},
          {"T", p.query_budget},
          {"alpha", p.alpha},
          {"q", Real(p.sampling_rate)},
          {"N", p.ensemble_size}};
}

json AccountantJson(const AccountantRecord& r) {
  json j = ParamsJson(r.params);
  j["mode"] = EpsModeName(r.mode);
  j["beta_star"] = Real(r.beta_star);
  j["per_query_epsilon"] = Real(r.per_query_epsilon);
  j["composed_epsilon"] = Real(r.composed_epsilon);
  j["dp_epsilon"] = Real(r.dp_epsilon);
  return j;
}

json ArmJson(const ArmReport& arm) {
  json runs = json::array();
  for (const RunResult& r : arm.runs) {
    json run = {{"run", r.run},
                {"seed", r.seed},
                {"ok", r.ok},
                {"perplexity", r.ok ? Real(r.perplexity) : json(nullptr)},
                {"positions", r.positions}};
    if (arm.name == kPrivateArm) run["queries_charged"] = r.queries_charged;
    if (!r.ok) run["error"] = r.error;
    runs.push_back(std::move(run));
  }
  return {{"arm", arm.name},
          {"failed", arm.failed},
          {"mean", Real(arm.mean)},
          {"stddev", Real(arm.stddev)},
          {"runs", std::move(runs)}};
}

void AppendComparison(const ComparisonResult& c, json& into) {
  into["eval_positions"] = c.eval_positions;
  if (c.accountant.has_value()) {
    into["accountant"] = AccountantJson(*c.accountant);
  } else {
    into["accountant"] = nullptr;
    into["accountant_error"] = c.accountant_error;
  }
}

void Emit(std::string& out, const json& j) {
  absl::StrAppend(&out, j.dump(), "\n");
}

}  // namespace

double RoundSignificant(double value) {
  if (!std::isfinite(value) || value == 0.0) return value;
  char buf[64];
  auto [end, ec] =
      std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general,
                    kReportSignificantDigits);
  if (ec != std::errc()) return value;
  double rounded = value;
  std::from_chars(buf, end, rounded);
  return rounded;
}

std::string SerializeReport(const ExperimentReport& report) {
  const ExperimentConfig& c = report.config;
  std::string out;
  json config = {{"record", "config"},
                 {"private_corpus", c.private_corpus_path},
                 {"public_corpus", c.public_corpus_path},
                 {"test_corpus", c.test_corpus_path},
                 {"vocab", c.vocab_path},
                 {"order", c.order},
                 {"smoothing_k", Real(c.smoothing_k)},
                 {"privacy", ParamsJson(c.privacy)},
                 {"mode", EpsModeName(c.mode)},
                 {"seed", c.seed},
                 {"runs", c.runs},
                 {"eval_positions", c.EffectiveEvalPositions()},
                 {"seeds", report.seeds},
                 {"eval_policy",
                  "every scored position of the private arm is one charged "
                  "query; all arms score the same first eval_positions test "
                  "tokens"}};
  Emit(out, config);

  if (report.comparison.has_value()) {
    json acc = {{"record", "comparison"}};
    AppendComparison(*report.comparison, acc);
    Emit(out, acc);
    for (const ArmReport& arm : report.comparison->arms) {
      json a = ArmJson(arm);
      a["record"] = "arm";
      Emit(out, a);
    }
  }

  if (report.axis.has_value()) {
    for (const SweepRow& row : report.sweep) {
      json r = {{"record", "sweep_row"},
                {"axis", SweepAxisName(*report.axis)},
                {"value", Real(row.value)},
                {"ok", row.status.ok()}};
      if (!row.status.ok()) {
        r["error"] = std::string(row.status.message());
      } else {
        AppendComparison(row.result, r);
        json arms = json::array();
        for (const ArmReport& arm : row.result.arms) {
          arms.push_back(ArmJson(arm));
        }
        r["arms"] = std::move(arms);
      }
      Emit(out, r);
    }
  }
  return out;
}

std::string SweepTableTsv(const ExperimentReport& report) {
  std::string out =
      "axis\tvalue\tarm\tmean\tstddev\tfailed\tbeta_star\t"
      "per_query_epsilon\tdp_epsilon\n";
  if (!report.axis.has_value()) return out;
  const std::string axis = SweepAxisName(*report.axis);
  for (const SweepRow& row : report.sweep) {
    if (!row.status.ok()) {
      absl::StrAppend(&out, axis, "\t", RealText(row.value),
                      "\terror\tnan\tnan\ttrue\tnan\tnan\tnan\n");
      continue;
    }
    const std::optional<AccountantRecord>& acc = row.result.accountant;
    const std::string beta = acc ? RealText(acc->beta_star) : "nan";
    const std::string eps = acc ? RealText(acc->per_query_epsilon) : "nan";
    const std::string dp = acc ? RealText(acc->dp_epsilon) : "nan";
    for (const ArmReport& arm : row.result.arms) {
      absl::StrAppend(&out, axis, "\t", RealText(row.value), "\t", arm.name,
                      "\t", RealText(arm.mean), "\t", RealText(arm.stddev),
                      "\t", arm.failed ? "true" : "false", "\t", beta, "\t",
                      eps, "\t", dp, "\n");
    }
  }
  return out;
}

std::string SerializeAccountantRecord(const AccountantRecord& record) {
  json j = AccountantJson(record);
  j["record"] = "accountant";
  return j.dump();
}

std::string SerializeQueryRecord(const QueryRecord& record,
                                 const Vocabulary& vocab) {
  json aggregate = json::array();
  for (double p : record.aggregate.probs()) aggregate.push_back(Real(p));
  json lambdas = json::array();
  for (double l : record.lambdas) lambdas.push_back(Real(l));
  const TokenId t = record.sampled_token;
  json j = {{"record", "query"},
            {"context", record.context},
            {"subset", record.subset},
            {"lambdas", std::move(lambdas)},
            {"sampled_token", t},
            {"sampled_text",
             static_cast<size_t>(t) < vocab.size() ? vocab.token(t) : ""},
            {"aggregate", std::move(aggregate)}};
  return j.dump();
}

std::string SerializeLedgerState(const LedgerState& state) {
  json j = ParamsJson(state.params);
  // Exact values here: the state is reloaded, not read by people.
  j["eps_g"] = state.params.global_epsilon;
  j["delta"] = state.params.delta;
  j["q"] = state.params.sampling_rate;
  j["record"] = "ledger";
  j["mode"] = EpsModeName(state.mode);
  j["queries_answered"] = state.queries_answered;
  return j.dump() + "\n";
}

absl::StatusOr<LedgerState> ParseLedgerState(absl::string_view text) {
  json j = json::parse(text.begin(), text.end(), nullptr, false);
  if (j.is_discarded() || j.value("record", "") != "ledger") {
    return absl::InvalidArgumentError("not a ledger state record");
  }
  LedgerState s;
  try {
    s.params.global_epsilon = j.at("eps_g").get<double>();
    s.params.delta = j.at("delta").get<double>();
    s.params.query_budget = j.at("T").get<int64_t>();
    s.params.alpha = j.at("alpha").get<int>();
    s.params.sampling_rate = j.at("q").get<double>();
    s.params.ensemble_size = j.at("N").get<int>();
    s.queries_answered = j.at("queries_answered").get<int64_t>();
    absl::StatusOr<EpsMode> mode =
        ParseEpsMode(j.at("mode").get<std::string>());
    if (!mode.ok()) return mode.status();
    s.mode = *mode;
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrFormat("malformed ledger state: %s", e.what()));
  }
  if (absl::Status st = s.params.Validate(); !st.ok()) return st;
  if (s.queries_answered < 0) {
    return absl::InvalidArgumentError("negative queries_answered");
  }
  return s;
}

absl::Status WriteTextFile(const std::string& path, absl::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    return absl::PermissionDeniedError(
        absl::StrFormat("cannot write '%s'", path));
  }
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out)
    return absl::DataLossError(absl::StrFormat("short write to '%s'", path));
  return absl::OkStatus();
}

}  // namespace pmixed
