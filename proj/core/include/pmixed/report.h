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

// Report serialization. Reports are JSON Lines, one record per line, each
// carrying a "record" discriminator. Reals are rounded to 9 significant
// digits; non-finite reals are written as null. Field names are listed in
// the README.

#ifndef PMIXED_REPORT_H_
#define PMIXED_REPORT_H_

#include <cstdint>
#include <string>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "pmixed/accountant.h"
#include "pmixed/experiment.h"
#include "pmixed/protocol.h"
#include "pmixed/vocabulary.h"

namespace pmixed {

inline constexpr int kReportSignificantDigits = 9;

// `value` rounded to kReportSignificantDigits. Non-finite values pass
// through.
double RoundSignificant(double value);

std::string SerializeReport(const ExperimentReport& report);

// Tab-separated sweep table with a header row: one row per (value, arm).
std::string SweepTableTsv(const ExperimentReport& report);

// One JSON line each.
std::string SerializeAccountantRecord(const AccountantRecord& record);
std::string SerializeQueryRecord(const QueryRecord& record,
                                 const Vocabulary& vocab);

// Persistent accounting state of a prediction session, so that a budget
// spans several invocations of the command-line tool.
struct LedgerState {
  PrivacyParams params;
  EpsMode mode = EpsMode::kConservative;
  int64_t queries_answered = 0;
};

std::string SerializeLedgerState(const LedgerState& state);
absl::StatusOr<LedgerState> ParseLedgerState(absl::string_view text);

absl::Status WriteTextFile(const std::string& path, absl::string_view text);

}  // namespace pmixed

#endif  // PMIXED_REPORT_H_
