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

#ifndef PMIXED_PERPLEXITY_H_
#define PMIXED_PERPLEXITY_H_

#include <cstdint>

#include "absl/status/statusor.h"
#include "absl/types/span.h"
#include "pmixed/corpus.h"
#include "pmixed/language_model.h"
#include "pmixed/protocol.h"

namespace pmixed {

// The scored positions are every token of every sequence, in order,
// truncated to the first `max_positions` when that is positive. Position t
// of a sequence is predicted from tokens [0, t) of the same sequence.
struct PerplexityResult {
  double perplexity = 0.0;  // exp(total_nll / positions).
  int64_t positions = 0;
  double total_nll = 0.0;
};

absl::StatusOr<PerplexityResult> ModelPerplexity(
    const LanguageModel& model, absl::Span<const TokenSequence> sequences,
    int64_t max_positions = 0);

// Scores the distributions the protocol releases. Every position is one
// answered query and is charged to the session ledger. If the session stops
// early (budget exhausted, model failure) the error is returned and, when
// `partial` is set, it receives the positions scored before the failure.
absl::StatusOr<PerplexityResult> ProtocolPerplexity(
    ProtocolSession& session, absl::Span<const TokenSequence> sequences,
    int64_t max_positions = 0, PerplexityResult* partial = nullptr);

}  // namespace pmixed

#endif  // PMIXED_PERPLEXITY_H_
