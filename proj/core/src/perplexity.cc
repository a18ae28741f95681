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

#include "pmixed/perplexity.h"

#include <cmath>

#include "absl/functional/function_ref.h"
#include "absl/status/status.h"
#include "absl/strings/str_format.h"

namespace pmixed {
namespace {

using PredictFn =
    absl::FunctionRef<absl::StatusOr<Distribution>(absl::Span<const TokenId>)>;

absl::StatusOr<PerplexityResult> Score(
    absl::Span<const TokenSequence> sequences, int64_t max_positions,
    PredictFn predict, PerplexityResult* partial) {
  PerplexityResult result;
  auto fail = [&](absl::Status status) {
    if (partial != nullptr) {
      *partial = result;
      if (result.positions > 0) {
        partial->perplexity =
            std::exp(result.total_nll / static_cast<double>(result.positions));
      }
    }
    return absl::Status(status.code(),
                        absl::StrFormat("%s (after %d scored positions)",
                                        status.message(), result.positions));
  };
  for (const TokenSequence& seq : sequences) {
    const absl::Span<const TokenId> tokens(seq);
    for (size_t t = 0; t < tokens.size(); ++t) {
      if (max_positions > 0 && result.positions >= max_positions) break;
      absl::StatusOr<Distribution> dist = predict(tokens.subspan(0, t));
      if (!dist.ok()) return fail(dist.status());
      const TokenId next = tokens[t];
      if (next < 0 || static_cast<size_t>(next) >= dist->size()) {
        return fail(absl::InvalidArgumentError(
            absl::StrFormat("token id %d outside the vocabulary", next)));
      }
      result.total_nll -= std::log((*dist)[next]);
      ++result.positions;
    }
  }
  if (result.positions == 0) {
    return absl::InvalidArgumentError("no positions to score");
  }
  result.perplexity =
      std::exp(result.total_nll / static_cast<double>(result.positions));
  return result;
}

}  // namespace

absl::StatusOr<PerplexityResult> ModelPerplexity(
    const LanguageModel& model, absl::Span<const TokenSequence> sequences,
    int64_t max_positions) {
  return Score(
      sequences, max_positions,
      [&](absl::Span<const TokenId> context) { return model.Predict(context); },
      nullptr);
}

absl::StatusOr<PerplexityResult> ProtocolPerplexity(
    ProtocolSession& session, absl::Span<const TokenSequence> sequences,
    int64_t max_positions, PerplexityResult* partial) {
  return Score(
      sequences, max_positions,
      [&](absl::Span<const TokenId> context) -> absl::StatusOr<Distribution> {
        absl::StatusOr<QueryRecord> record = session.Respond(context);
        if (!record.ok()) return record.status();
        return std::move(record->aggregate);
      },
      partial);
}

}  // namespace pmixed
