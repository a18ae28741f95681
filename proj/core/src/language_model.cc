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

#include "pmixed/language_model.h"

#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"

namespace pmixed {

absl::Status TableModel::AddRow(std::vector<TokenId> context,
                                Distribution row) {
  if (row.size() != vocab_size_) {
    return absl::InvalidArgumentError(
        absl::StrFormat("table row has %d entries, vocabulary has %d",
                        row.size(), vocab_size_));
  }
  rows_.insert_or_assign(std::move(context), std::move(row));
  return absl::OkStatus();
}

absl::StatusOr<Distribution> TableModel::Predict(
    absl::Span<const TokenId> context) const {
  auto it = rows_.find(std::vector<TokenId>(context.begin(), context.end()));
  if (it != rows_.end()) return it->second;
  if (fallback_.has_value()) return *fallback_;
  return absl::NotFoundError(absl::StrFormat("no table row for context [%s]",
                                             absl::StrJoin(context, " ")));
}

absl::StatusOr<std::unique_ptr<EnsembleAverageModel>>
EnsembleAverageModel::Create(std::vector<ModelHandle> members) {
  if (members.empty()) {
    return absl::InvalidArgumentError("ensemble average needs a member");
  }
  for (const ModelHandle& m : members) {
    if (m == nullptr || m->vocab_size() != members.front()->vocab_size()) {
      return absl::InvalidArgumentError(
          "ensemble members must share one vocabulary");
    }
  }
  return std::unique_ptr<EnsembleAverageModel>(
      new EnsembleAverageModel(std::move(members)));
}

absl::StatusOr<Distribution> EnsembleAverageModel::Predict(
    absl::Span<const TokenId> context) const {
  std::vector<Distribution> outputs;
  outputs.reserve(members_.size());
  for (const ModelHandle& m : members_) {
    absl::StatusOr<Distribution> d = m->Predict(context);
    if (!d.ok()) return d.status();
    outputs.push_back(*std::move(d));
  }
  return Distribution::Mean(outputs);
}

}  // namespace pmixed
