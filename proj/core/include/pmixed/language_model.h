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

#ifndef PMIXED_LANGUAGE_MODEL_H_
#define PMIXED_LANGUAGE_MODEL_H_

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/types/span.h"
#include "pmixed/distribution.h"
#include "pmixed/vocabulary.h"

namespace pmixed {

// Next-token predictor over a fixed vocabulary. Implementations are
// immutable and deterministic: the same context always yields the same
// distribution, so Predict may be called concurrently.
class LanguageModel {
 public:
  virtual ~LanguageModel() = default;

  virtual size_t vocab_size() const = 0;

  // Distribution of the token following `context`.
  virtual absl::StatusOr<Distribution> Predict(
      absl::Span<const TokenId> context) const = 0;
};

using ModelHandle = std::shared_ptr<const LanguageModel>;

// Replays stored rows keyed by the exact context. Contexts without a row get
// the fallback distribution if one is set, and a NotFound error otherwise.
class TableModel : public LanguageModel {
 public:
  TableModel(size_t vocab_size, std::optional<Distribution> fallback)
      : vocab_size_(vocab_size), fallback_(std::move(fallback)) {}

  // Fails on a size mismatch.
  absl::Status AddRow(std::vector<TokenId> context, Distribution row);

  size_t vocab_size() const override { return vocab_size_; }
  absl::StatusOr<Distribution> Predict(
      absl::Span<const TokenId> context) const override;

 private:
  size_t vocab_size_;
  std::optional<Distribution> fallback_;
  std::map<std::vector<TokenId>, Distribution> rows_;
};

// Uniform average of the member predictions, without any mollification.
class EnsembleAverageModel : public LanguageModel {
 public:
  // Fails if `members` is empty or the vocabulary sizes differ.
  static absl::StatusOr<std::unique_ptr<EnsembleAverageModel>> Create(
      std::vector<ModelHandle> members);

  size_t vocab_size() const override { return members_.front()->vocab_size(); }
  absl::StatusOr<Distribution> Predict(
      absl::Span<const TokenId> context) const override;

 private:
  explicit EnsembleAverageModel(std::vector<ModelHandle> members)
      : members_(std::move(members)) {}

  std::vector<ModelHandle> members_;
};

}  // namespace pmixed

#endif  // PMIXED_LANGUAGE_MODEL_H_
