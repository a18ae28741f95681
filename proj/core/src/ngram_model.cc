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

#include "pmixed/ngram_model.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"

namespace pmixed {
namespace {

absl::Status ValidateShape(int order, double smoothing_k, size_t vocab_size) {
  if (order < 1) {
    return absl::InvalidArgumentError(
        absl::StrFormat("n-gram order must be >= 1, got %d", order));
  }
  if (!(smoothing_k > 0.0) || !std::isfinite(smoothing_k)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "smoothing k must be finite and > 0, got %g", smoothing_k));
  }
  if (vocab_size < 2) {
    return absl::InvalidArgumentError("vocabulary must hold >= 2 tokens");
  }
  return absl::OkStatus();
}

bool InRange(TokenId id, size_t vocab_size) {
  return id >= 0 && static_cast<size_t>(id) < vocab_size;
}

}  // namespace

absl::StatusOr<NGramModel> NGramModel::Train(
    absl::Span<const std::vector<TokenId>> data, int order, double smoothing_k,
    size_t vocab_size) {
  if (absl::Status s = ValidateShape(order, smoothing_k, vocab_size); !s.ok()) {
    return s;
  }
  const size_t context_len = static_cast<size_t>(order - 1);
  CountTable counts;
  std::vector<TokenId> padded;
  for (const std::vector<TokenId>& seq : data) {
    padded.assign(context_len, kUnknownToken);
    for (TokenId id : seq) {
      if (!InRange(id, vocab_size)) {
        return absl::InvalidArgumentError(absl::StrFormat(
            "token id %d outside vocabulary of size %d", id, vocab_size));
      }
      padded.push_back(id);
    }
    for (size_t t = context_len; t < padded.size(); ++t) {
      std::vector<TokenId> key(padded.begin() + (t - context_len),
                               padded.begin() + t);
      ContextCounts& c = counts[std::move(key)];
      ++c.total;
      ++c.next[padded[t]];
    }
  }
  return NGramModel(order, smoothing_k, vocab_size, std::move(counts));
}

absl::StatusOr<NGramModel> NGramModel::FromCounts(int order, double smoothing_k,
                                                  size_t vocab_size,
                                                  CountTable counts) {
  if (absl::Status s = ValidateShape(order, smoothing_k, vocab_size); !s.ok()) {
    return s;
  }
  for (const auto& [key, c] : counts) {
    if (key.size() != static_cast<size_t>(order - 1)) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "context of length %d in an order-%d model", key.size(), order));
    }
    int64_t total = 0;
    for (TokenId id : key) {
      if (!InRange(id, vocab_size)) {
        return absl::InvalidArgumentError("context token outside vocabulary");
      }
    }
    for (const auto& [id, n] : c.next) {
      if (!InRange(id, vocab_size) || n <= 0) {
        return absl::InvalidArgumentError(
            "count entries need an in-vocabulary token and a positive count");
      }
      total += n;
    }
    if (total != c.total) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "context total %d does not match its entries (%d)", c.total, total));
    }
  }
  return NGramModel(order, smoothing_k, vocab_size, std::move(counts));
}

std::vector<TokenId> NGramModel::ContextKey(
    absl::Span<const TokenId> context) const {
  const size_t context_len = static_cast<size_t>(order_ - 1);
  std::vector<TokenId> key(context_len, kUnknownToken);
  const size_t take = std::min(context_len, context.size());
  for (size_t i = 0; i < take; ++i) {
    const TokenId id = context[context.size() - take + i];
    key[context_len - take + i] = InRange(id, vocab_size_) ? id : kUnknownToken;
  }
  return key;
}

absl::StatusOr<Distribution> NGramModel::Predict(
    absl::Span<const TokenId> context) const {
  const double k = smoothing_k_;
  const double v = static_cast<double>(vocab_size_);
  auto it = counts_.find(ContextKey(context));
  if (it == counts_.end()) {
    return Distribution::Create(std::vector<double>(vocab_size_, k / (k * v)));
  }
  const ContextCounts& c = it->second;
  const double denom = static_cast<double>(c.total) + k * v;
  std::vector<double> probs(vocab_size_, k / denom);
  for (const auto& [id, n] : c.next) {
    probs[id] = (static_cast<double>(n) + k) / denom;
  }
  return Distribution::Create(std::move(probs));
}

absl::StatusOr<NGramModel> BuildPublicModel(
    absl::Span<const std::vector<TokenId>> public_data, int order,
    double smoothing_k, size_t vocab_size) {
  return NGramModel::Train(public_data, order, smoothing_k, vocab_size);
}

}  // namespace pmixed
