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

#ifndef PMIXED_NGRAM_MODEL_H_
#define PMIXED_NGRAM_MODEL_H_

#include <cstdint>
#include <map>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/types/span.h"
#include "pmixed/language_model.h"
#include "pmixed/vocabulary.h"

namespace pmixed {

inline constexpr int kDefaultNGramOrder = 2;
inline constexpr double kDefaultSmoothingK = 0.1;

// Add-k smoothed n-gram model:
//   P(w | c) = (count(c, w) + k) / (count(c, .) + k |V|)
// where c is the previous order - 1 tokens, left-padded with the unknown
// token. Every probability is strictly positive.
class NGramModel : public LanguageModel {
 public:
  struct ContextCounts {
    int64_t total = 0;
    std::map<TokenId, int64_t> next;

    friend bool operator==(const ContextCounts&,
                           const ContextCounts&) = default;
  };
  using CountTable = std::map<std::vector<TokenId>, ContextCounts>;

  // Counts every order-length window of every sequence, including the
  // padded windows at sequence starts. Empty data yields a model that
  // predicts uniformly. Token ids must lie in [0, vocab_size).
  static absl::StatusOr<NGramModel> Train(
      absl::Span<const std::vector<TokenId>> data, int order,
      double smoothing_k, size_t vocab_size);

  // Rebuilds a model from a count table, validating it.
  static absl::StatusOr<NGramModel> FromCounts(int order, double smoothing_k,
                                               size_t vocab_size,
                                               CountTable counts);

  int order() const { return order_; }
  double smoothing_k() const { return smoothing_k_; }
  const CountTable& counts() const { return counts_; }

  size_t vocab_size() const override { return vocab_size_; }
  // Out-of-range ids in the context are read as the unknown token.
  absl::StatusOr<Distribution> Predict(
      absl::Span<const TokenId> context) const override;

  friend bool operator==(const NGramModel& a, const NGramModel& b) {
    return a.order_ == b.order_ && a.smoothing_k_ == b.smoothing_k_ &&
           a.vocab_size_ == b.vocab_size_ && a.counts_ == b.counts_;
  }

 private:
  NGramModel(int order, double smoothing_k, size_t vocab_size,
             CountTable counts)
      : order_(order),
        smoothing_k_(smoothing_k),
        vocab_size_(vocab_size),
        counts_(std::move(counts)) {}

  std::vector<TokenId> ContextKey(absl::Span<const TokenId> context) const;

  int order_;
  double smoothing_k_;
  size_t vocab_size_;
  CountTable counts_;
};

// The public model is trained exactly like an ensemble member, on public
// data only.
absl::StatusOr<NGramModel> BuildPublicModel(
    absl::Span<const std::vector<TokenId>> public_data, int order,
    double smoothing_k, size_t vocab_size);

}  // namespace pmixed

#endif  // PMIXED_NGRAM_MODEL_H_
