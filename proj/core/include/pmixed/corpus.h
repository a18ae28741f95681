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

#ifndef PMIXED_CORPUS_H_
#define PMIXED_CORPUS_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/types/span.h"
#include "pmixed/vocabulary.h"

namespace pmixed {

using TokenSequence = std::vector<TokenId>;

// Reads a corpus file: one document per line, blank lines skipped.
absl::StatusOr<std::vector<std::string>> ReadDocuments(const std::string& path);

std::vector<TokenSequence> EncodeDocuments(const Vocabulary& vocab,
                                           absl::Span<const std::string> docs);

// Disjoint split of a document collection into N shards. Shards hold
// document indices; a document belongs to exactly one shard and shard sizes
// differ by at most one.
struct Partition {
  std::vector<std::vector<size_t>> shards;

  // The token sequences of shard `i`.
  std::vector<TokenSequence> Shard(absl::Span<const TokenSequence> documents,
                                   size_t i) const;
};

// Seeded Fisher-Yates shuffle, then round-robin assignment. Needs at least
// N documents.
absl::StatusOr<Partition> PartitionCorpus(
    absl::Span<const TokenSequence> documents, int num_shards, uint64_t seed);

}  // namespace pmixed

#endif  // PMIXED_CORPUS_H_
