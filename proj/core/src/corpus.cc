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

#include "pmixed/corpus.h"

#include <fstream>
#include <numeric>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/ascii.h"
#include "absl/strings/str_format.h"
#include "pmixed/random.h"

namespace pmixed {

absl::StatusOr<std::vector<std::string>> ReadDocuments(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    return absl::NotFoundError(
        absl::StrFormat("cannot open corpus file '%s'", path));
  }
  std::vector<std::string> docs;
  std::string line;
  while (std::getline(in, line)) {
    absl::string_view stripped = absl::StripAsciiWhitespace(line);
    if (!stripped.empty()) docs.emplace_back(stripped);
  }
  return docs;
}

std::vector<TokenSequence> EncodeDocuments(const Vocabulary& vocab,
                                           absl::Span<const std::string> docs) {
  std::vector<TokenSequence> out;
  out.reserve(docs.size());
  for (const std::string& d : docs) out.push_back(vocab.Encode(d));
  return out;
}

std::vector<TokenSequence> Partition::Shard(
    absl::Span<const TokenSequence> documents, size_t i) const {
  std::vector<TokenSequence> out;
  out.reserve(shards[i].size());
  for (size_t doc : shards[i]) out.push_back(documents[doc]);
  return out;
}

absl::StatusOr<Partition> PartitionCorpus(
    absl::Span<const TokenSequence> documents, int num_shards, uint64_t seed) {
  if (num_shards < 1) {
    return absl::InvalidArgumentError(
        absl::StrFormat("need at least one shard, got %d", num_shards));
  }
  if (documents.size() < static_cast<size_t>(num_shards)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "cannot split %d documents into %d disjoint nonempty shards",
        documents.size(), num_shards));
  }
  std::vector<size_t> order(documents.size());
  std::iota(order.begin(), order.end(), size_t{0});
  RandomSource rng(seed);
  for (size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[rng.UniformIndex(i)]);
  }
  Partition partition;
  partition.shards.resize(num_shards);
  for (size_t i = 0; i < order.size(); ++i) {
    partition.shards[i % num_shards].push_back(order[i]);
  }
  return partition;
}

}  // namespace pmixed
