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

#ifndef PMIXED_VOCABULARY_H_
#define PMIXED_VOCABULARY_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "absl/container/flat_hash_map.h"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "absl/types/span.h"

namespace pmixed {

using TokenId = int32_t;

// Id of the reserved unknown token. It is always the first vocabulary entry
// and doubles as left padding for short contexts.
inline constexpr TokenId kUnknownToken = 0;
inline constexpr absl::string_view kDefaultUnknownSpelling = "<unk>";

// Ordered list of distinct token strings; the line number in a vocabulary
// file is the token id.
class Vocabulary {
 public:
  // tokens[0] is the reserved unknown token. Requires at least two distinct
  // tokens, none empty or containing whitespace.
  static absl::StatusOr<Vocabulary> Create(std::vector<std::string> tokens);

  // One token per line, unknown token on line 0.
  static absl::StatusOr<Vocabulary> Load(const std::string& path);
  absl::Status Save(const std::string& path) const;

  // Reserved unknown token followed by every token seen at least
  // `min_count` times, most frequent first, ties in byte order.
  static absl::StatusOr<Vocabulary> Build(
      absl::Span<const std::string> documents, int64_t min_count = 1);

  size_t size() const { return tokens_.size(); }
  const std::vector<std::string>& tokens() const { return tokens_; }
  const std::string& token(TokenId id) const { return tokens_[id]; }

  // Unknown strings map to kUnknownToken.
  TokenId Id(absl::string_view token) const;

  // Whitespace tokenization followed by id lookup.
  std::vector<TokenId> Encode(absl::string_view text) const;
  std::string Decode(absl::Span<const TokenId> ids) const;

 private:
  explicit Vocabulary(std::vector<std::string> tokens);

  std::vector<std::string> tokens_;
  absl::flat_hash_map<std::string, TokenId> ids_;
};

}  // namespace pmixed

#endif  // PMIXED_VOCABULARY_H_
