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

#include "pmixed/vocabulary.h"

#include <algorithm>
#include <fstream>
#include <utility>

#include "absl/strings/ascii.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"

namespace pmixed {

Vocabulary::Vocabulary(std::vector<std::string> tokens)
    : tokens_(std::move(tokens)) {
  ids_.reserve(tokens_.size());
  for (size_t i = 0; i < tokens_.size(); ++i) {
    ids_.emplace(tokens_[i], static_cast<TokenId>(i));
  }
}

absl::StatusOr<Vocabulary> Vocabulary::Create(std::vector<std::string> tokens) {
  if (tokens.size() < 2) {
    return absl::InvalidArgumentError(
        "vocabulary needs the unknown token plus at least one other token");
  }
  absl::flat_hash_map<std::string, size_t> seen;
  for (size_t i = 0; i < tokens.size(); ++i) {
    const std::string& t = tokens[i];
    if (t.empty() || std::any_of(t.begin(), t.end(), [](char c) {
          return absl::ascii_isspace(static_cast<unsigned char>(c));
        })) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "vocabulary entry %d is empty or contains whitespace", i));
    }
    auto [it, inserted] = seen.emplace(t, i);
    if (!inserted) {
      return absl::InvalidArgumentError(
          absl::StrFormat("duplicate vocabulary token '%s' at lines %d and %d",
                          t, it->second, i));
    }
  }
  return Vocabulary(std::move(tokens));
}

absl::StatusOr<Vocabulary> Vocabulary::Load(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    return absl::NotFoundError(
        absl::StrFormat("cannot open vocabulary file '%s'", path));
  }
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    absl::string_view stripped = absl::StripAsciiWhitespace(line);
    if (stripped.empty()) continue;
    tokens.emplace_back(stripped);
  }
  return Create(std::move(tokens));
}

absl::Status Vocabulary::Save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) {
    return absl::PermissionDeniedError(
        absl::StrFormat("cannot write vocabulary file '%s'", path));
  }
  for (const std::string& t : tokens_) out << t << '\n';
  if (!out) return absl::DataLossError("short write to " + path);
  return absl::OkStatus();
}

absl::StatusOr<Vocabulary> Vocabulary::Build(
    absl::Span<const std::string> documents, int64_t min_count) {
  absl::flat_hash_map<std::string, int64_t> counts;
  for (const std::string& doc : documents) {
    for (absl::string_view word :
         absl::StrSplit(doc, absl::ByAnyChar(" \t\r\n"), absl::SkipEmpty())) {
      ++counts[word];
    }
  }
  counts.erase(std::string(kDefaultUnknownSpelling));
  std::vector<std::pair<std::string, int64_t>> sorted(counts.begin(),
                                                      counts.end());
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::vector<std::string> tokens = {std::string(kDefaultUnknownSpelling)};
  for (auto& [word, count] : sorted) {
    if (count >= min_count) tokens.push_back(std::move(word));
  }
  return Create(std::move(tokens));
}

TokenId Vocabulary::Id(absl::string_view token) const {
  auto it = ids_.find(token);
  return it == ids_.end() ? kUnknownToken : it->second;
}

std::vector<TokenId> Vocabulary::Encode(absl::string_view text) const {
  std::vector<TokenId> ids;
  for (absl::string_view word :
       absl::StrSplit(text, absl::ByAnyChar(" \t\r\n"), absl::SkipEmpty())) {
    ids.push_back(Id(word));
  }
  return ids;
}

std::string Vocabulary::Decode(absl::Span<const TokenId> ids) const {
  std::vector<absl::string_view> words;
  words.reserve(ids.size());
  for (TokenId id : ids) {
    words.push_back(id >= 0 && static_cast<size_t>(id) < tokens_.size()
                        ? absl::string_view(tokens_[id])
                        : absl::string_view(tokens_[kUnknownToken]));
  }
  return absl::StrJoin(words, " ");
}

}  // namespace pmixed
