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

#include "pmixed/model_snapshot.h"

#include <fstream>
#include <optional>
#include <utility>

#include "absl/strings/str_format.h"
#include "nlohmann/json.hpp"

namespace pmixed {
namespace {

using json = nlohmann::json;

constexpr int kSnapshotVersion = 1;

json ModelToJson(const NGramModel& model) {
  json counts = json::array();
  for (const auto& [context, c] : model.counts()) {
    json next = json::array();
    for (const auto& [id, n] : c.next) next.push_back({id, n});
    counts.push_back({{"c", context}, {"n", std::move(next)}});
  }
  return {{"record", "model"},
          {"order", model.order()},
          {"smoothing_k", model.smoothing_k()},
          {"vocab_size", model.vocab_size()},
          {"counts", std::move(counts)}};
}

absl::StatusOr<NGramModel> ModelFromJson(const json& j) {
  try {
    NGramModel::CountTable table;
    for (const json& entry : j.at("counts")) {
      NGramModel::ContextCounts c;
      for (const json& pair : entry.at("n")) {
        const TokenId id = pair.at(0).get<TokenId>();
        const int64_t n = pair.at(1).get<int64_t>();
        c.next[id] = n;
        c.total += n;
      }
      table.emplace(entry.at("c").get<std::vector<TokenId>>(), std::move(c));
    }
    return NGramModel::FromCounts(
        j.at("order").get<int>(), j.at("smoothing_k").get<double>(),
        j.at("vocab_size").get<size_t>(), std::move(table));
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrFormat("malformed model record: %s", e.what()));
  }
}

}  // namespace

std::string SerializeModel(const NGramModel& model) {
  return ModelToJson(model).dump();
}

absl::StatusOr<NGramModel> ParseModel(absl::string_view text) {
  json j = json::parse(text.begin(), text.end(), nullptr, false);
  if (j.is_discarded()) return absl::InvalidArgumentError("invalid JSON");
  return ModelFromJson(j);
}

absl::Status SaveEnsembleSnapshot(const std::string& path,
                                  const EnsembleSnapshot& snapshot) {
  if (snapshot.public_model == nullptr) {
    return absl::InvalidArgumentError("snapshot lacks a public model");
  }
  std::ofstream out(path);
  if (!out) {
    return absl::PermissionDeniedError(
        absl::StrFormat("cannot write snapshot '%s'", path));
  }
  json header = {{"record", "snapshot"},
                 {"version", kSnapshotVersion},
                 {"partition_seed", snapshot.partition_seed},
                 {"ensemble_size", snapshot.ensemble.size()},
                 {"vocab", snapshot.vocab.tokens()}};
  out << header.dump() << '\n';
  json pub = ModelToJson(*snapshot.public_model);
  pub["role"] = "public";
  out << pub.dump() << '\n';
  for (size_t i = 0; i < snapshot.ensemble.size(); ++i) {
    json m = ModelToJson(*snapshot.ensemble[i]);
    m["role"] = "private";
    m["index"] = i;
    out << m.dump() << '\n';
  }
  if (!out) return absl::DataLossError("short write to " + path);
  return absl::OkStatus();
}

absl::StatusOr<EnsembleSnapshot> LoadEnsembleSnapshot(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    return absl::NotFoundError(
        absl::StrFormat("cannot open snapshot '%s'", path));
  }
  std::string line;
  if (!std::getline(in, line)) {
    return absl::InvalidArgumentError("empty snapshot file");
  }
  json header = json::parse(line, nullptr, false);
  if (header.is_discarded() || header.value("record", "") != "snapshot") {
    return absl::InvalidArgumentError("snapshot header record missing");
  }
  if (header.value("version", 0) != kSnapshotVersion) {
    return absl::InvalidArgumentError("unsupported snapshot version");
  }

  std::optional<Vocabulary> vocab;
  size_t ensemble_size = 0;
  uint64_t seed = 0;
  try {
    absl::StatusOr<Vocabulary> v =
        Vocabulary::Create(header.at("vocab").get<std::vector<std::string>>());
    if (!v.ok()) return v.status();
    vocab = *std::move(v);
    ensemble_size = header.at("ensemble_size").get<size_t>();
    seed = header.at("partition_seed").get<uint64_t>();
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrFormat("malformed snapshot header: %s", e.what()));
  }

  EnsembleSnapshot snapshot{.vocab = *std::move(vocab), .partition_seed = seed};
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) {
      return absl::InvalidArgumentError("invalid JSON line in snapshot");
    }
    absl::StatusOr<NGramModel> model = ModelFromJson(j);
    if (!model.ok()) return model.status();
    if (model->vocab_size() != snapshot.vocab.size()) {
      return absl::InvalidArgumentError(
          "model vocabulary size disagrees with the snapshot vocabulary");
    }
    auto handle = std::make_shared<const NGramModel>(*std::move(model));
    const std::string role = j.value("role", "");
    if (role == "public") {
      snapshot.public_model = std::move(handle);
    } else if (role == "private") {
      if (j.value("index", size_t{0}) != snapshot.ensemble.size()) {
        return absl::InvalidArgumentError("ensemble records out of order");
      }
      snapshot.ensemble.push_back(std::move(handle));
    } else {
      return absl::InvalidArgumentError("model record without a known role");
    }
  }
  if (snapshot.public_model == nullptr) {
    return absl::InvalidArgumentError("snapshot lacks a public model");
  }
  if (snapshot.ensemble.size() != ensemble_size || ensemble_size == 0) {
    return absl::InvalidArgumentError(
        absl::StrFormat("snapshot header announces %d models, file holds %d",
                        ensemble_size, snapshot.ensemble.size()));
  }
  return snapshot;
}

}  // namespace pmixed
