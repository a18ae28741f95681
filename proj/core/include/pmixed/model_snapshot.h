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

// Snapshots of trained n-gram ensembles.
//
// A snapshot file is JSON Lines. The first record is a header holding the
// vocabulary and shared model settings; it is followed by one "model"
// record for the public model and one per ensemble member, in index order.
// Counts are integers and the smoothing constant is written with
// round-trip precision, so a loaded model predicts bit-identically.

#ifndef PMIXED_MODEL_SNAPSHOT_H_
#define PMIXED_MODEL_SNAPSHOT_H_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "pmixed/ngram_model.h"
#include "pmixed/vocabulary.h"

namespace pmixed {

struct EnsembleSnapshot {
  Vocabulary vocab;
  uint64_t partition_seed = 0;
  std::shared_ptr<const NGramModel> public_model;
  std::vector<std::shared_ptr<const NGramModel>> ensemble;
};

// One JSON object on a single line.
std::string SerializeModel(const NGramModel& model);
absl::StatusOr<NGramModel> ParseModel(absl::string_view json);

absl::Status SaveEnsembleSnapshot(const std::string& path,
                                  const EnsembleSnapshot& snapshot);
absl::StatusOr<EnsembleSnapshot> LoadEnsembleSnapshot(const std::string& path);

}  // namespace pmixed

#endif  // PMIXED_MODEL_SNAPSHOT_H_
