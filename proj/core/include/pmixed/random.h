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

#ifndef PMIXED_RANDOM_H_
#define PMIXED_RANDOM_H_

#include <cstdint>
#include <random>

namespace pmixed {

// Seeded pseudo-random source. Built on std::mt19937_64, whose output
// sequence is fixed by the standard, and converts bits to values itself, so
// draws are identical across standard library implementations.
class RandomSource {
 public:
  explicit RandomSource(uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1) with 53 random bits.
  double UniformDouble();

  // Uniform on {0, ..., n - 1}; n must be positive.
  uint64_t UniformIndex(uint64_t n);

  bool Bernoulli(double p) { return UniformDouble() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace pmixed

#endif  // PMIXED_RANDOM_H_
