// Copyright 2026 The holo-refocus Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Reproducible random streams. A stream is identified by (seed, index); the
// engine state is derived through std::seed_seq so any worker can open the
// stream for trajectory i without touching the others.

#pragma once

#include <cstdint>
#include <random>

namespace holo {

class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed, std::uint64_t index = 0);

  /// Uniform double in [0, 1) built from the top 53 bits of one draw.
  double uniform();
  /// Uniform double in (0, 1].
  double uniform_open_low() { return 1.0 - uniform(); }

  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

/// 64-bit seed for the index-th child of `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace holo
