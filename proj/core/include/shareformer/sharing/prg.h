// Copyright 2026 The Shareformer Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "shareformer/ring/fixed_point.h"

namespace shareformer {

// Counter-mode pseudorandom generator backed by ChaCha20.
//
// The key is derived from `seed`; `index` and `stream` select the nonce, so
// every (seed, index, stream) triple is an independent, reproducible stream.
class Prg {
 public:
  Prg(std::uint64_t seed, std::uint64_t index, std::uint32_t stream);

  RingElement Next();
  void Fill(std::span<RingElement> out);
  std::vector<RingElement> Draw(size_t n);

 private:
  void Refill();

  std::array<unsigned char, 32> key_{};
  std::array<unsigned char, 12> nonce_{};
  std::uint32_t block_counter_ = 0;
  std::array<RingElement, 64> buffer_{};
  size_t buffer_pos_ = 64;
};

}  // namespace shareformer
