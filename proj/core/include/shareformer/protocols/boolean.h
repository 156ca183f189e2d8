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

#include <span>
#include <vector>

#include "shareformer/protocols/session.h"
#include "shareformer/sharing/shared_tensor.h"

namespace shareformer {

// Beaver AND on binary shares; all pairs are opened in one round.
std::vector<SharedTensor> BinaryAndMany(Session& s,
                                        std::span<const SharedTensor> xs,
                                        std::span<const SharedTensor> ys);
SharedTensor BinaryAnd(Session& s, const SharedTensor& x,
                       const SharedTensor& y);

// Arithmetic to binary conversion with a Kogge-Stone adder, 6 rounds.
SharedTensor A2B(Session& s, const SharedTensor& x);

// Low `nbits` bits of a binary share as unscaled arithmetic bit shares,
// shape (n, nbits). One round.
SharedTensor BitsToArithmetic(Session& s, const SharedTensor& x, int nbits);
// Binary to arithmetic conversion of the low `nbits` bits, one round.
SharedTensor B2A(Session& s, const SharedTensor& x, int nbits = kRingBits);

// Unscaled 0/1 share of [x < 0], 7 rounds.
SharedTensor LtzBit(Session& s, const SharedTensor& x);
// [x < 0] encoded at the session scale, 7 rounds.
SharedTensor Ltz(Session& s, const SharedTensor& x);
// x * (1 - [x < 0]), 8 rounds.
SharedTensor Relu(Session& s, const SharedTensor& x);
// Row-wise maximum of a (rows x N) tensor, 8 rounds per tree level.
// Returns (rows x 1).
SharedTensor MaxTree(Session& s, const SharedTensor& x);

}  // namespace shareformer
