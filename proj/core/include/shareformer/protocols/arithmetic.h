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

// Share-local truncation by an arbitrary number of bits.
SharedTensor TruncateBits(const SharedTensor& x, int bits);

// Multiplies by a public real constant (encoded at the session scale).
SharedTensor MulConst(Session& s, const SharedTensor& x, double c);
SharedTensor AddConst(Session& s, const SharedTensor& x, double c);
SharedTensor SubFromConst(Session& s, double c, const SharedTensor& x);

// Beaver multiplication, one round. The fixed-point product is truncated.
SharedTensor Mul(Session& s, const SharedTensor& x, const SharedTensor& y);
// Same without truncation, for products with an unscaled 0/1 share.
SharedTensor MulNoTrunc(Session& s, const SharedTensor& x,
                        const SharedTensor& y);
SharedTensor Square(Session& s, const SharedTensor& x);

// Several independent elementwise products opened together in one round.
std::vector<SharedTensor> MulMany(Session& s, std::span<const SharedTensor> xs,
                                  std::span<const SharedTensor> ys,
                                  bool truncate = true);

// Matrix Beaver multiplication of (m x k) by (k x n), one round.
SharedTensor MatMul(Session& s, const SharedTensor& x, const SharedTensor& y);
// Several independent matrix products in one round.
std::vector<SharedTensor> MatMulMany(Session& s,
                                     std::span<const SharedTensor> xs,
                                     std::span<const SharedTensor> ys);

}  // namespace shareformer
