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

#include "shareformer/protocols/session.h"
#include "shareformer/sharing/shared_tensor.h"

namespace shareformer {

inline constexpr int kExpSquarings = 8;
inline constexpr int kNewtonIterations = 10;
// Extra fractional bits carried inside the reciprocal iteration.
inline constexpr int kReciprocalWorkBits = 8;
// Extra fractional bits of exp inside the exact softmax and of the inverse
// square root inside layer norm. Share-local truncation fails with
// probability about |v| / 2^64, so products stay near 2^40.
inline constexpr int kExpWorkBits = 4;
inline constexpr int kInvSqrtWorkBits = 4;
// |x| beyond which erf is clamped to +-1.
inline constexpr double kErfClamp = 1.7;

// (1 + x / 2^8)^(2^8) by repeated squaring, 8 rounds. The result carries
// `extra_bits` more fractional bits than the session scale (0 to 8).
SharedTensor ExpIter(Session& s, const SharedTensor& x, int extra_bits = 0);

// Unscaled one-hot shares of the most significant set bit, shape (n, 64).
// 13 rounds.
SharedTensor MsbOneHot(Session& s, const SharedTensor& x);

// 1/x for positive x by Newton-Raphson from a bit-length initial guess.
// The result carries `extra_bits` (0 to 8) more fractional bits than the
// session scale. x = 0 yields 0.
SharedTensor ReciprocalNr(Session& s, const SharedTensor& x,
                          int extra_bits = 0);

// 1/sqrt(x) for positive x by Newton-Raphson. The result carries
// `extra_bits` (0 to 8) more fractional bits than the session scale.
// x = 0 yields 0.
SharedTensor InvSqrtNr(Session& s, const SharedTensor& x, int extra_bits = 0);

// erf(x) from its odd Taylor series up to x^15, clamped to +-1 outside
// |x| <= kErfClamp. 13 rounds.
SharedTensor ErfTaylor(Session& s, const SharedTensor& x);

}  // namespace shareformer
