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

#include <optional>
#include <span>
#include <vector>

#include "shareformer/protocols/session.h"
#include "shareformer/sharing/shared_tensor.h"

namespace shareformer {

// Arithmetic input sharing without communication: both parties derive the
// same zero-sum mask from the session's input seed and the owner adds its
// secret. The non-owner passes an empty span.
SharedTensor ShareInput(Session& s, int owner,
                        std::span<const RingElement> secret,
                        const Shape& shape);

// Opens x to both parties, one round.
std::vector<RingElement> Reveal(Session& s, const SharedTensor& x);

// Opens x to `target` only, one round. Returns nullopt on the other party.
std::optional<std::vector<RingElement>> RevealTo(Session& s,
                                                 const SharedTensor& x,
                                                 int target);

}  // namespace shareformer
