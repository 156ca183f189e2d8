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
#include <string_view>

#include "shareformer/nn/model_config.h"
#include "shareformer/protocols/session.h"
#include "shareformer/sharing/shared_tensor.h"

namespace shareformer {

// Ledger labels of the per-function breakdown.
inline constexpr std::string_view kScopeMatMul = "MatMul";
inline constexpr std::string_view kScopeGelu = "GeLU";
inline constexpr std::string_view kScopeSoftmax = "Softmax";
inline constexpr std::string_view kScopeLayerNorm = "LayerNorm";
inline constexpr std::string_view kScopeOther = "Other";

// 0.125 x^2 + 0.25 x + 0.5, one round.
SharedTensor GeluQuad(Session& s, const SharedTensor& x);
// x * (1 + erf(x / sqrt 2)) / 2 with the Taylor erf.
SharedTensor GeluExact(Session& s, const SharedTensor& x);
SharedTensor Gelu(Session& s, const SharedTensor& x, GeluVariant variant);

// Row-wise softmax variants over a (rows x n) share. `keep` is an optional
// public 0/1 mask over the n columns; empty means every column is kept.
SharedTensor SoftmaxExact(Session& s, const SharedTensor& x,
                          std::span<const double> keep = {});
SharedTensor Softmax2Relu(Session& s, const SharedTensor& x,
                          std::span<const double> keep = {});
SharedTensor Softmax2Quad(Session& s, const SharedTensor& x,
                          std::span<const double> keep = {}, double c = 5.0);
SharedTensor Softmax(Session& s, const SharedTensor& x,
                     const ApproximationSpec& spec,
                     std::span<const double> keep = {});

// Row-wise layer normalisation of (rows x h) with (1 x h) gain and bias.
SharedTensor LayerNorm(Session& s, const SharedTensor& x,
                       const SharedTensor& gain, const SharedTensor& bias);

// Single-head attention on (seq x d) shares.
SharedTensor Attention(Session& s, const SharedTensor& q, const SharedTensor& k,
                       const SharedTensor& v, const ApproximationSpec& spec,
                       std::span<const double> keep = {});

// All heads of a (seq x 3h) fused QKV projection, batched per round.
// Returns the (seq x h) concatenated context.
SharedTensor MultiHeadAttention(Session& s, const SharedTensor& qkv, int heads,
                                const ApproximationSpec& spec,
                                std::span<const double> keep = {});

}  // namespace shareformer
