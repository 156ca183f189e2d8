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

#include <cstdint>
#include <string>
#include <string_view>

namespace shareformer {

enum class GeluVariant { kExact, kQuad };
enum class SoftmaxVariant { kExact, kTwoRelu, kTwoQuad };

std::string_view ToString(GeluVariant v);
std::string_view ToString(SoftmaxVariant v);
// Throw ContractViolation on unknown names.
GeluVariant ParseGeluVariant(std::string_view name);
SoftmaxVariant ParseSoftmaxVariant(std::string_view name);

// Which MPC-friendly substitutes a model uses.
struct ApproximationSpec {
  GeluVariant gelu = GeluVariant::kExact;
  SoftmaxVariant softmax = SoftmaxVariant::kExact;
  double two_quad_c = 5.0;

  static ApproximationSpec Exact() { return {}; }
  static ApproximationSpec QuadTwoQuad() {
    return {GeluVariant::kQuad, SoftmaxVariant::kTwoQuad, 5.0};
  }
  static ApproximationSpec QuadTwoRelu() {
    return {GeluVariant::kQuad, SoftmaxVariant::kTwoRelu, 5.0};
  }
  std::string Name() const;

  friend bool operator==(const ApproximationSpec&,
                         const ApproximationSpec&) = default;
};

// Added to approximated softmax denominators.
inline constexpr double kSoftmaxDenominatorEps = 1e-6;
// Additive logit mask for the exact and 2ReLU softmax.
inline constexpr double kAdditiveMask = -1e4;
inline constexpr double kLayerNormEps = 1e-5;

struct ModelConfig {
  int layers = 2;
  int hidden = 32;
  int heads = 2;
  int ffn_mult = 2;
  int vocab = 64;
  int max_seq = 16;
  int classes = 4;
  ApproximationSpec approx;

  int head_dim() const { return hidden / heads; }
  int ffn_dim() const { return hidden * ffn_mult; }
  // Throws ContractViolation when a dimension is invalid.
  void Validate() const;

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

// Canonical JSON text (sorted keys, fixed formatting).
std::string ToJson(const ModelConfig& config);
// Missing keys keep their defaults; throws ContractViolation on bad input.
ModelConfig ModelConfigFromJson(std::string_view text);

// FNV-1a of arbitrary bytes, used for configuration hashes.
std::uint64_t HashBytes(std::string_view bytes);

}  // namespace shareformer
