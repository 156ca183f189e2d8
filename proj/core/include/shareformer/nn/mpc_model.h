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

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "shareformer/nn/model_config.h"
#include "shareformer/nn/weights.h"
#include "shareformer/protocols/session.h"
#include "shareformer/sharing/shared_tensor.h"

namespace shareformer {

// One party's shares of every model parameter.
struct SharedModel {
  ModelConfig config;
  std::map<std::string, SharedTensor> params;
  // Per layer: [Wq | Wk | Wv] and [bq | bk | bv], fused so that the three
  // projections cost one matrix product.
  std::vector<SharedTensor> qkv_weight;
  std::vector<SharedTensor> qkv_bias;

  const SharedTensor& at(const std::string& name) const;
};

// The owner passes its weights; the other party passes nullptr.
SharedModel ShareModel(Session& s, const ModelConfig& config,
                       const TransformerWeights* weights, int owner = 2);

// One-hot (seq x vocab) share of the owner's tokens. The sequence length is
// public; the other party passes an empty span.
SharedTensor ShareTokens(Session& s, const ModelConfig& config,
                         std::span<const int> tokens, size_t seq,
                         int owner = 1);

// Logit shares (1 x classes) for the first token. Per-function costs land
// in the ledger under MatMul, GeLU, Softmax, LayerNorm and Other.
SharedTensor Forward(Session& s, const SharedModel& model,
                     const SharedTensor& one_hot,
                     std::span<const double> keep = {});

// Forward followed by revealing the logits to `receiver` only.
std::optional<std::vector<double>> InferLogits(
    Session& s, const SharedModel& model, const SharedTensor& one_hot,
    std::span<const double> keep = {}, int receiver = 1);

}  // namespace shareformer
