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
#include <map>
#include <span>
#include <string>
#include <vector>

#include "shareformer/kd/autodiff.h"
#include "shareformer/kd/layers.h"
#include "shareformer/nn/model_config.h"
#include "shareformer/nn/weights.h"

namespace shareformer::kd {

// A padded batch of token sequences. keep[i] is 1 for real tokens and 0
// for padding; row b*seq + t holds token t of example b.
struct Batch {
  int batch = 0;
  int seq = 0;
  std::vector<int> tokens;
  std::vector<double> keep;
  std::vector<int> labels;
};

// Representations matched during distillation.
struct Taps {
  Var embedding;               // (batch*seq x hidden)
  std::vector<Var> attention;  // per layer, (batch*heads*seq x seq)
  std::vector<Var> hidden;     // per layer, (batch*seq x hidden)
  Var logits;                  // (batch x classes), first token
};

// Plaintext transformer sharing the MPC model's parameter names and layout.
class PlainModel {
 public:
  PlainModel(ModelConfig config, const TransformerWeights& weights);

  // Fresh initialisation drawn from `seed`.
  static PlainModel Random(const ModelConfig& config, std::uint64_t seed);

  const ModelConfig& config() const { return config_; }
  ModelConfig& mutable_config() { return config_; }
  TransformerWeights weights() const;

  Parameter& param(const std::string& name);
  const Parameter& param(const std::string& name) const;
  // Parameters in canonical order.
  std::vector<Parameter*> parameters();
  std::vector<std::string> parameter_names() const;

  // Records the forward pass on `tape` with the model's approximation spec.
  Taps Forward(Tape& tape, const Batch& batch, KernelMode mode);

  // Logits without recording gradients.
  Mat Predict(const Batch& batch, KernelMode mode = KernelMode::kExact);

 private:
  ModelConfig config_;
  std::map<std::string, Parameter> params_;
};

}  // namespace shareformer::kd
