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
#include <string>
#include <utility>
#include <vector>

#include "shareformer/nn/model_config.h"
#include "shareformer/sharing/shared_tensor.h"

namespace shareformer {

// Dense real tensor, row-major.
struct RealTensor {
  Shape shape;
  std::vector<double> values;

  size_t rows() const { return shape.size() < 2 ? 1 : shape[0]; }
  size_t cols() const { return shape.empty() ? 0 : shape.back(); }

  friend bool operator==(const RealTensor&, const RealTensor&) = default;
};

// Named model parameters. Matrices act on row vectors: y = x W + b.
//   embed.token (vocab, hidden), embed.position (max_seq, hidden)
//   layer{i}.attn.{q,k,v,o}.weight (hidden, hidden), .bias (1, hidden)
//   layer{i}.ln1 / ln2 .gain, .bias (1, hidden)
//   layer{i}.ffn.w1 (hidden, ffn), b1 (1, ffn), w2 (ffn, hidden), b2
//   head.weight (hidden, classes), head.bias (1, classes)
using TransformerWeights = std::map<std::string, RealTensor>;

std::string LayerParam(int layer, const std::string& suffix);

// Every parameter with its shape, in canonical order.
std::vector<std::pair<std::string, Shape>> ParameterShapes(
    const ModelConfig& config);

// Throws ContractViolation on missing, extra, misshapen or non-finite
// tensors.
void ValidateWeights(const TransformerWeights& weights,
                     const ModelConfig& config);

struct WeightFile {
  ModelConfig config;
  TransformerWeights weights;
};

inline constexpr std::uint32_t kWeightFileVersion = 1;

// Binary container: magic, version, config, then named little-endian
// float64 tensors. Throws Error on I/O failure or a malformed file.
void SaveWeightFile(const std::string& path, const WeightFile& file);
WeightFile LoadWeightFile(const std::string& path);

}  // namespace shareformer
