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

#include "shareformer/kd/model.h"

#include <cmath>
#include <random>
#include <utility>

#include "shareformer/common/errors.h"

namespace shareformer::kd {

namespace {

Mat ToMat(const RealTensor& t) {
  const Eigen::Index rows = t.shape.size() == 2 ? t.shape[0] : 1;
  const Eigen::Index cols = t.shape.size() == 2 ? t.shape[1] : t.shape[0];
  return Eigen::Map<const Mat>(t.values.data(), rows, cols);
}

}  // namespace

PlainModel::PlainModel(ModelConfig config, const TransformerWeights& weights)
    : config_(std::move(config)) {
  config_.Validate();
  ValidateWeights(weights, config_);
  for (const auto& [name, shape] : ParameterShapes(config_)) {
    Parameter p;
    p.value = ToMat(weights.at(name));
    p.ZeroGrad();
    params_.emplace(name, std::move(p));
  }
}

PlainModel PlainModel::Random(const ModelConfig& config, std::uint64_t seed) {
  config.Validate();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  TransformerWeights w;
  for (const auto& [name, shape] : ParameterShapes(config)) {
    RealTensor t;
    t.shape = shape;
    t.values.assign(NumElements(shape), 0.0);
    const bool is_gain = name.ends_with("gain");
    const bool is_bias = name.ends_with("bias") || name.ends_with(".b1") ||
                         name.ends_with(".b2");
    if (is_gain) {
      std::fill(t.values.begin(), t.values.end(), 1.0);
    } else if (!is_bias) {
      // Embeddings at unit scale, projections scaled by fan-in.
      const double sd = name.starts_with("embed.")
                            ? 1.0
                            : 1.0 / std::sqrt(static_cast<double>(shape[0]));
      for (auto& v : t.values) v = sd * normal(rng);
    }
    w.emplace(name, std::move(t));
  }
  return PlainModel(config, w);
}

TransformerWeights PlainModel::weights() const {
  TransformerWeights w;
  for (const auto& [name, shape] : ParameterShapes(config_)) {
    const Mat& m = params_.at(name).value;
    RealTensor t;
    t.shape = shape;
    t.values.assign(m.data(), m.data() + m.size());
    w.emplace(name, std::move(t));
  }
  return w;
}

Parameter& PlainModel::param(const std::string& name) {
  const auto it = params_.find(name);
  SF_ENFORCE(it != params_.end(), "unknown parameter ", name);
  return it->second;
}

const Parameter& PlainModel::param(const std::string& name) const {
  const auto it = params_.find(name);
  SF_ENFORCE(it != params_.end(), "unknown parameter ", name);
  return it->second;
}

std::vector<Parameter*> PlainModel::parameters() {
  std::vector<Parameter*> out;
  for (const auto& [name, shape] : ParameterShapes(config_))
    out.push_back(&param(name));
  return out;
}

std::vector<std::string> PlainModel::parameter_names() const {
  std::vector<std::string> out;
  for (const auto& [name, shape] : ParameterShapes(config_))
    out.push_back(name);
  return out;
}

Taps PlainModel::Forward(Tape& tape, const Batch& batch, KernelMode mode) {
  const ModelConfig& c = config_;
  const int B = batch.batch, S = batch.seq;
  SF_ENFORCE(B >= 1 && S >= 1 && S <= c.max_seq, "batch shape ", B, "x", S,
             " incompatible with max_seq ", c.max_seq);
  SF_ENFORCE(batch.tokens.size() == static_cast<size_t>(B * S) &&
                 batch.keep.size() == batch.tokens.size(),
             "batch token and mask sizes must be batch*seq");
  auto P = [&](const std::string& name) { return tape.Leaf(param(name)); };

  std::vector<int> positions(B * S);
  for (int i = 0; i < B * S; ++i) positions[i] = i % S;
  Taps taps;
  Var h = Add(GatherRows(P("embed.token"), batch.tokens),
              GatherRows(P("embed.position"), positions));
  taps.embedding = h;

  const AttentionShape shape{B, S, c.heads};
  for (int l = 0; l < c.layers; ++l) {
    auto L = [&](const char* suffix) { return P(LayerParam(l, suffix)); };
    const Var q =
        AddRowBroadcast(MatMul(h, L("attn.q.weight")), L("attn.q.bias"));
    const Var k =
        AddRowBroadcast(MatMul(h, L("attn.k.weight")), L("attn.k.bias"));
    const Var v =
        AddRowBroadcast(MatMul(h, L("attn.v.weight")), L("attn.v.bias"));
    const Var probs = AttentionProbs(q, k, shape, c.approx, mode, batch.keep);
    taps.attention.push_back(probs);
    const Var ctx = AttentionContext(probs, v, shape);
    const Var attn =
        AddRowBroadcast(MatMul(ctx, L("attn.o.weight")), L("attn.o.bias"));
    h = LayerNorm(Add(h, attn), L("ln1.gain"), L("ln1.bias"), kLayerNormEps);
    const Var inner = AddRowBroadcast(MatMul(h, L("ffn.w1")), L("ffn.b1"));
    const Var out = AddRowBroadcast(
        MatMul(Gelu(inner, c.approx.gelu, mode), L("ffn.w2")), L("ffn.b2"));
    h = LayerNorm(Add(h, out), L("ln2.gain"), L("ln2.bias"), kLayerNormEps);
    taps.hidden.push_back(h);
  }

  std::vector<int> first(B);
  for (int b = 0; b < B; ++b) first[b] = b * S;
  taps.logits = AddRowBroadcast(MatMul(GatherRows(h, first), P("head.weight")),
                                P("head.bias"));
  return taps;
}

Mat PlainModel::Predict(const Batch& batch, KernelMode mode) {
  Tape tape(/*record=*/false);
  return Forward(tape, batch, mode).logits.value();
}

}  // namespace shareformer::kd
