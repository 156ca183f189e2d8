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

#include "shareformer/nn/mpc_model.h"

#include <array>

#include "shareformer/common/errors.h"
#include "shareformer/nn/mpc_layers.h"
#include "shareformer/protocols/arithmetic.h"
#include "shareformer/protocols/io.h"

namespace shareformer {

namespace {

SharedTensor AddBias(const SharedTensor& x, const SharedTensor& bias) {
  return AddLocal(x, BroadcastRows(bias, x.rows()));
}

}  // namespace

const SharedTensor& SharedModel::at(const std::string& name) const {
  const auto it = params.find(name);
  SF_ENFORCE(it != params.end(), "model has no parameter ", name);
  return it->second;
}

SharedModel ShareModel(Session& s, const ModelConfig& config,
                       const TransformerWeights* weights, int owner) {
  const bool mine = s.party() == owner;
  SF_ENFORCE(!mine || weights != nullptr,
             "the model owner must supply weights");
  if (mine) ValidateWeights(*weights, config);
  SharedModel model;
  model.config = config;
  for (const auto& [name, shape] : ParameterShapes(config)) {
    std::vector<RingElement> enc;
    if (mine) enc = s.codec().Encode(weights->at(name).values);
    model.params.emplace(name, ShareInput(s, owner, enc, shape));
  }
  for (int l = 0; l < config.layers; ++l) {
    const std::array<SharedTensor, 3> w{
        model.at(LayerParam(l, "attn.q.weight")),
        model.at(LayerParam(l, "attn.k.weight")),
        model.at(LayerParam(l, "attn.v.weight"))};
    const std::array<SharedTensor, 3> b{model.at(LayerParam(l, "attn.q.bias")),
                                        model.at(LayerParam(l, "attn.k.bias")),
                                        model.at(LayerParam(l, "attn.v.bias"))};
    model.qkv_weight.push_back(ConcatCols(w));
    model.qkv_bias.push_back(ConcatCols(b));
  }
  return model;
}

SharedTensor ShareTokens(Session& s, const ModelConfig& config,
                         std::span<const int> tokens, size_t seq, int owner) {
  SF_ENFORCE(seq >= 1 && seq <= static_cast<size_t>(config.max_seq),
             "sequence length ", seq, " outside [1, ", config.max_seq, "]");
  const size_t vocab = config.vocab;
  std::vector<RingElement> one_hot;
  if (s.party() == owner) {
    SF_ENFORCE(tokens.size() == seq, "expected ", seq, " tokens, got ",
               tokens.size());
    one_hot.assign(seq * vocab, 0);
    const RingElement one = s.codec().Encode(1.0);
    for (size_t i = 0; i < seq; ++i) {
      SF_ENFORCE(tokens[i] >= 0 && static_cast<size_t>(tokens[i]) < vocab,
                 "token ", tokens[i], " outside the vocabulary");
      one_hot[i * vocab + tokens[i]] = one;
    }
  }
  return ShareInput(s, owner, one_hot, {seq, vocab});
}

SharedTensor Forward(Session& s, const SharedModel& model,
                     const SharedTensor& one_hot,
                     std::span<const double> keep) {
  const ModelConfig& c = model.config;
  const size_t seq = one_hot.rows();
  SF_ENFORCE(one_hot.cols() == static_cast<size_t>(c.vocab), "one-hot width ",
             one_hot.cols(), " does not match vocab ", c.vocab);
  SF_ENFORCE(seq <= static_cast<size_t>(c.max_seq), "sequence too long");

  SharedTensor h;
  {
    CommLedger::Scope scope(s.ledger(), kScopeMatMul);
    h = MatMul(s, one_hot, model.at("embed.token"));
  }
  h = AddLocal(h, SliceRows(model.at("embed.position"), 0, seq));

  for (int l = 0; l < c.layers; ++l) {
    SharedTensor qkv;
    {
      CommLedger::Scope scope(s.ledger(), kScopeMatMul);
      qkv = AddBias(MatMul(s, h, model.qkv_weight[l]), model.qkv_bias[l]);
    }
    const SharedTensor ctx =
        MultiHeadAttention(s, qkv, c.heads, c.approx, keep);
    SharedTensor attn;
    {
      CommLedger::Scope scope(s.ledger(), kScopeMatMul);
      attn = AddBias(MatMul(s, ctx, model.at(LayerParam(l, "attn.o.weight"))),
                     model.at(LayerParam(l, "attn.o.bias")));
    }
    h = LayerNorm(s, AddLocal(h, attn), model.at(LayerParam(l, "ln1.gain")),
                  model.at(LayerParam(l, "ln1.bias")));

    SharedTensor inner;
    {
      CommLedger::Scope scope(s.ledger(), kScopeMatMul);
      inner = AddBias(MatMul(s, h, model.at(LayerParam(l, "ffn.w1"))),
                      model.at(LayerParam(l, "ffn.b1")));
    }
    const SharedTensor act = Gelu(s, inner, c.approx.gelu);
    SharedTensor out;
    {
      CommLedger::Scope scope(s.ledger(), kScopeMatMul);
      out = AddBias(MatMul(s, act, model.at(LayerParam(l, "ffn.w2"))),
                    model.at(LayerParam(l, "ffn.b2")));
    }
    h = LayerNorm(s, AddLocal(h, out), model.at(LayerParam(l, "ln2.gain")),
                  model.at(LayerParam(l, "ln2.bias")));
  }

  CommLedger::Scope scope(s.ledger(), kScopeMatMul);
  return AddBias(MatMul(s, SliceRows(h, 0, 1), model.at("head.weight")),
                 model.at("head.bias"));
}

std::optional<std::vector<double>> InferLogits(Session& s,
                                               const SharedModel& model,
                                               const SharedTensor& one_hot,
                                               std::span<const double> keep,
                                               int receiver) {
  const SharedTensor logits = Forward(s, model, one_hot, keep);
  CommLedger::Scope scope(s.ledger(), kScopeOther);
  const auto plain = RevealTo(s, logits, receiver);
  if (!plain) return std::nullopt;
  return s.codec().Decode(*plain);
}

}  // namespace shareformer
