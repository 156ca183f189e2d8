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

#include "shareformer/kd/autodiff.h"
#include "shareformer/nn/model_config.h"

namespace shareformer::kd {

// kExact uses true exp and erf. kMpcMirror swaps in the kernels the MPC
// runtime evaluates, so decoded MPC logits can be compared one-to-one.
enum class KernelMode { kExact, kMpcMirror };

// (1 + x/256)^256 and its derivative.
double ExpLimit(double x);
double ExpLimitGrad(double x);
// Degree-15 Taylor series of erf, saturated to +-1 beyond the clamp.
double ErfClamped(double x);
double ErfClampedGrad(double x);

Var Gelu(const Var& x, GeluVariant variant, KernelMode mode);

// Row-wise layer normalisation with (1 x h) gain and bias.
Var LayerNorm(const Var& x, const Var& gain, const Var& bias, double eps);

struct AttentionShape {
  int batch = 1;
  int seq = 1;
  int heads = 1;
};

// q, k: (batch*seq x hidden). Returns the post-softmax attention matrices
// stacked as (batch*heads*seq x seq), block (b, h) at rows (b*heads + h)*seq.
// `keep` is (batch*seq) 0/1 over key positions; masked keys get weight 0.
Var AttentionProbs(const Var& q, const Var& k, const AttentionShape& shape,
                   const ApproximationSpec& spec, KernelMode mode,
                   std::span<const double> keep);

// probs from AttentionProbs, v: (batch*seq x hidden). Returns the
// concatenated per-head context (batch*seq x hidden).
Var AttentionContext(const Var& probs, const Var& v,
                     const AttentionShape& shape);

}  // namespace shareformer::kd
