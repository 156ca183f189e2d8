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

// Wall-clock microbenchmarks of the two-party protocols, layers and the
// plaintext trainer. Each MPC iteration runs both parties in-process; the
// rounds and bytes counters are per iteration and deterministic.

#include <random>
#include <vector>

#include "benchmark/benchmark.h"
#include "shareformer/kd/dataset.h"
#include "shareformer/kd/model.h"
#include "shareformer/kd/train.h"
#include "shareformer/nn/mpc_layers.h"
#include "shareformer/nn/mpc_model.h"
#include "shareformer/protocols/arithmetic.h"
#include "shareformer/protocols/boolean.h"
#include "shareformer/protocols/io.h"
#include "shareformer/protocols/local_runner.h"
#include "shareformer/protocols/numeric.h"

namespace shareformer {
namespace {

std::vector<double> Uniform(size_t n, double lo, double hi) {
  std::mt19937_64 rng(n);
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

SharedTensor Input(Session& s, const std::vector<double>& v,
                   const Shape& shape) {
  std::vector<RingElement> enc;
  if (s.party() == 1) enc = s.codec().Encode(v);
  return ShareInput(s, 1, enc, shape);
}

// Runs `op` on a shared input of `shape` and reports the party-1 ledger.
template <typename Op>
void RunMpc(benchmark::State& state, const Shape& shape, double lo, double hi,
            Op op) {
  const auto values = Uniform(NumElements(shape), lo, hi);
  CommCounters last;
  for (auto _ : state) {
    auto out = RunLocal(LocalRunOptions(), [&](Session& s) {
      op(s, Input(s, values, shape));
      return 0;
    });
    last = out[0].ledger.Total();
  }
  state.counters["rounds"] = static_cast<double>(last.rounds);
  state.counters["bytes"] = static_cast<double>(last.bytes_sent);
  state.SetItemsProcessed(state.iterations() * NumElements(shape));
}

void BM_Mul(benchmark::State& state) {
  const size_t n = state.range(0);
  RunMpc(state, {n}, -10, 10,
         [](Session& s, const SharedTensor& x) { Mul(s, x, x); });
}
BENCHMARK(BM_Mul)->UseRealTime()->Arg(1 << 10)->Arg(1 << 14);

void BM_MatMul(benchmark::State& state) {
  const size_t n = state.range(0);
  RunMpc(state, {n, n}, -1, 1,
         [](Session& s, const SharedTensor& x) { MatMul(s, x, x); });
}
BENCHMARK(BM_MatMul)->UseRealTime()->Arg(32)->Arg(128);

void BM_Ltz(benchmark::State& state) {
  const size_t n = state.range(0);
  RunMpc(state, {n}, -10, 10,
         [](Session& s, const SharedTensor& x) { Ltz(s, x); });
}
BENCHMARK(BM_Ltz)->UseRealTime()->Arg(1 << 10)->Arg(1 << 14);

void BM_ExpIter(benchmark::State& state) {
  const size_t n = state.range(0);
  RunMpc(state, {n}, -8, 4,
         [](Session& s, const SharedTensor& x) { ExpIter(s, x); });
}
BENCHMARK(BM_ExpIter)->UseRealTime()->Arg(1 << 10);

void BM_ReciprocalNr(benchmark::State& state) {
  const size_t n = state.range(0);
  RunMpc(state, {n}, 0.1, 4096,
         [](Session& s, const SharedTensor& x) { ReciprocalNr(s, x); });
}
BENCHMARK(BM_ReciprocalNr)->UseRealTime()->Arg(1 << 10);

void BM_InvSqrtNr(benchmark::State& state) {
  const size_t n = state.range(0);
  RunMpc(state, {n}, 0.01, 4096,
         [](Session& s, const SharedTensor& x) { InvSqrtNr(s, x); });
}
BENCHMARK(BM_InvSqrtNr)->UseRealTime()->Arg(1 << 10);

void BM_Gelu(benchmark::State& state) {
  const auto variant = static_cast<GeluVariant>(state.range(0));
  state.SetLabel(std::string(ToString(variant)));
  RunMpc(state, {64, 64}, -4, 4,
         [variant](Session& s, const SharedTensor& x) { Gelu(s, x, variant); });
}
BENCHMARK(BM_Gelu)
    ->UseRealTime()
    ->Arg(static_cast<int>(GeluVariant::kExact))
    ->Arg(static_cast<int>(GeluVariant::kQuad));

void BM_Softmax(benchmark::State& state) {
  ApproximationSpec spec;
  spec.softmax = static_cast<SoftmaxVariant>(state.range(0));
  const size_t seq = state.range(1);
  state.SetLabel(std::string(ToString(spec.softmax)));
  RunMpc(state, {seq, seq}, -4, 4,
         [spec](Session& s, const SharedTensor& x) { Softmax(s, x, spec); });
}
BENCHMARK(BM_Softmax)
    ->UseRealTime()
    ->ArgsProduct({{static_cast<int>(SoftmaxVariant::kExact),
                    static_cast<int>(SoftmaxVariant::kTwoRelu),
                    static_cast<int>(SoftmaxVariant::kTwoQuad)},
                   {16, 64}});

void BM_Forward(benchmark::State& state) {
  ModelConfig config;
  config.approx = state.range(0) == 0   ? ApproximationSpec::Exact()
                  : state.range(0) == 1 ? ApproximationSpec::QuadTwoRelu()
                                        : ApproximationSpec::QuadTwoQuad();
  state.SetLabel(config.approx.Name());
  const TransformerWeights weights =
      kd::PlainModel::Random(config, 1).weights();
  std::vector<int> tokens(config.max_seq);
  for (int i = 0; i < config.max_seq; ++i)
    tokens[i] = (7 * i + 3) % config.vocab;
  CommCounters last;
  for (auto _ : state) {
    auto out = RunLocal(LocalRunOptions(), [&](Session& s) {
      const SharedModel model = ShareModel(s, config, &weights, 2);
      const auto x = ShareTokens(s, config, tokens, tokens.size(), 1);
      return InferLogits(s, model, x);
    });
    last = out[0].ledger.Total();
  }
  state.counters["rounds"] = static_cast<double>(last.rounds);
  state.counters["bytes"] = static_cast<double>(last.bytes_sent);
}
BENCHMARK(BM_Forward)
    ->UseRealTime()
    ->DenseRange(0, 2)
    ->Unit(benchmark::kMillisecond);

void BM_PlainTrainingEpoch(benchmark::State& state) {
  kd::ToyTaskParams task;
  task.train_size = 512;
  task.test_size = 1;
  task.pretrain_size = 0;
  const kd::Dataset data = kd::MakeToyDataset(task);
  ModelConfig config;
  config.approx = ApproximationSpec::QuadTwoQuad();
  kd::TrainConfig cfg;
  cfg.epochs = 1;
  for (auto _ : state) {
    kd::PlainModel m = kd::PlainModel::Random(config, 1);
    kd::TrainTask(m, data, cfg);
  }
  state.SetItemsProcessed(state.iterations() * task.train_size);
}
BENCHMARK(BM_PlainTrainingEpoch)->UseRealTime()->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace shareformer

BENCHMARK_MAIN();
