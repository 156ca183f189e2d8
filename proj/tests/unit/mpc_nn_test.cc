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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numeric>
#include <random>
#include <vector>

#include "gtest/gtest.h"
#include "shareformer/common/errors.h"
#include "shareformer/nn/model_config.h"
#include "shareformer/nn/mpc_layers.h"
#include "shareformer/nn/mpc_model.h"
#include "shareformer/nn/weights.h"
#include "shareformer/protocols/io.h"
#include "shareformer/protocols/local_runner.h"

namespace shareformer {
namespace {

using Matrix = std::vector<std::vector<double>>;

SharedTensor Input(Session& s, int owner, const std::vector<double>& v,
                   Shape shape = {}) {
  if (shape.empty()) shape = {v.size()};
  std::vector<RingElement> enc;
  if (s.party() == owner) enc = s.codec().Encode(v);
  return ShareInput(s, owner, enc, shape);
}

std::vector<double> Open(Session& s, const SharedTensor& x) {
  return s.codec().Decode(Reveal(s, x));
}

std::vector<double> Uniform(size_t n, double lo, double hi,
                            std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> v(n);
  for (auto& e : v) e = d(rng);
  return v;
}

// Evaluates `op` on a shared (rows x cols) input and returns the decoded
// result together with the rounds it spent.
template <typename Op>
std::pair<std::vector<double>, std::uint64_t> Eval(
    Op op, const std::vector<double>& in, Shape shape = {}) {
  auto out = RunLocal({}, [&](Session& s) {
    const SharedTensor x = Input(s, 1, in, shape);
    const auto before = s.ledger().Total().rounds;
    const SharedTensor y = op(s, x);
    const auto rounds = s.ledger().Total().rounds - before;
    return std::make_pair(Open(s, y), rounds);
  });
  EXPECT_EQ(out[0].value, out[1].value);
  return out[0].value;
}

// Plaintext references for the approximated kernels.
double ExpLimit(double x) { return std::pow(1.0 + x / 256.0, 256.0); }

std::vector<double> SoftmaxRef(const std::vector<double>& row,
                               const ApproximationSpec& spec,
                               const std::vector<double>& keep) {
  const size_t n = row.size();
  std::vector<double> num(n);
  const auto kept = [&](size_t j) { return keep.empty() || keep[j] != 0.0; };
  double top = -1e300;
  for (size_t j = 0; j < n; ++j) {
    if (kept(j)) top = std::max(top, row[j]);
  }
  for (size_t j = 0; j < n; ++j) {
    if (!kept(j)) continue;
    switch (spec.softmax) {
      case SoftmaxVariant::kExact:
        num[j] = ExpLimit(row[j] - top);
        break;
      case SoftmaxVariant::kTwoRelu:
        num[j] = std::max(row[j], 0.0);
        break;
      case SoftmaxVariant::kTwoQuad:
        num[j] = (row[j] + spec.two_quad_c) * (row[j] + spec.two_quad_c);
        break;
    }
  }
  const double denom =
      std::accumulate(num.begin(), num.end(), 0.0) + kSoftmaxDenominatorEps;
  for (auto& v : num) v /= denom;
  return num;
}

const std::vector<ApproximationSpec> kSpecs = {
    ApproximationSpec::Exact(), ApproximationSpec::QuadTwoRelu(),
    ApproximationSpec::QuadTwoQuad()};

TEST(GeluTest, QuadExamples) {
  const auto [y, rounds] = Eval(GeluQuad, {0.0, 2.0, -2.0});
  EXPECT_NEAR(y[0], 0.5, 1e-4);
  EXPECT_NEAR(y[1], 1.5, 1e-4);
  EXPECT_NEAR(y[2], 0.5, 1e-4);
  EXPECT_EQ(rounds, 1u);
}

TEST(GeluTest, ExactExamples) {
  const auto [y, rounds] = Eval(GeluExact, {0.0, 3.0, -10.0});
  EXPECT_NEAR(y[0], 0.0, 1e-4);
  // 3 * (1 + erf(3 / sqrt 2)) / 2 = 2.99595
  EXPECT_NEAR(y[1], 2.99595, 1e-2);
  EXPECT_NEAR(y[2], 0.0, 1e-2);
  EXPECT_EQ(rounds, 14u);
}

TEST(GeluTest, QuadCheaperThanExact) {
  const auto in = Uniform(64, -4, 4, 1);
  EXPECT_LT(Eval(GeluQuad, in).second, Eval(GeluExact, in).second);
}

TEST(SoftmaxTest, ExactUniformRow) {
  const auto [y, rounds] =
      Eval([](Session& s, const SharedTensor& x) { return SoftmaxExact(s, x); },
           std::vector<double>(8, 1.25), {1, 8});
  for (double v : y) EXPECT_NEAR(v, 0.125, 1e-3);
  // Three max levels, exp, reciprocal, one product.
  EXPECT_EQ(rounds, 3u * 8 + 8 + 33 + 1);
}

TEST(SoftmaxTest, ExactTwoPoint) {
  const auto [y, rounds] =
      Eval([](Session& s, const SharedTensor& x) { return SoftmaxExact(s, x); },
           {0.0, std::log(2.0)}, {1, 2});
  EXPECT_NEAR(y[0], 1.0 / 3, 1e-2);
  EXPECT_NEAR(y[1], 2.0 / 3, 1e-2);
}

TEST(SoftmaxTest, ExactRowsSumToOne) {
  const size_t rows = 8, cols = 16;
  const auto [y, rounds] =
      Eval([](Session& s, const SharedTensor& x) { return SoftmaxExact(s, x); },
           Uniform(rows * cols, -4, 4, 2), {rows, cols});
  for (size_t r = 0; r < rows; ++r) {
    const double sum =
        std::accumulate(y.begin() + r * cols, y.begin() + (r + 1) * cols, 0.0);
    EXPECT_GE(sum, 0.999);
    EXPECT_LE(sum, 1.001);
  }
}

TEST(SoftmaxTest, TwoReluExamples) {
  const auto [y, rounds] =
      Eval([](Session& s, const SharedTensor& x) { return Softmax2Relu(s, x); },
           {1.0, -1.0, 2.0, -1.0, -2.0, -0.5}, {2, 3});
  EXPECT_NEAR(y[0], 1.0 / 3, 1e-3);
  EXPECT_NEAR(y[1], 0.0, 1e-3);
  EXPECT_NEAR(y[2], 2.0 / 3, 1e-3);
  // An all-negative row has a zero numerator and yields zeros.
  for (size_t j = 3; j < 6; ++j) EXPECT_EQ(y[j], 0.0);
}

TEST(SoftmaxTest, TwoQuadExamples) {
  const auto [y, rounds] =
      Eval([](Session& s, const SharedTensor& x) { return Softmax2Quad(s, x); },
           {0.0, 0.0, 1.0, 0.0}, {2, 2});
  EXPECT_NEAR(y[0], 0.5, 1e-3);
  EXPECT_NEAR(y[1], 0.5, 1e-3);
  EXPECT_NEAR(y[2], 36.0 / 61, 1e-3);
  EXPECT_NEAR(y[3], 25.0 / 61, 1e-3);
}

TEST(SoftmaxTest, TwoQuadMaskingZeroesAndIsolates) {
  const std::vector<double> keep = {1, 1, 0};
  auto run = [&](double masked_logit) {
    auto out = RunLocal({}, [&](Session& s) {
      const SharedTensor x = Input(s, 1, {1.0, 0.0, masked_logit}, {1, 3});
      return Reveal(s, Softmax2Quad(s, x, keep));
    });
    return out[0].value;
  };
  const auto a = run(9999.0);
  const auto b = run(-37.5);
  EXPECT_EQ(a[2], 0u);
  EXPECT_EQ(b[2], 0u);
  const FixedPointCodec codec;
  EXPECT_NEAR(codec.Decode(a[0]), 36.0 / 61, 1e-3);
  EXPECT_NEAR(codec.Decode(a[1]), 25.0 / 61, 1e-3);
  // Same dealer stream and same unmasked values: identical outputs.
  EXPECT_EQ(a[0], b[0]);
  EXPECT_EQ(a[1], b[1]);
}

TEST(SoftmaxTest, AdditiveMaskOnExact) {
  const std::vector<double> keep = {1, 0, 1, 1};
  const auto [y, rounds] =
      Eval([&](Session& s,
               const SharedTensor& x) { return SoftmaxExact(s, x, keep); },
           {0.5, 3.0, -0.5, 0.0}, {1, 4});
  const auto ref =
      SoftmaxRef({0.5, 3.0, -0.5, 0.0}, ApproximationSpec::Exact(), keep);
  EXPECT_EQ(y[1], 0.0);
  for (size_t j = 0; j < 4; ++j) EXPECT_NEAR(y[j], ref[j], 1e-2);
}

TEST(SoftmaxTest, RoundOrdering) {
  const auto in = Uniform(4 * 16, -3, 3, 3);
  auto rounds = [&](SoftmaxVariant v) {
    ApproximationSpec spec;
    spec.softmax = v;
    return Eval([&](Session& s,
                    const SharedTensor& x) { return Softmax(s, x, spec); },
                in, {4, 16})
        .second;
  };
  const auto exact = rounds(SoftmaxVariant::kExact);
  const auto relu = rounds(SoftmaxVariant::kTwoRelu);
  const auto quad = rounds(SoftmaxVariant::kTwoQuad);
  EXPECT_LT(quad, relu);
  EXPECT_LT(relu, exact);
  EXPECT_EQ(exact, 74u);
  EXPECT_EQ(relu, 42u);
  EXPECT_EQ(quad, 35u);
}

TEST(SoftmaxTest, ByteOrdering) {
  const auto in = Uniform(4 * 16, -3, 3, 4);
  auto bytes = [&](SoftmaxVariant v) {
    ApproximationSpec spec;
    spec.softmax = v;
    auto out = RunLocal({}, [&](Session& s) {
      const SharedTensor x = Input(s, 1, in, {4, 16});
      const auto before = s.ledger().Total().bytes_sent;
      Softmax(s, x, spec);
      return s.ledger().Total().bytes_sent - before;
    });
    return out[0].value;
  };
  EXPECT_LT(bytes(SoftmaxVariant::kTwoQuad), bytes(SoftmaxVariant::kTwoRelu));
  EXPECT_LT(bytes(SoftmaxVariant::kTwoRelu), bytes(SoftmaxVariant::kExact));
}

TEST(LayerNormTest, ConstantRowGivesBias) {
  const std::vector<double> bias = {0.25, -1.5, 3.0, 0.0};
  auto out = RunLocal({}, [&](Session& s) {
    const SharedTensor x =
        Input(s, 1, {2.5, 2.5, 2.5, 2.5, -7, -7, -7, -7}, {2, 4});
    const SharedTensor g = Input(s, 2, {1.0, 2.0, -1.0, 0.5}, {4});
    const SharedTensor b = Input(s, 2, bias, {4});
    return Reveal(s, LayerNorm(s, x, g, b));
  });
  const FixedPointCodec codec;
  for (size_t i = 0; i < 8; ++i) {
    EXPECT_EQ(out[0].value[i], codec.Encode(bias[i % 4]));
  }
}

TEST(LayerNormTest, RandomRowsMatchMoments) {
  const size_t rows = 6, h = 32;
  const auto in = Uniform(rows * h, -3, 5, 5);
  const auto gain = Uniform(h, 0.5, 2.0, 6);
  const auto bias = Uniform(h, -1, 1, 7);
  const auto [y, rounds] = Eval(
      [&](Session& s, const SharedTensor& x) {
        return LayerNorm(s, x, Input(s, 2, gain), Input(s, 2, bias));
      },
      in, {rows, h});
  for (size_t r = 0; r < rows; ++r) {
    double mean = 0, var = 0;
    for (size_t j = 0; j < h; ++j) mean += in[r * h + j] / h;
    for (size_t j = 0; j < h; ++j) {
      var += (in[r * h + j] - mean) * (in[r * h + j] - mean) / h;
    }
    for (size_t j = 0; j < h; ++j) {
      const double ref =
          (in[r * h + j] - mean) / std::sqrt(var + kLayerNormEps) * gain[j] +
          bias[j];
      EXPECT_NEAR(y[r * h + j], ref, 0.02 * std::max(1.0, std::fabs(ref)));
    }
  }
  EXPECT_EQ(rounds, 35u);
}

TEST(LayerNormTest, StandardizedInputIsFixedPoint) {
  const size_t h = 16;
  std::vector<double> in = Uniform(h, -2, 2, 8);
  const double mean = std::accumulate(in.begin(), in.end(), 0.0) / h;
  double var = 0;
  for (auto& v : in) v -= mean;
  for (double v : in) var += v * v / h;
  for (auto& v : in) v /= std::sqrt(var);
  const auto [y, rounds] = Eval(
      [&](Session& s, const SharedTensor& x) {
        return LayerNorm(s, x, Input(s, 2, std::vector<double>(h, 1.0)),
                         Input(s, 2, std::vector<double>(h, 0.0)));
      },
      in, {1, h});
  for (size_t j = 0; j < h; ++j) {
    EXPECT_NEAR(y[j], in[j], 0.02 * std::max(1.0, std::fabs(in[j])));
  }
}

Matrix AttentionRef(const std::vector<double>& q, const std::vector<double>& k,
                    const std::vector<double>& v, size_t seq, size_t d,
                    const ApproximationSpec& spec,
                    const std::vector<double>& keep) {
  Matrix out(seq, std::vector<double>(d, 0.0));
  for (size_t i = 0; i < seq; ++i) {
    std::vector<double> row(seq);
    for (size_t j = 0; j < seq; ++j) {
      for (size_t t = 0; t < d; ++t) row[j] += q[i * d + t] * k[j * d + t];
      row[j] /= std::sqrt(static_cast<double>(d));
    }
    const auto p = SoftmaxRef(row, spec, keep);
    for (size_t j = 0; j < seq; ++j) {
      for (size_t t = 0; t < d; ++t) out[i][t] += p[j] * v[j * d + t];
    }
  }
  return out;
}

TEST(AttentionTest, SingleTokenReturnsValueRow) {
  for (const auto& spec : kSpecs) {
    auto out = RunLocal({}, [&](Session& s) {
      const SharedTensor q = Input(s, 1, {0.5, -1.0, 2.0}, {1, 3});
      const SharedTensor k = Input(s, 1, {1.0, -0.25, 0.75}, {1, 3});
      const SharedTensor v = Input(s, 1, {1.5, -2.0, 0.125}, {1, 3});
      return Open(s, Attention(s, q, k, v, spec));
    });
    EXPECT_NEAR(out[0].value[0], 1.5, 1e-3) << spec.Name();
    EXPECT_NEAR(out[0].value[1], -2.0, 1e-3) << spec.Name();
    EXPECT_NEAR(out[0].value[2], 0.125, 1e-3) << spec.Name();
  }
}

TEST(AttentionTest, MatchesPlaintextForEverySpec) {
  const size_t seq = 8, d = 16;
  const auto q = Uniform(seq * d, -1, 1, 9);
  const auto k = Uniform(seq * d, -1, 1, 10);
  const auto v = Uniform(seq * d, -1, 1, 11);
  const std::vector<double> keep = {1, 1, 1, 1, 1, 1, 0, 0};
  for (const auto& spec : kSpecs) {
    const Matrix ref = AttentionRef(q, k, v, seq, d, spec, keep);
    auto out = RunLocal({}, [&](Session& s) {
      return Open(
          s, Attention(s, Input(s, 1, q, {seq, d}), Input(s, 1, k, {seq, d}),
                       Input(s, 1, v, {seq, d}), spec, keep));
    });
    double worst = 0;
    for (size_t i = 0; i < seq; ++i) {
      for (size_t t = 0; t < d; ++t) {
        worst = std::max(worst, std::fabs(out[0].value[i * d + t] - ref[i][t]));
      }
    }
    EXPECT_LE(worst, 1e-2) << spec.Name();
  }
}

TEST(AttentionTest, AllOnesMaskEqualsNoMask) {
  const size_t seq = 4, d = 4;
  const auto q = Uniform(seq * d, -1, 1, 12);
  const auto k = Uniform(seq * d, -1, 1, 13);
  const auto v = Uniform(seq * d, -1, 1, 14);
  auto run = [&](std::vector<double> keep) {
    auto out = RunLocal({}, [&](Session& s) {
      return Reveal(
          s, Attention(s, Input(s, 1, q, {seq, d}), Input(s, 1, k, {seq, d}),
                       Input(s, 1, v, {seq, d}), ApproximationSpec::Exact(),
                       keep));
    });
    return out[0].value;
  };
  EXPECT_EQ(run({1, 1, 1, 1}), run({}));
}

TEST(AttentionTest, MultiHeadMatchesPerHead) {
  const size_t seq = 4, heads = 2, d = 3, hidden = heads * d;
  const auto qkv = Uniform(seq * 3 * hidden, -1, 1, 15);
  auto out = RunLocal({}, [&](Session& s) {
    return Open(s, MultiHeadAttention(s, Input(s, 1, qkv, {seq, 3 * hidden}),
                                      heads, ApproximationSpec::QuadTwoQuad()));
  });
  for (size_t h = 0; h < heads; ++h) {
    std::vector<double> q, k, v;
    for (size_t i = 0; i < seq; ++i) {
      for (size_t t = 0; t < d; ++t) {
        q.push_back(qkv[i * 3 * hidden + h * d + t]);
        k.push_back(qkv[i * 3 * hidden + hidden + h * d + t]);
        v.push_back(qkv[i * 3 * hidden + 2 * hidden + h * d + t]);
      }
    }
    const Matrix ref =
        AttentionRef(q, k, v, seq, d, ApproximationSpec::QuadTwoQuad(), {});
    for (size_t i = 0; i < seq; ++i) {
      for (size_t t = 0; t < d; ++t) {
        EXPECT_NEAR(out[0].value[i * hidden + h * d + t], ref[i][t], 1e-2);
      }
    }
  }
}

TransformerWeights RandomWeights(const ModelConfig& config,
                                 std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d(0.0, 0.2);
  TransformerWeights w;
  for (const auto& [name, shape] : ParameterShapes(config)) {
    RealTensor t;
    t.shape = shape;
    t.values.resize(NumElements(shape));
    const bool gain = name.find("gain") != std::string::npos;
    for (auto& v : t.values) v = gain ? 1.0 + d(rng) : d(rng);
    w.emplace(name, std::move(t));
  }
  return w;
}

TEST(ForwardTest, ZeroLayersIsHeadOfEmbedding) {
  ModelConfig config;
  config.layers = 0;
  config.hidden = 8;
  config.vocab = 10;
  config.max_seq = 4;
  config.classes = 3;
  const auto w = RandomWeights(config, 16);
  const std::vector<int> tokens = {7, 2, 2};
  auto out = RunLocal({}, [&](Session& s) {
    const SharedModel m = ShareModel(s, config, s.party() == 2 ? &w : nullptr);
    const SharedTensor x = ShareTokens(
        s, config,
        s.party() == 1 ? std::span<const int>(tokens) : std::span<const int>(),
        tokens.size());
    return InferLogits(s, m, x);
  });
  ASSERT_TRUE(out[0].value.has_value());
  EXPECT_FALSE(out[1].value.has_value());
  const auto& e = w.at("embed.token").values;
  const auto& p = w.at("embed.position").values;
  const auto& hw = w.at("head.weight").values;
  const auto& hb = w.at("head.bias").values;
  for (int c = 0; c < config.classes; ++c) {
    double ref = hb[c];
    for (int j = 0; j < config.hidden; ++j) {
      ref += (e[tokens[0] * config.hidden + j] + p[j]) *
             hw[j * config.classes + c];
    }
    EXPECT_NEAR((*out[0].value)[c], ref, 1e-3);
  }
}

TEST(ForwardTest, RejectsShapeMismatch) {
  ModelConfig config;
  config.layers = 0;
  const auto w = RandomWeights(config, 17);
  EXPECT_THROW(
      RunLocal({},
               [&](Session& s) {
                 const SharedModel m =
                     ShareModel(s, config, s.party() == 2 ? &w : nullptr);
                 const SharedTensor x = Input(
                     s, 1, std::vector<double>(4 * (config.vocab + 1), 0.0),
                     {4, static_cast<size_t>(config.vocab + 1)});
                 return Forward(s, m, x).size();
               }),
      ContractViolation);
  EXPECT_THROW(
      RunLocal({},
               [&](Session& s) {
                 const std::vector<int> tokens(config.max_seq + 1, 1);
                 return ShareTokens(s, config, tokens, tokens.size()).size();
               }),
      ContractViolation);
  TransformerWeights bad = w;
  bad.at("head.bias").values.pop_back();
  bad.at("head.bias").shape = {static_cast<size_t>(config.classes - 1)};
  EXPECT_THROW(ValidateWeights(bad, config), ContractViolation);
}

TEST(ForwardTest, LedgerScopesPartitionTotal) {
  ModelConfig config;
  config.layers = 1;
  config.max_seq = 8;
  const auto w = RandomWeights(config, 18);
  const std::vector<int> tokens = {0, 5, 9, 12, 3, 3};
  auto out = RunLocal({}, [&](Session& s) {
    const SharedModel m = ShareModel(s, config, s.party() == 2 ? &w : nullptr);
    const SharedTensor x = ShareTokens(
        s, config,
        s.party() == 1 ? std::span<const int>(tokens) : std::span<const int>(),
        tokens.size());
    InferLogits(s, m, x);
    return s.ledger().ByTopLevel();
  });
  CommCounters sum;
  for (const auto& [label, counters] : out[0].value) {
    EXPECT_TRUE(label == "MatMul" || label == "GeLU" || label == "Softmax" ||
                label == "LayerNorm" || label == "Other")
        << label;
    sum += counters;
  }
  const CommCounters total = out[0].ledger.Total();
  EXPECT_EQ(sum.rounds, total.rounds);
  EXPECT_EQ(sum.bytes_sent, total.bytes_sent);
  // Six columns take three max levels.
  EXPECT_EQ(out[0].value.at("Softmax").rounds, 3u * 8 + 8 + 33 + 1);
  EXPECT_EQ(out[0].value.at("LayerNorm").rounds, 70u);
  EXPECT_EQ(out[0].value.at("GeLU").rounds, 14u);
  EXPECT_EQ(out[0].value.at("Other").rounds, 1u);
}

TEST(ForwardTest, SoftmaxDominatesBytesAtLongSequence) {
  ModelConfig config;
  config.layers = 1;
  config.max_seq = 64;
  const auto w = RandomWeights(config, 19);
  std::vector<int> tokens(64);
  for (size_t i = 0; i < tokens.size(); ++i) tokens[i] = (i * 7) % config.vocab;
  auto out = RunLocal({}, [&](Session& s) {
    const SharedModel m = ShareModel(s, config, s.party() == 2 ? &w : nullptr);
    const SharedTensor x = ShareTokens(
        s, config,
        s.party() == 1 ? std::span<const int>(tokens) : std::span<const int>(),
        tokens.size());
    Forward(s, m, x);
    return s.ledger().ByTopLevel();
  });
  const auto& scopes = out[0].value;
  const auto softmax = scopes.at("Softmax").bytes_sent;
  for (const auto& [label, counters] : scopes) {
    if (label != "Softmax") EXPECT_GT(softmax, counters.bytes_sent) << label;
  }
}

TEST(WeightsTest, FileRoundTrip) {
  ModelConfig config;
  config.approx = ApproximationSpec::QuadTwoQuad();
  WeightFile file{config, RandomWeights(config, 20)};
  const auto path =
      (std::filesystem::temp_directory_path() / "sf_weights_test.sfmw")
          .string();
  SaveWeightFile(path, file);
  const WeightFile back = LoadWeightFile(path);
  std::filesystem::remove(path);
  EXPECT_EQ(back.config, config);
  ASSERT_EQ(back.weights.size(), file.weights.size());
  for (const auto& [name, t] : file.weights) {
    EXPECT_EQ(back.weights.at(name).shape, t.shape) << name;
    EXPECT_EQ(back.weights.at(name).values, t.values) << name;
  }
}

TEST(WeightsTest, RejectsCorruptFile) {
  const auto path =
      (std::filesystem::temp_directory_path() / "sf_weights_bad.sfmw").string();
  std::FILE* f = std::fopen(path.c_str(), "wb");
  std::fputs("SFMX", f);
  std::fclose(f);
  EXPECT_ANY_THROW(LoadWeightFile(path));
  std::filesystem::remove(path);
}

TEST(ModelConfigTest, JsonRoundTripAndValidation) {
  ModelConfig config;
  config.approx = ApproximationSpec::QuadTwoRelu();
  config.approx.two_quad_c = 3.5;
  EXPECT_EQ(ModelConfigFromJson(ToJson(config)), config);
  EXPECT_EQ(ToJson(config), ToJson(ModelConfigFromJson(ToJson(config))));
  ModelConfig bad;
  bad.heads = 3;
  EXPECT_THROW(bad.Validate(), ContractViolation);
  bad = ModelConfig();
  bad.layers = -1;
  EXPECT_THROW(bad.Validate(), ContractViolation);
  EXPECT_EQ(ParseSoftmaxVariant("2quad"), SoftmaxVariant::kTwoQuad);
  EXPECT_THROW(ParseGeluVariant("cubic"), ContractViolation);
}

}  // namespace
}  // namespace shareformer
