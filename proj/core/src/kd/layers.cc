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

#include "shareformer/kd/layers.h"

#include <cmath>
#include <utility>
#include <vector>

#include "shareformer/common/errors.h"
#include "shareformer/protocols/numeric.h"

namespace shareformer::kd {

namespace {

constexpr double kExpSteps = 256.0;

// Coefficients of erf(x) = sum_k a_k x^(2k+1), k = 0..7.
const std::vector<double>& ErfCoefficients() {
  static const std::vector<double> coef = [] {
    std::vector<double> c(8);
    double factorial = 1.0;
    for (int k = 0; k < 8; ++k) {
      if (k > 0) factorial *= k;
      c[k] = 2.0 / std::sqrt(M_PI) * ((k % 2 == 0) ? 1.0 : -1.0) /
             (factorial * (2 * k + 1));
    }
    return c;
  }();
  return coef;
}

double GeluValue(double x, GeluVariant variant, KernelMode mode) {
  if (variant == GeluVariant::kQuad) return 0.125 * x * x + 0.25 * x + 0.5;
  const double z = x / std::sqrt(2.0);
  const double e = mode == KernelMode::kExact ? std::erf(z) : ErfClamped(z);
  return 0.5 * x * (1.0 + e);
}

double GeluGrad(double x, GeluVariant variant, KernelMode mode) {
  if (variant == GeluVariant::kQuad) return 0.25 * x + 0.25;
  const double z = x / std::sqrt(2.0);
  if (mode == KernelMode::kExact) {
    return 0.5 * (1.0 + std::erf(z)) +
           x * std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
  }
  return 0.5 * (1.0 + ErfClamped(z)) +
         0.5 * x * ErfClampedGrad(z) / std::sqrt(2.0);
}

// Per-row softmax state kept for the backward pass.
struct SoftmaxRow {
  std::vector<double> dnum;  // d numerator / d score
  double denom = 0;
  int argmax = -1;  // column the max shift was taken from
};

}  // namespace

double ExpLimit(double x) { return std::pow(1.0 + x / kExpSteps, kExpSteps); }

double ExpLimitGrad(double x) {
  return std::pow(1.0 + x / kExpSteps, kExpSteps - 1.0);
}

double ErfClamped(double x) {
  if (x > kErfClamp) return 1.0;
  if (x < -kErfClamp) return -1.0;
  const auto& c = ErfCoefficients();
  const double x2 = x * x;
  double p = 0;
  for (int k = 7; k >= 0; --k) p = p * x2 + c[k];
  return x * p;
}

double ErfClampedGrad(double x) {
  if (std::fabs(x) > kErfClamp) return 0.0;
  const auto& c = ErfCoefficients();
  const double x2 = x * x;
  double p = 0;
  for (int k = 7; k >= 0; --k) p = p * x2 + c[k] * (2 * k + 1);
  return p;
}

Var Gelu(const Var& x, GeluVariant variant, KernelMode mode) {
  Mat out = x.value().unaryExpr(
      [variant, mode](double v) { return GeluValue(v, variant, mode); });
  const Var in[] = {x};
  return x.tape()->Push(
      "gelu", std::move(out), in, [x, variant, mode](const Mat& g) {
        Mat d = x.value().unaryExpr(
            [variant, mode](double v) { return GeluGrad(v, variant, mode); });
        x.tape()->Accumulate(x, g.cwiseProduct(d));
      });
}

Var LayerNorm(const Var& x, const Var& gain, const Var& bias, double eps) {
  const Mat& v = x.value();
  const Eigen::Index h = v.cols();
  SF_ENFORCE(gain.rows() == 1 && gain.cols() == h && bias.rows() == 1 &&
                 bias.cols() == h,
             "layer norm parameters must be 1x", h);
  Mat xhat(v.rows(), h);
  Eigen::VectorXd inv_std(v.rows());
  for (Eigen::Index r = 0; r < v.rows(); ++r) {
    const double mean = v.row(r).mean();
    const auto centered = v.row(r).array() - mean;
    const double var = centered.square().mean();
    inv_std(r) = 1.0 / std::sqrt(var + eps);
    xhat.row(r) = centered * inv_std(r);
  }
  Mat out = (xhat.array().rowwise() * gain.value().row(0).array()).matrix();
  out.rowwise() += bias.value().row(0);
  const Var in[] = {x, gain, bias};
  return x.tape()->Push(
      "layer_norm", std::move(out), in,
      [x, gain, bias, xhat = std::move(xhat),
       inv_std = std::move(inv_std)](const Mat& g) {
        Tape& t = *x.tape();
        if (t.NeedsGrad(gain))
          t.Accumulate(gain, g.cwiseProduct(xhat).colwise().sum());
        if (t.NeedsGrad(bias)) t.Accumulate(bias, g.colwise().sum());
        if (!t.NeedsGrad(x)) return;
        const double h = static_cast<double>(xhat.cols());
        Mat gx(xhat.rows(), xhat.cols());
        for (Eigen::Index r = 0; r < xhat.rows(); ++r) {
          const Eigen::RowVectorXd gh =
              g.row(r).array() * gain.value().row(0).array();
          const double mean_gh = gh.sum() / h;
          const double mean_ghx = gh.dot(xhat.row(r)) / h;
          gx.row(r) = inv_std(r) *
                      (gh.array() - mean_gh - xhat.row(r).array() * mean_ghx);
        }
        t.Accumulate(x, gx);
      });
}

Var AttentionProbs(const Var& q, const Var& k, const AttentionShape& shape,
                   const ApproximationSpec& spec, KernelMode mode,
                   std::span<const double> keep) {
  const int B = shape.batch, S = shape.seq, H = shape.heads;
  const Eigen::Index hidden = q.cols();
  SF_ENFORCE(q.rows() == B * S && k.rows() == B * S && k.cols() == hidden,
             "attention inputs must be (batch*seq x hidden)");
  SF_ENFORCE(hidden % H == 0, "hidden not divisible by heads");
  SF_ENFORCE(keep.empty() || keep.size() == static_cast<size_t>(B * S),
             "keep mask must have batch*seq entries");
  const Eigen::Index d = hidden / H;
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  const bool approx = spec.softmax != SoftmaxVariant::kExact;
  const double eps = approx ? kSoftmaxDenominatorEps : 0.0;

  Mat probs(static_cast<Eigen::Index>(B) * H * S, S);
  std::vector<SoftmaxRow> rows(probs.rows());
  for (int b = 0; b < B; ++b) {
    for (int h = 0; h < H; ++h) {
      const Mat scores = q.value().block(b * S, h * d, S, d) *
                         k.value().block(b * S, h * d, S, d).transpose() *
                         scale;
      for (int i = 0; i < S; ++i) {
        const Eigen::Index r = (static_cast<Eigen::Index>(b) * H + h) * S + i;
        SoftmaxRow& st = rows[r];
        st.dnum.assign(S, 0.0);
        const auto kept = [&](int j) {
          return keep.empty() || keep[b * S + j] != 0.0;
        };
        double top = 0;
        if (spec.softmax == SoftmaxVariant::kExact) {
          for (int j = 0; j < S; ++j) {
            if (kept(j) && (st.argmax < 0 || scores(i, j) > top)) {
              top = scores(i, j);
              st.argmax = j;
            }
          }
        }
        double sum = 0;
        for (int j = 0; j < S; ++j) {
          double n = 0, dn = 0;
          if (kept(j)) {
            const double s = scores(i, j);
            switch (spec.softmax) {
              case SoftmaxVariant::kExact:
                if (mode == KernelMode::kExact) {
                  n = dn = std::exp(s - top);
                } else {
                  n = ExpLimit(s - top);
                  dn = ExpLimitGrad(s - top);
                }
                break;
              case SoftmaxVariant::kTwoRelu:
                n = std::max(s, 0.0);
                dn = s > 0 ? 1.0 : 0.0;
                break;
              case SoftmaxVariant::kTwoQuad:
                n = (s + spec.two_quad_c) * (s + spec.two_quad_c);
                dn = 2.0 * (s + spec.two_quad_c);
                break;
            }
          }
          probs(r, j) = n;
          st.dnum[j] = dn;
          sum += n;
        }
        st.denom = sum + eps;
        probs.row(r) /= st.denom;
      }
    }
  }

  const Var in[] = {q, k};
  Mat probs_copy = probs;
  return q.tape()->Push(
      "attention_probs", std::move(probs), in,
      [q, k, shape, d, scale, rows = std::move(rows),
       p = std::move(probs_copy)](const Mat& g) {
        const int B = shape.batch, S = shape.seq, H = shape.heads;
        Mat gq = Mat::Zero(q.rows(), q.cols());
        Mat gk = Mat::Zero(k.rows(), k.cols());
        Mat gs(S, S);
        for (int b = 0; b < B; ++b) {
          for (int h = 0; h < H; ++h) {
            for (int i = 0; i < S; ++i) {
              const Eigen::Index r =
                  (static_cast<Eigen::Index>(b) * H + h) * S + i;
              const SoftmaxRow& st = rows[r];
              const double gp = g.row(r).dot(p.row(r));
              double shift = 0;
              for (int j = 0; j < S; ++j) {
                const double gn = (g(r, j) - gp) / st.denom;
                gs(i, j) = gn * st.dnum[j];
                shift += gs(i, j);
              }
              if (st.argmax >= 0) gs(i, st.argmax) -= shift;
            }
            gs *= scale;
            gq.block(b * S, h * d, S, d) +=
                gs * k.value().block(b * S, h * d, S, d);
            gk.block(b * S, h * d, S, d) +=
                gs.transpose() * q.value().block(b * S, h * d, S, d);
          }
        }
        q.tape()->Accumulate(q, gq);
        k.tape()->Accumulate(k, gk);
      });
}

Var AttentionContext(const Var& probs, const Var& v,
                     const AttentionShape& shape) {
  const int B = shape.batch, S = shape.seq, H = shape.heads;
  SF_ENFORCE(probs.rows() == static_cast<Eigen::Index>(B) * H * S &&
                 probs.cols() == S && v.rows() == B * S && v.cols() % H == 0,
             "attention context shape mismatch");
  const Eigen::Index d = v.cols() / H;
  Mat ctx(v.rows(), v.cols());
  for (int b = 0; b < B; ++b) {
    for (int h = 0; h < H; ++h) {
      ctx.block(b * S, h * d, S, d).noalias() =
          probs.value().middleRows((static_cast<Eigen::Index>(b) * H + h) * S,
                                   S) *
          v.value().block(b * S, h * d, S, d);
    }
  }
  const Var in[] = {probs, v};
  return v.tape()->Push(
      "attention_context", std::move(ctx), in,
      [probs, v, shape, d](const Mat& g) {
        const int B = shape.batch, S = shape.seq, H = shape.heads;
        Mat gp(probs.rows(), probs.cols());
        Mat gv(v.rows(), v.cols());
        for (int b = 0; b < B; ++b) {
          for (int h = 0; h < H; ++h) {
            const Eigen::Index r = (static_cast<Eigen::Index>(b) * H + h) * S;
            const auto gb = g.block(b * S, h * d, S, d);
            gp.middleRows(r, S).noalias() =
                gb * v.value().block(b * S, h * d, S, d).transpose();
            gv.block(b * S, h * d, S, d).noalias() =
                probs.value().middleRows(r, S).transpose() * gb;
          }
        }
        v.tape()->Accumulate(probs, gp);
        v.tape()->Accumulate(v, gv);
      });
}

}  // namespace shareformer::kd
