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

#include "shareformer/kd/autodiff.h"

#include <cmath>
#include <utility>

#include "shareformer/common/errors.h"

namespace shareformer::kd {

const Mat& Var::value() const {
  SF_ENFORCE(tape_ != nullptr, "use of an empty Var");
  return tape_->value(id_);
}

Var Tape::Add(Node node) {
  nodes_.push_back(std::move(node));
  return Var(this, static_cast<int>(nodes_.size()) - 1);
}

Var Tape::Constant(Mat value) {
  Node n;
  n.value = std::move(value);
  return Add(std::move(n));
}

Var Tape::Leaf(Parameter& param) {
  Node n;
  n.value = param.value;
  if (record_) {
    n.param = &param;
    n.needs_grad = true;
  }
  return Add(std::move(n));
}

Var Tape::Push(const char* op, Mat value, std::span<const Var> inputs,
               BackwardFn fn) {
  if (!value.allFinite()) {
    throw TrainingError(internal::StrCat("non-finite value produced by ", op));
  }
  Node n;
  n.value = std::move(value);
  if (record_) {
    for (const Var& in : inputs) {
      SF_ENFORCE(in.tape() == this, op, ": input belongs to another tape");
      n.needs_grad = n.needs_grad || nodes_[in.id()].needs_grad;
    }
    if (n.needs_grad) n.backward = std::move(fn);
  }
  return Add(std::move(n));
}

bool Tape::NeedsGrad(const Var& v) const { return nodes_[v.id()].needs_grad; }

void Tape::Accumulate(const Var& v, const Mat& grad) {
  Node& n = nodes_[v.id()];
  if (!n.needs_grad) return;
  if (n.grad.size() == 0) {
    n.grad = grad;
  } else {
    n.grad += grad;
  }
}

void Tape::Backward(const Var& loss) {
  SF_ENFORCE(record_, "backward on a non-recording tape");
  SF_ENFORCE(loss.tape() == this, "loss belongs to another tape");
  SF_ENFORCE(loss.rows() == 1 && loss.cols() == 1,
             "backward needs a scalar loss, got ", loss.rows(), "x",
             loss.cols());
  Accumulate(loss, Mat::Ones(1, 1));
  for (int i = loss.id(); i >= 0; --i) {
    Node& n = nodes_[i];
    if (n.grad.size() == 0) continue;
    if (n.backward) n.backward(n.grad);
    if (n.param != nullptr) {
      if (n.param->grad.size() == 0) n.param->ZeroGrad();
      n.param->grad += n.grad;
    }
    n.grad.resize(0, 0);
  }
}

Var MatMul(const Var& a, const Var& b) {
  SF_ENFORCE(a.cols() == b.rows(), "matmul shapes ", a.rows(), "x", a.cols(),
             " and ", b.rows(), "x", b.cols());
  Mat out = a.value() * b.value();
  const Var in[] = {a, b};
  return a.tape()->Push("matmul", std::move(out), in, [a, b](const Mat& g) {
    Tape& t = *a.tape();
    if (t.NeedsGrad(a)) t.Accumulate(a, g * b.value().transpose());
    if (t.NeedsGrad(b)) t.Accumulate(b, a.value().transpose() * g);
  });
}

Var Add(const Var& a, const Var& b) {
  SF_ENFORCE(a.rows() == b.rows() && a.cols() == b.cols(),
             "add shape mismatch");
  const Var in[] = {a, b};
  return a.tape()->Push("add", a.value() + b.value(), in, [a, b](const Mat& g) {
    a.tape()->Accumulate(a, g);
    a.tape()->Accumulate(b, g);
  });
}

Var Sub(const Var& a, const Var& b) {
  SF_ENFORCE(a.rows() == b.rows() && a.cols() == b.cols(),
             "sub shape mismatch");
  const Var in[] = {a, b};
  return a.tape()->Push("sub", a.value() - b.value(), in, [a, b](const Mat& g) {
    a.tape()->Accumulate(a, g);
    a.tape()->Accumulate(b, -g);
  });
}

Var Scale(const Var& a, double c) {
  const Var in[] = {a};
  return a.tape()->Push("scale", a.value() * c, in, [a, c](const Mat& g) {
    a.tape()->Accumulate(a, g * c);
  });
}

Var AddRowBroadcast(const Var& a, const Var& row) {
  SF_ENFORCE(row.rows() == 1 && row.cols() == a.cols(),
             "broadcast row must be 1x", a.cols());
  Mat out = a.value().rowwise() + row.value().row(0);
  const Var in[] = {a, row};
  return a.tape()->Push("add_row", std::move(out), in, [a, row](const Mat& g) {
    a.tape()->Accumulate(a, g);
    if (a.tape()->NeedsGrad(row)) a.tape()->Accumulate(row, g.colwise().sum());
  });
}

Var GatherRows(const Var& table, std::span<const int> indices) {
  const Mat& t = table.value();
  Mat out(static_cast<Eigen::Index>(indices.size()), t.cols());
  for (size_t i = 0; i < indices.size(); ++i) {
    SF_ENFORCE(indices[i] >= 0 && indices[i] < t.rows(), "row index ",
               indices[i], " out of range");
    out.row(i) = t.row(indices[i]);
  }
  std::vector<int> idx(indices.begin(), indices.end());
  const Var in[] = {table};
  return table.tape()->Push("gather_rows", std::move(out), in,
                            [table, idx = std::move(idx)](const Mat& g) {
                              Mat gt = Mat::Zero(table.rows(), table.cols());
                              for (size_t i = 0; i < idx.size(); ++i)
                                gt.row(idx[i]) += g.row(i);
                              table.tape()->Accumulate(table, gt);
                            });
}

Var MeanSquaredError(const Var& a, const Mat& target) {
  SF_ENFORCE(a.rows() == target.rows() && a.cols() == target.cols(),
             "mse shape mismatch");
  const double n = static_cast<double>(target.size());
  Mat diff = a.value() - target;
  Mat out(1, 1);
  out(0, 0) = diff.squaredNorm() / n;
  const Var in[] = {a};
  return a.tape()->Push("mse", std::move(out), in,
                        [a, diff = std::move(diff), n](const Mat& g) {
                          a.tape()->Accumulate(a, diff * (2.0 * g(0, 0) / n));
                        });
}

Var CrossEntropy(const Var& logits, std::span<const int> labels) {
  const Mat& z = logits.value();
  SF_ENFORCE(static_cast<size_t>(z.rows()) == labels.size(),
             "one label per row expected");
  const double n = static_cast<double>(labels.size());
  Mat probs(z.rows(), z.cols());
  double loss = 0;
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    SF_ENFORCE(labels[i] >= 0 && labels[i] < z.cols(), "label out of range");
    const double m = z.row(i).maxCoeff();
    probs.row(i) = (z.row(i).array() - m).exp();
    const double sum = probs.row(i).sum();
    probs.row(i) /= sum;
    loss += std::log(sum) + m - z(i, labels[i]);
  }
  Mat out(1, 1);
  out(0, 0) = loss / n;
  std::vector<int> lab(labels.begin(), labels.end());
  const Var in[] = {logits};
  return logits.tape()->Push("cross_entropy", std::move(out), in,
                             [logits, probs = std::move(probs),
                              lab = std::move(lab), n](const Mat& g) {
                               Mat d = probs;
                               for (size_t i = 0; i < lab.size(); ++i)
                                 d(i, lab[i]) -= 1.0;
                               logits.tape()->Accumulate(logits,
                                                         d * (g(0, 0) / n));
                             });
}

double GradientNorm(std::span<Parameter* const> params) {
  double sq = 0;
  for (const Parameter* p : params) {
    if (p->grad.size() != 0) sq += p->grad.squaredNorm();
  }
  return std::sqrt(sq);
}

}  // namespace shareformer::kd
