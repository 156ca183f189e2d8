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

#include <Eigen/Core>
#include <cstddef>
#include <deque>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace shareformer::kd {

using Mat =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// A trainable tensor and its accumulated gradient.
struct Parameter {
  Mat value;
  Mat grad;

  void ZeroGrad() { grad.setZero(value.rows(), value.cols()); }
};

class Tape;

// Handle to a node recorded on a Tape. Cheap to copy; valid while the tape
// lives.
class Var {
 public:
  Var() = default;

  const Mat& value() const;
  Eigen::Index rows() const { return value().rows(); }
  Eigen::Index cols() const { return value().cols(); }
  Tape* tape() const { return tape_; }
  int id() const { return id_; }
  bool valid() const { return tape_ != nullptr; }

 private:
  friend class Tape;
  Var(Tape* tape, int id) : tape_(tape), id_(id) {}

  Tape* tape_ = nullptr;
  int id_ = -1;
};

// Reverse-mode tape. A non-recording tape evaluates values only, which is
// how frozen teachers and evaluation passes run.
class Tape {
 public:
  using BackwardFn = std::function<void(const Mat& grad)>;

  explicit Tape(bool record = true) : record_(record) {}
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  bool recording() const { return record_; }

  Var Constant(Mat value);
  // Gradients reaching this leaf are added to `param.grad` by Backward.
  Var Leaf(Parameter& param);

  // Records an op result. `fn` receives dL/d(result) and must route it to
  // the inputs through Accumulate. Throws TrainingError on non-finite values.
  Var Push(const char* op, Mat value, std::span<const Var> inputs,
           BackwardFn fn);

  bool NeedsGrad(const Var& v) const;
  void Accumulate(const Var& v, const Mat& grad);

  // Seeds d(loss)/d(loss) = 1 and propagates to every parameter leaf.
  void Backward(const Var& loss);

  const Mat& value(int id) const { return nodes_[id].value; }

 private:
  struct Node {
    Mat value;
    Mat grad;
    BackwardFn backward;
    Parameter* param = nullptr;
    bool needs_grad = false;
  };

  Var Add(Node node);

  bool record_;
  std::deque<Node> nodes_;
};

// Elementwise and linear ops.
Var MatMul(const Var& a, const Var& b);
Var Add(const Var& a, const Var& b);
Var Sub(const Var& a, const Var& b);
Var Scale(const Var& a, double c);
// Adds a (1 x n) row to every row of a.
Var AddRowBroadcast(const Var& a, const Var& row);
// out.row(i) = table.row(indices[i]).
Var GatherRows(const Var& table, std::span<const int> indices);

// Scalar losses (1 x 1).
Var MeanSquaredError(const Var& a, const Mat& target);
Var CrossEntropy(const Var& logits, std::span<const int> labels);

double GradientNorm(std::span<Parameter* const> params);

}  // namespace shareformer::kd
