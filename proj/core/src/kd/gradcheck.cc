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

#include "shareformer/kd/gradcheck.h"

#include <algorithm>

namespace shareformer::kd {

GradientCheckResult CheckGradients(PlainModel& model,
                                   const std::function<Var(Tape&)>& loss,
                                   double step, double floor) {
  const auto params = model.parameters();
  const auto names = model.parameter_names();
  for (Parameter* p : params) p->ZeroGrad();
  {
    Tape tape;
    tape.Backward(loss(tape));
  }
  auto eval = [&] {
    Tape tape(/*record=*/false);
    return loss(tape).value()(0, 0);
  };

  GradientCheckResult result;
  for (size_t i = 0; i < params.size(); ++i) {
    Parameter& p = *params[i];
    Mat numeric(p.value.rows(), p.value.cols());
    for (Eigen::Index j = 0; j < p.value.size(); ++j) {
      double& w = p.value.data()[j];
      const double saved = w;
      w = saved + step;
      const double up = eval();
      w = saved - step;
      const double down = eval();
      w = saved;
      numeric.data()[j] = (up - down) / (2 * step);
    }
    result.entries += p.value.size();
    const double scale = std::max({p.grad.norm(), numeric.norm(), floor});
    const double err = (p.grad - numeric).norm() / scale;
    if (err >= result.worst_relative_error) {
      result.worst_relative_error = err;
      result.worst_parameter = names[i];
    }
  }
  return result;
}

}  // namespace shareformer::kd
