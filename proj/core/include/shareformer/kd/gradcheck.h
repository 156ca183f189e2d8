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

#include <functional>
#include <string>

#include "shareformer/kd/model.h"

namespace shareformer::kd {

struct GradientCheckResult {
  std::string worst_parameter;
  // max over parameters of |analytic - numeric| / max(|analytic|, |numeric|,
  // floor), norms taken per parameter tensor.
  double worst_relative_error = 0;
  size_t entries = 0;
};

// Compares the analytic gradient of `loss` with central differences for
// every entry of every model parameter.
GradientCheckResult CheckGradients(PlainModel& model,
                                   const std::function<Var(Tape&)>& loss,
                                   double step = 1e-4, double floor = 1e-6);

}  // namespace shareformer::kd
