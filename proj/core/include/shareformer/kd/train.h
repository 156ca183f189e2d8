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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "shareformer/kd/dataset.h"
#include "shareformer/kd/model.h"

namespace shareformer::kd {

// Adaptive-moment optimiser with the usual 0.9 / 0.999 decays.
class Adam {
 public:
  Adam(std::vector<Parameter*> params, double lr, double beta1 = 0.9,
       double beta2 = 0.999, double eps = 1e-8);
  void Step();
  void ZeroGrad();

 private:
  std::vector<Parameter*> params_;
  std::vector<Mat> m_, v_;
  double lr_, beta1_, beta2_, eps_;
  int t_ = 0;
};

struct TrainConfig {
  int epochs = 20;
  double lr = 1e-3;
  int batch_size = 32;
  std::uint64_t seed = 1;
  // A step whose gradient norm exceeds this aborts with a TrainingError
  // naming the parameter with the largest gradient.
  double gradient_limit = 1e4;
};

// Pretraining on the pretraining split followed by task fine-tuning.
struct TeacherConfig {
  int pretrain_epochs = 3;
  double pretrain_lr = 1e-3;
  int finetune_epochs = 3;
  double finetune_lr = 5e-4;
  int batch_size = 32;
  std::uint64_t seed = 1;
  double gradient_limit = 1e4;
};

enum class InitMode { kTeacherWeights, kRandom };

struct LossWeights {
  double embedding = 1.0;
  double attention = 1.0;
  double hidden = 1.0;
  double prediction = 1.0;
};

struct DistillConfig {
  double stage1_lr = 5e-4;
  double stage2_lr = 1e-4;
  int stage1_epochs = 10;
  int stage2_epochs = 10;
  int batch_size = 32;
  InitMode init_mode = InitMode::kTeacherWeights;
  LossWeights weights;
  std::uint64_t seed = 1;
  double gradient_limit = 1e4;
};

// Mean training loss per epoch.
struct TrainHistory {
  std::vector<double> epoch_loss;
};

// Cross-entropy training; used for the teacher and the no-distillation
// baselines. Zero epochs leave the model unchanged.
TrainHistory TrainTask(PlainModel& model, const Dataset& data,
                       const TrainConfig& cfg);

// Epoch losses of both phases, pretraining first.
TrainHistory TrainTeacher(PlainModel& model, const Dataset& data,
                          const TeacherConfig& cfg);

PlainModel InitStudent(const PlainModel& teacher, const ApproximationSpec& spec,
                       InitMode mode, std::uint64_t seed);

// Stage 1: embedding, attention and hidden-state MSE against the frozen
// teacher. Attention is compared post-softmax, averaged over heads.
TrainHistory DistillStage1(PlainModel& teacher, PlainModel& student,
                           const Dataset& data, const DistillConfig& cfg);
// Stage 2: MSE between prediction-layer outputs.
TrainHistory DistillStage2(PlainModel& teacher, PlainModel& student,
                           const Dataset& data, const DistillConfig& cfg);

// Loss terms of each stage on one batch, without training.
double Stage1Loss(PlainModel& teacher, PlainModel& student, const Batch& batch,
                  const LossWeights& w);
double Stage2Loss(PlainModel& teacher, PlainModel& student, const Batch& batch,
                  const LossWeights& w);

double Evaluate(PlainModel& model, const std::vector<Example>& examples,
                KernelMode mode = KernelMode::kExact);

struct AblationConfig {
  ToyTaskParams task;
  ModelConfig model;  // teacher architecture; approx is forced to exact
  ApproximationSpec student_spec = ApproximationSpec::QuadTwoQuad();
  TeacherConfig teacher;
  DistillConfig distill;
  // Baselines train with cross-entropy for stage1 + stage2 epochs at this lr.
  double baseline_lr = 5e-4;
  std::vector<std::uint64_t> seeds = {1, 2, 3};
  // When set, every seed uses this teacher instead of training one.
  std::optional<TransformerWeights> teacher_weights;
};

struct AblationRow {
  std::string method;
  std::vector<double> train_accuracy;  // one per seed
  std::vector<double> test_accuracy;
  double mean_train() const;
  double mean_test() const;
};

struct AblationResult {
  AblationRow teacher, distilled, no_distill, no_pretrain_no_distill;
  // Models of the first seed.
  TransformerWeights teacher_weights;
  TransformerWeights student_weights;
  std::vector<AblationRow> rows() const {
    return {teacher, distilled, no_distill, no_pretrain_no_distill};
  }
};

AblationResult RunAblation(const AblationConfig& cfg);

}  // namespace shareformer::kd
