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

#include "shareformer/kd/train.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>

#include "shareformer/common/errors.h"

namespace shareformer::kd {

namespace {

using LossFn = std::function<Var(Tape&, const Batch&)>;

struct LoopConfig {
  int epochs;
  double lr;
  int batch_size;
  std::uint64_t seed;
  double gradient_limit;
};

void CheckGradient(PlainModel& model, double limit) {
  const auto params = model.parameters();
  const double norm = GradientNorm(params);
  if (std::isfinite(norm) && norm <= limit) return;
  const auto names = model.parameter_names();
  size_t worst = 0;
  double worst_norm = -1;
  for (size_t i = 0; i < params.size(); ++i) {
    const double n = params[i]->grad.norm();
    if (!std::isfinite(n) || n > worst_norm) {
      worst = i;
      worst_norm = n;
      if (!std::isfinite(n)) break;
    }
  }
  throw TrainingError(internal::StrCat("gradient explosion: norm ", norm,
                                       " exceeds ", limit, "; largest at ",
                                       names[worst], " (", worst_norm, ")"));
}

TrainHistory RunEpochs(PlainModel& model, const std::vector<Example>& examples,
                       int seq, const LoopConfig& c, const LossFn& loss_fn) {
  SF_ENFORCE(c.epochs >= 0 && c.batch_size >= 1 && c.lr > 0,
             "invalid training schedule");
  TrainHistory history;
  if (c.epochs == 0) return history;
  Adam opt(model.parameters(), c.lr);
  std::mt19937_64 rng(c.seed);
  std::vector<size_t> order(examples.size());
  std::iota(order.begin(), order.end(), 0);
  for (int epoch = 0; epoch < c.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double total = 0;
    size_t seen = 0;
    for (size_t start = 0; start < order.size(); start += c.batch_size) {
      const size_t n = std::min<size_t>(c.batch_size, order.size() - start);
      const Batch batch =
          MakeBatch(examples, std::span(order).subspan(start, n), seq);
      opt.ZeroGrad();
      Tape tape;
      const Var loss = loss_fn(tape, batch);
      tape.Backward(loss);
      CheckGradient(model, c.gradient_limit);
      opt.Step();
      total += loss.value()(0, 0) * static_cast<double>(n);
      seen += n;
    }
    history.epoch_loss.push_back(total / static_cast<double>(seen));
  }
  return history;
}

Var Stage1Objective(Tape& tape, PlainModel& teacher, PlainModel& student,
                    const Batch& batch, const LossWeights& w) {
  Tape frozen(/*record=*/false);
  const Taps t = teacher.Forward(frozen, batch, KernelMode::kExact);
  const Taps s = student.Forward(tape, batch, KernelMode::kExact);
  SF_ENFORCE(t.attention.size() == s.attention.size(),
             "teacher and student depths differ");
  Var loss =
      Scale(MeanSquaredError(s.embedding, t.embedding.value()), w.embedding);
  for (size_t l = 0; l < s.attention.size(); ++l) {
    loss = Add(loss,
               Scale(MeanSquaredError(s.attention[l], t.attention[l].value()),
                     w.attention));
    loss = Add(loss, Scale(MeanSquaredError(s.hidden[l], t.hidden[l].value()),
                           w.hidden));
  }
  return loss;
}

Var Stage2Objective(Tape& tape, PlainModel& teacher, PlainModel& student,
                    const Batch& batch, const LossWeights& w) {
  const Mat target = teacher.Predict(batch);
  const Taps s = student.Forward(tape, batch, KernelMode::kExact);
  return Scale(MeanSquaredError(s.logits, target), w.prediction);
}

void CheckPair(const PlainModel& teacher, const PlainModel& student) {
  const ModelConfig& a = teacher.config();
  const ModelConfig& b = student.config();
  SF_ENFORCE(a.layers == b.layers && a.hidden == b.hidden &&
                 a.heads == b.heads && a.ffn_mult == b.ffn_mult &&
                 a.vocab == b.vocab && a.max_seq == b.max_seq &&
                 a.classes == b.classes,
             "teacher and student architectures differ");
}

double Mean(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / v.size();
}

}  // namespace

Adam::Adam(std::vector<Parameter*> params, double lr, double beta1,
           double beta2, double eps)
    : params_(std::move(params)),
      lr_(lr),
      beta1_(beta1),
      beta2_(beta2),
      eps_(eps) {
  for (Parameter* p : params_) {
    m_.push_back(Mat::Zero(p->value.rows(), p->value.cols()));
    v_.push_back(Mat::Zero(p->value.rows(), p->value.cols()));
  }
}

void Adam::ZeroGrad() {
  for (Parameter* p : params_) p->ZeroGrad();
}

void Adam::Step() {
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, t_);
  const double c2 = 1.0 - std::pow(beta2_, t_);
  for (size_t i = 0; i < params_.size(); ++i) {
    Parameter& p = *params_[i];
    if (p.grad.size() == 0) continue;
    m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * p.grad;
    v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * p.grad.cwiseAbs2();
    p.value.array() -=
        lr_ * (m_[i].array() / c1) / ((v_[i].array() / c2).sqrt() + eps_);
  }
}

TrainHistory TrainTask(PlainModel& model, const Dataset& data,
                       const TrainConfig& cfg) {
  const LoopConfig loop{cfg.epochs, cfg.lr, cfg.batch_size, cfg.seed,
                        cfg.gradient_limit};
  return RunEpochs(model, data.train, data.params.seq, loop,
                   [&](Tape& tape, const Batch& batch) {
                     return CrossEntropy(
                         model.Forward(tape, batch, KernelMode::kExact).logits,
                         batch.labels);
                   });
}

TrainHistory TrainTeacher(PlainModel& model, const Dataset& data,
                          const TeacherConfig& cfg) {
  auto task = [&](Tape& tape, const Batch& batch) {
    return CrossEntropy(model.Forward(tape, batch, KernelMode::kExact).logits,
                        batch.labels);
  };
  TrainHistory h;
  if (cfg.pretrain_epochs > 0) {
    SF_ENFORCE(!data.pretrain.empty(),
               "pretraining requested without a pretraining split");
    h = RunEpochs(model, data.pretrain, data.params.seq,
                  {cfg.pretrain_epochs, cfg.pretrain_lr, cfg.batch_size,
                   cfg.seed, cfg.gradient_limit},
                  task);
  }
  const TrainHistory ft =
      RunEpochs(model, data.train, data.params.seq,
                {cfg.finetune_epochs, cfg.finetune_lr, cfg.batch_size,
                 cfg.seed + 1, cfg.gradient_limit},
                task);
  h.epoch_loss.insert(h.epoch_loss.end(), ft.epoch_loss.begin(),
                      ft.epoch_loss.end());
  return h;
}

PlainModel InitStudent(const PlainModel& teacher, const ApproximationSpec& spec,
                       InitMode mode, std::uint64_t seed) {
  ModelConfig config = teacher.config();
  config.approx = spec;
  if (mode == InitMode::kRandom) return PlainModel::Random(config, seed);
  return PlainModel(config, teacher.weights());
}

TrainHistory DistillStage1(PlainModel& teacher, PlainModel& student,
                           const Dataset& data, const DistillConfig& cfg) {
  CheckPair(teacher, student);
  const LoopConfig loop{cfg.stage1_epochs, cfg.stage1_lr, cfg.batch_size,
                        cfg.seed, cfg.gradient_limit};
  return RunEpochs(student, data.train, data.params.seq, loop,
                   [&](Tape& tape, const Batch& batch) {
                     return Stage1Objective(tape, teacher, student, batch,
                                            cfg.weights);
                   });
}

TrainHistory DistillStage2(PlainModel& teacher, PlainModel& student,
                           const Dataset& data, const DistillConfig& cfg) {
  CheckPair(teacher, student);
  const LoopConfig loop{cfg.stage2_epochs, cfg.stage2_lr, cfg.batch_size,
                        cfg.seed + 1, cfg.gradient_limit};
  return RunEpochs(student, data.train, data.params.seq, loop,
                   [&](Tape& tape, const Batch& batch) {
                     return Stage2Objective(tape, teacher, student, batch,
                                            cfg.weights);
                   });
}

double Stage1Loss(PlainModel& teacher, PlainModel& student, const Batch& batch,
                  const LossWeights& w) {
  CheckPair(teacher, student);
  Tape tape(/*record=*/false);
  return Stage1Objective(tape, teacher, student, batch, w).value()(0, 0);
}

double Stage2Loss(PlainModel& teacher, PlainModel& student, const Batch& batch,
                  const LossWeights& w) {
  CheckPair(teacher, student);
  Tape tape(/*record=*/false);
  return Stage2Objective(tape, teacher, student, batch, w).value()(0, 0);
}

double Evaluate(PlainModel& model, const std::vector<Example>& examples,
                KernelMode mode) {
  if (examples.empty()) return 0.0;
  const int seq = static_cast<int>(examples.front().tokens.size());
  constexpr size_t kChunk = 250;
  size_t correct = 0;
  for (size_t start = 0; start < examples.size(); start += kChunk) {
    const size_t n = std::min(kChunk, examples.size() - start);
    const Batch batch = MakeBatch(std::span(examples).subspan(start, n), seq);
    const Mat logits = model.Predict(batch, mode);
    for (size_t i = 0; i < n; ++i) {
      Eigen::Index arg;
      logits.row(i).maxCoeff(&arg);
      if (arg == batch.labels[i]) ++correct;
    }
  }
  return static_cast<double>(correct) / static_cast<double>(examples.size());
}

double AblationRow::mean_train() const { return Mean(train_accuracy); }
double AblationRow::mean_test() const { return Mean(test_accuracy); }

AblationResult RunAblation(const AblationConfig& cfg) {
  const Dataset data = MakeToyDataset(cfg.task);
  ModelConfig teacher_config = cfg.model;
  teacher_config.approx = ApproximationSpec::Exact();
  SF_ENFORCE(teacher_config.vocab == cfg.task.vocab &&
                 teacher_config.max_seq == cfg.task.seq &&
                 teacher_config.classes == cfg.task.classes,
             "model and task dimensions differ");
  AblationResult r;
  r.teacher.method = "teacher";
  r.distilled.method = "kd";
  r.no_distill.method = "w/o{d}";
  r.no_pretrain_no_distill.method = "w/o{p,d}";
  auto record = [&](AblationRow& row, PlainModel& m) {
    row.train_accuracy.push_back(Evaluate(m, data.train));
    row.test_accuracy.push_back(Evaluate(m, data.test));
  };
  for (std::uint64_t seed : cfg.seeds) {
    PlainModel teacher = PlainModel::Random(teacher_config, seed);
    if (cfg.teacher_weights) {
      teacher = PlainModel(teacher_config, *cfg.teacher_weights);
    } else {
      TeacherConfig tc = cfg.teacher;
      tc.seed = seed;
      TrainTeacher(teacher, data, tc);
    }
    record(r.teacher, teacher);

    DistillConfig dc = cfg.distill;
    dc.seed = seed;
    PlainModel kd =
        InitStudent(teacher, cfg.student_spec, dc.init_mode, seed + 100);
    DistillStage1(teacher, kd, data, dc);
    DistillStage2(teacher, kd, data, dc);
    record(r.distilled, kd);

    TrainConfig bc;
    bc.epochs = dc.stage1_epochs + dc.stage2_epochs;
    bc.lr = cfg.baseline_lr;
    bc.batch_size = dc.batch_size;
    bc.seed = seed;
    bc.gradient_limit = dc.gradient_limit;
    PlainModel no_d =
        InitStudent(teacher, cfg.student_spec, InitMode::kTeacherWeights, seed);
    TrainTask(no_d, data, bc);
    record(r.no_distill, no_d);

    PlainModel no_pd =
        InitStudent(teacher, cfg.student_spec, InitMode::kRandom, seed + 200);
    TrainTask(no_pd, data, bc);
    record(r.no_pretrain_no_distill, no_pd);
    if (seed == cfg.seeds.front()) {
      r.teacher_weights = teacher.weights();
      r.student_weights = kd.weights();
    }
  }
  return r;
}

}  // namespace shareformer::kd
