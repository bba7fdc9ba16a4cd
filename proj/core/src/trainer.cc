// Copyright 2026 The spdadapt Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "spdadapt/trainer.h"

#include <cmath>
#include <limits>

#include "spdadapt/errors.h"
#include "spdadapt/moment_estimation.h"
#include "spdadapt/random.h"
#include "spdadapt/siegel_embedding.h"

namespace spdadapt {
namespace {

Matrix GatherRows(const Matrix& m, const std::vector<int>& idx, int begin,
                  int count) {
  Matrix out(count, m.cols());
  for (int i = 0; i < count; ++i) out.row(i) = m.row(idx[begin + i]);
  return out;
}

std::vector<int> GatherLabels(const std::vector<int>& labels,
                              const std::vector<int>& idx, int begin,
                              int count) {
  std::vector<int> out(count);
  for (int i = 0; i < count; ++i) out[i] = labels[idx[begin + i]];
  return out;
}

void RequireFinite(double x, int epoch, int step, const char* what) {
  if (!std::isfinite(x)) throw NonFiniteLossError(epoch, step, what);
}

void CheckSource(const ModelSpec& spec, const LabeledDataset& source) {
  if (source.size() == 0) throw DomainError("source dataset is empty");
  if (source.inputs.cols() != spec.input_dim) {
    throw DimensionMismatchError("source inputs do not match input_dim");
  }
  if (spec.head.kind == HeadKind::kClassifier) {
    if (static_cast<int>(source.labels.size()) != source.size()) {
      throw DomainError("classification source needs one label per sample");
    }
  } else if (source.references.rows() != source.size() ||
             source.references.cols() != spec.head.output_dim) {
    throw DomainError("reconstruction source needs references of output_dim");
  }
}

// Draws target batches without replacement, reshuffling when exhausted.
class TargetSampler {
 public:
  TargetSampler(int n, std::uint64_t seed)
      : rng_(seed, streams::kTargetBatches), n_(n) {}

  std::vector<int> Next(int count) {
    std::vector<int> out;
    out.reserve(count);
    while (static_cast<int>(out.size()) < count) {
      if (cursor_ >= static_cast<int>(perm_.size())) {
        perm_ = rng_.Permutation(n_);
        cursor_ = 0;
      }
      out.push_back(perm_[cursor_++]);
    }
    return out;
  }

 private:
  CounterRng rng_;
  int n_;
  std::vector<int> perm_;
  int cursor_ = 0;
};

}  // namespace

void TrainConfig::Validate(int embed_dim) const {
  if (!(beta >= 0.0) || !std::isfinite(beta)) {
    throw DomainError("beta must be a finite nonnegative number");
  }
  if (!(eta > 0.0)) throw DomainError("eta must be positive");
  if (epochs < 1) throw DomainError("epochs must be positive");
  if (batch_source < 2 || batch_target < 2) {
    throw DomainError("batch sizes must be at least 2");
  }
  if (!(learn_rate > 0.0)) throw DomainError("learn_rate must be positive");
  if (!CheckRegime(batch_source, embed_dim).ok) {
    throw RegimeViolationError(batch_source, embed_dim);
  }
}

Matrix Encode(const ModelParams& params, const Matrix& inputs) {
  return ForwardStack(params.encoder, inputs);
}

double Evaluate(const ModelParams& params, const ModelSpec& spec,
                const LabeledDataset& data) {
  const Matrix out = ForwardStack(params.head, Encode(params, data.inputs));
  if (spec.head.kind == HeadKind::kClassifier) {
    const std::vector<int> pred = ArgmaxRows(out);
    int correct = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
      correct += pred[i] == data.labels[i] ? 1 : 0;
    }
    return pred.empty() ? 0.0
                        : static_cast<double>(correct) /
                              static_cast<double>(pred.size());
  }
  return MeanSquaredError(out, data.references).value;
}

TrainReport Train(const TrainConfig& config, const ModelSpec& spec,
                  const LabeledDataset& source, const UnlabeledDataset& target,
                  const LabeledDataset* target_eval) {
  spec.Validate();
  config.Validate(spec.embed_dim());
  CheckSource(spec, source);
  if (target.size() == 0) throw DomainError("target dataset is empty");
  if (target.inputs.cols() != spec.input_dim) {
    throw DimensionMismatchError("target inputs do not match input_dim");
  }
  const bool classify = spec.head.kind == HeadKind::kClassifier;
  const int batch_s = std::min(config.batch_source, source.size());
  const int batch_t = std::min(config.batch_target, target.size());

  TrainReport report;
  report.params = InitModel(spec, config.seed);
  report.steps_per_epoch = std::max(1, source.size() / batch_s);

  Optimizer optimizer(config.optimizer, config.learn_rate,
                      report.params.size());
  CounterRng source_rng(config.seed, streams::kSourceBatches);
  TargetSampler target_sampler(target.size(), config.seed);
  bool latch = false;

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    EpochRecord rec;
    rec.epoch = epoch;
    int dist_evals = 0;
    const std::vector<int> perm = source_rng.Permutation(source.size());

    for (int step = 0; step < report.steps_per_epoch; ++step) {
      ModelParams& params = report.params;
      ModelParams grads = params.ZerosLike();

      const Matrix xs = GatherRows(source.inputs, perm, step * batch_s, batch_s);
      StackCache enc_s;
      StackCache head_cache;
      const Matrix zs = ForwardStack(params.encoder, xs, &enc_s);
      const Matrix out = ForwardStack(params.head, zs, &head_cache);
      const TaskLoss task =
          classify ? SoftmaxCrossEntropy(
                         out, GatherLabels(source.labels, perm, step * batch_s,
                                           batch_s))
                   : MeanSquaredError(out, GatherRows(source.references, perm,
                                                      step * batch_s, batch_s));
      RequireFinite(task.value, epoch, step, "task loss");
      rec.loss_task += task.value;
      Matrix grad_zs =
          BackwardStack(params.head, head_cache, task.grad, &grads.head);

      const GateResult gate = SchurGate(BatchMoments(zs), config.eta);
      rec.det_ps += gate.det;
      if (!latch && config.beta > 0.0 && gate.open) latch = true;

      if (latch) {
        const Matrix xt = GatherRows(target.inputs,
                                     target_sampler.Next(batch_t), 0, batch_t);
        StackCache enc_t;
        const Matrix zt = ForwardStack(params.encoder, xt, &enc_t);
        try {
          const LossEval dist = DistLoss(zs, zt, config.dist_kind);
          RequireFinite(dist.value, epoch, step, "adaptation loss");
          rec.loss_dist += dist.value;
          ++dist_evals;
          grad_zs += config.beta * dist.grad_source;
          BackwardStack(params.encoder, enc_t, config.beta * dist.grad_target,
                        &grads.encoder);
        } catch (const GateClosedError&) {
          ++rec.skipped_steps;
        }
      }
      BackwardStack(params.encoder, enc_s, grad_zs, &grads.encoder);

      const Vector g = grads.Flatten();
      if (!g.allFinite()) throw NonFiniteLossError(epoch, step, "gradient");
      Vector flat = params.Flatten();
      optimizer.Step(flat, g);
      params.Assign(flat);
    }

    const double steps = report.steps_per_epoch;
    rec.loss_task /= steps;
    rec.det_ps /= steps;
    if (dist_evals > 0) rec.loss_dist /= dist_evals;
    rec.gate_on = latch;
    if (latch && report.gate_open_epoch < 0) report.gate_open_epoch = epoch;
    rec.source_metric = Evaluate(report.params, spec, source);
    rec.target_metric = target_eval != nullptr
                            ? Evaluate(report.params, spec, *target_eval)
                            : std::numeric_limits<double>::quiet_NaN();
    report.epochs.push_back(rec);
  }
  return report;
}

}  // namespace spdadapt
