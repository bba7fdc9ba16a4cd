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

// End-to-end training of L = L_task + beta * L_dist with a determinant gate.
//
// Phase 1 optimizes the task loss on source batches only while tracking
// det(P_S) = det f(mu_S, Sigma_S) of the source embedding batch. The first
// step at which det(P_S) > eta opens a latch; from then on every step adds
// beta * DistLoss over a paired target batch. The latch never closes.

#ifndef SPDADAPT_TRAINER_H_
#define SPDADAPT_TRAINER_H_

#include <cstdint>
#include <vector>

#include "spdadapt/loss_gradients.h"
#include "spdadapt/network.h"
#include "spdadapt/optimizer.h"

namespace spdadapt {

// Source data (and target evaluation data). For classification `labels`
// holds class ids; for reconstruction `references` holds the clean signals
// the output is compared with.
struct LabeledDataset {
  Matrix inputs;
  std::vector<int> labels;
  Matrix references;

  int size() const { return static_cast<int>(inputs.rows()); }
};

// What the trainer may see of the target domain: inputs only.
struct UnlabeledDataset {
  Matrix inputs;

  int size() const { return static_cast<int>(inputs.rows()); }
};

struct TrainConfig {
  DistKind dist_kind = DistKind::kAirm;
  double beta = 1.0;
  double eta = 1e-8;
  int epochs = 10;
  int batch_source = 128;
  int batch_target = 128;
  double learn_rate = 1e-3;
  std::uint64_t seed = 0;
  OptimizerKind optimizer = OptimizerKind::kAdam;

  // Throws DomainError / RegimeViolationError.
  void Validate(int embed_dim) const;
};

struct EpochRecord {
  int epoch = 0;
  double loss_task = 0.0;  // mean over steps
  double loss_dist = 0.0;  // mean over steps that evaluated it, else 0
  double det_ps = 0.0;     // mean over steps of det(P_S)
  bool gate_on = false;    // adaptation active at the end of the epoch
  double source_metric = 0.0;
  double target_metric = 0.0;  // NaN when no evaluation set was given
  int skipped_steps = 0;       // steps whose adaptation term hit GateClosed
};

struct TrainReport {
  std::vector<EpochRecord> epochs;
  ModelParams params;
  int gate_open_epoch = -1;  // first epoch with gate_on, -1 if never
  int steps_per_epoch = 0;
};

// Accuracy (classifier) or mean squared reconstruction error (decoder).
double Evaluate(const ModelParams& params, const ModelSpec& spec,
                const LabeledDataset& data);

// Encoder output for every row of `inputs`.
Matrix Encode(const ModelParams& params, const Matrix& inputs);

// `target_eval` is an evaluation side channel: it is read only after each
// epoch to fill target_metric and never influences optimization.
// Throws RegimeViolationError, DomainError, NonFiniteLossError.
TrainReport Train(const TrainConfig& config, const ModelSpec& spec,
                  const LabeledDataset& source, const UnlabeledDataset& target,
                  const LabeledDataset* target_eval = nullptr);

}  // namespace spdadapt

#endif  // SPDADAPT_TRAINER_H_
