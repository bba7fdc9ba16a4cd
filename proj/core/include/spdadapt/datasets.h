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

// Synthetic two-domain benchmarks with covariate shift.
//
// Blobs: K Gaussian classes whose centers are equally spaced along the first
// input axis, radius apart. The target domain is the same generative process
// pushed through the rigid map x -> R x + t, where R rotates the plane of the
// first two input axes. Labels travel with the map.
//
// Denoise: smooth random signals (sums of up to three sinusoids rescaled to
// [0, 1]); the target domain adds Gaussian noise to independent draws.

#ifndef SPDADAPT_DATASETS_H_
#define SPDADAPT_DATASETS_H_

#include <cstdint>
#include <vector>

#include "spdadapt/trainer.h"

namespace spdadapt {

struct BlobsConfig {
  int num_classes = 3;
  int samples_per_class = 500;  // per domain
  int input_dim = 10;
  double radius = 3.0;          // spacing between neighbouring centers
  double cov_scale = 1.0;       // per-coordinate standard deviation
  double target_rotation = 0.0; // radians, in the (x0, x1) plane
  std::vector<double> target_translation;  // padded with zeros to input_dim
  std::uint64_t seed = 0;

  void Validate() const;
};

struct DenoiseConfig {
  int signal_length = 64;
  int samples_per_domain = 2000;
  double noise_mean = 0.4;
  double noise_std = 0.7;
  std::uint64_t seed = 0;

  void Validate() const;
};

// A generated two-domain task. `target` is all the trainer sees of the target
// domain; `target_labels` (classification) is the held-out label side channel
// for those samples; `target_test` is an independent labeled target split
// used for evaluation.
struct DomainPair {
  LabeledDataset source;
  UnlabeledDataset target;
  std::vector<int> target_labels;
  Matrix target_references;
  LabeledDataset target_test;
};

DomainPair GenBlobs(const BlobsConfig& cfg);
DomainPair GenDenoise(const DenoiseConfig& cfg);

// Drops everything but the inputs.
UnlabeledDataset StripLabels(const LabeledDataset& d);

}  // namespace spdadapt

#endif  // SPDADAPT_DATASETS_H_
