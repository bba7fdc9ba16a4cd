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

// Flat key = value experiment configuration.
//
//   # comment
//   task = blobs
//   seeds = 1, 2, 3
//   blobs.rotation = 1.0471975511965976
//   model.encoder = 16:relu, 2:tanh
//   train.dist_kind = airm
//
// Every key is typed; unknown or repeated keys are errors reported with the
// offending line number. See README.md for the full key list.

#ifndef SPDADAPT_RUN_CONFIG_H_
#define SPDADAPT_RUN_CONFIG_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "spdadapt/datasets.h"
#include "spdadapt/loss_gradients.h"
#include "spdadapt/network.h"
#include "spdadapt/trainer.h"

namespace spdadapt {

enum class Task { kBlobs, kDenoise };

const char* TaskName(Task t);

struct RunConfig {
  Task task = Task::kBlobs;
  BlobsConfig blobs;
  DenoiseConfig denoise;
  // input_dim and head.output_dim are filled in from the task.
  ModelSpec model;
  TrainConfig train;
  // One run per seed; each seed drives both data generation and training.
  std::vector<std::uint64_t> seeds;
  // Distance kinds for sweep-dim (defaults to train.dist_kind).
  std::vector<DistKind> sweep_kinds;
  std::string out_dir = "out";

  // Desk-scale defaults for each task.
  static RunConfig Defaults(Task task);
  // Syncs model dims with the task and validates everything.
  void Finalize();
};

RunConfig ParseRunConfig(std::istream& in,
                         const std::string& source = "<config>");
RunConfig ParseRunConfigFile(const std::string& path);

// Serializes back to the key = value format (round-trips through
// ParseRunConfig).
std::string FormatRunConfig(const RunConfig& cfg);

// "16:relu, 2:tanh" <-> layers.
std::vector<LayerSpec> ParseLayers(const std::string& text);
std::string FormatLayers(const std::vector<LayerSpec>& layers);

}  // namespace spdadapt

#endif  // SPDADAPT_RUN_CONFIG_H_
