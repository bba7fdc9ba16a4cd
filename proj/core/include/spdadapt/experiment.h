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

// Experiment runner: one training run per seed, report files, and the
// embedding-dimension sweep.
//
// Files written by RunExperiment into <out>/:
//   seed_<s>/train_report.csv   one row per epoch
//   seed_<s>/summary.json       final metrics, config echo, wall time
//   metrics.csv                 one row per completed run
//
// SweepDim writes <out>/sweep.csv (one row per dim x kind x seed) and
// <out>/sweep_summary.csv (best dimension per kind).

#ifndef SPDADAPT_EXPERIMENT_H_
#define SPDADAPT_EXPERIMENT_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "spdadapt/run_config.h"
#include "spdadapt/trainer.h"

namespace spdadapt {

struct RunOutcome {
  std::uint64_t seed = 0;
  TrainReport report;
  double source_metric = 0.0;  // final epoch
  double target_metric = 0.0;  // final epoch, on the target test split
  double wall_seconds = 0.0;
};

// Generates the task data for `seed` and trains once.
RunOutcome RunSingle(const RunConfig& cfg, std::uint64_t seed);

// Runs every seed in cfg.seeds; `jobs` > 1 trains seeds on worker threads.
// Results come back in seed order regardless of scheduling.
std::vector<RunOutcome> RunSeeds(const RunConfig& cfg, int jobs = 1);

// RunSeeds plus the report files under out_dir. On NonFiniteLossError the
// failing seed's directory receives error.json and the error is rethrown.
std::vector<RunOutcome> RunExperiment(const RunConfig& cfg,
                                      const std::string& out_dir,
                                      int jobs = 1);

void WriteTrainReportCsv(std::ostream& out, const TrainReport& report);
std::string MetricsCsvHeader();
std::string MetricsCsvRow(const RunConfig& cfg, const RunOutcome& run);

struct SweepRow {
  int dim = 0;
  DistKind kind = DistKind::kAirm;
  std::uint64_t seed = 0;
  bool regime_violation = false;
  double ratio = 0.0;
  double target_metric = 0.0;
  double det_min = 0.0;
  double det_mean = 0.0;
  double det_max = 0.0;
  int gate_open_epoch = -1;
};

struct SweepBest {
  DistKind kind = DistKind::kAirm;
  int best_dim = 0;
  double best_mean_metric = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<SweepBest> best;  // one per kind with at least one valid dim
};

// For each dim, kind in cfg.sweep_kinds and seed in cfg.seeds: sets the
// encoder's last width to dim and trains. Dims whose batch violates the
// 10x rule produce flagged rows with NaN metrics instead of failing.
// "Best" maximizes accuracy (blobs) or minimizes reconstruction error.
SweepResult SweepDim(const RunConfig& cfg, const std::vector<int>& dims,
                     int jobs = 1);

void WriteSweepCsv(std::ostream& out, const SweepResult& result);
void WriteSweepSummaryCsv(std::ostream& out, const SweepResult& result);

}  // namespace spdadapt

#endif  // SPDADAPT_EXPERIMENT_H_
