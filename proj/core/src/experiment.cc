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

#include "spdadapt/experiment.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "spdadapt/errors.h"
#include "spdadapt/matrix_io.h"
#include "spdadapt/moment_estimation.h"

namespace spdadapt {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Runs fn(i) for i in [0, n) on up to `jobs` threads. The first exception
// (by index) is rethrown after all workers finish.
template <typename Fn>
void ParallelFor(int n, int jobs, Fn&& fn) {
  std::vector<std::exception_ptr> errors(n);
  if (jobs <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> workers;
    const int count = std::min(jobs, n);
    for (int w = 0; w < count; ++w) {
      workers.emplace_back([&] {
        for (int i = next++; i < n; i = next++) {
          try {
            fn(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
    for (auto& t : workers) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::string Num(double x) { return FormatDouble(x); }

json SummaryJson(const RunConfig& cfg, const RunOutcome& run) {
  json j;
  j["task"] = TaskName(cfg.task);
  j["seed"] = run.seed;
  j["dist_kind"] = DistKindName(cfg.train.dist_kind);
  j["beta"] = cfg.train.beta;
  j["eta"] = std::isinf(cfg.train.eta) ? json("inf") : json(cfg.train.eta);
  j["final_source_metric"] = run.source_metric;
  j["final_target_metric"] = run.target_metric;
  j["metric"] = cfg.task == Task::kBlobs ? "accuracy" : "mse";
  j["gate_open_epoch"] = run.report.gate_open_epoch;
  int skipped = 0;
  for (const auto& e : run.report.epochs) skipped += e.skipped_steps;
  j["skipped_steps"] = skipped;
  j["epochs"] = run.report.epochs.size();
  j["config"] = FormatRunConfig(cfg);
  j["wall_seconds"] = run.wall_seconds;
  return j;
}

RunConfig WithEmbedDim(const RunConfig& base, int dim) {
  RunConfig cfg = base;
  cfg.model.encoder.back().width = dim;
  return cfg;
}

}  // namespace

RunOutcome RunSingle(const RunConfig& cfg, std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  DomainPair data;
  if (cfg.task == Task::kBlobs) {
    BlobsConfig b = cfg.blobs;
    b.seed = seed;
    data = GenBlobs(b);
  } else {
    DenoiseConfig d = cfg.denoise;
    d.seed = seed;
    data = GenDenoise(d);
  }
  TrainConfig t = cfg.train;
  t.seed = seed;
  RunOutcome out;
  out.seed = seed;
  out.report = Train(t, cfg.model, data.source, data.target, &data.target_test);
  out.source_metric = out.report.epochs.back().source_metric;
  out.target_metric = out.report.epochs.back().target_metric;
  out.wall_seconds = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - start)
                         .count();
  return out;
}

std::vector<RunOutcome> RunSeeds(const RunConfig& cfg, int jobs) {
  std::vector<RunOutcome> out(cfg.seeds.size());
  ParallelFor(static_cast<int>(cfg.seeds.size()), jobs,
              [&](int i) { out[i] = RunSingle(cfg, cfg.seeds[i]); });
  return out;
}

void WriteTrainReportCsv(std::ostream& out, const TrainReport& report) {
  out << "epoch,loss_task,loss_dist,det_PS,gate_on,source_metric,"
         "target_metric,skipped_steps\n";
  for (const EpochRecord& e : report.epochs) {
    out << e.epoch << ',' << Num(e.loss_task) << ',' << Num(e.loss_dist) << ','
        << Num(e.det_ps) << ',' << (e.gate_on ? 1 : 0) << ','
        << Num(e.source_metric) << ',' << Num(e.target_metric) << ','
        << e.skipped_steps << "\n";
  }
}

std::string MetricsCsvHeader() {
  return "task,dist_kind,beta,eta,embed_dim,seed,source_metric,target_metric,"
         "gate_open_epoch,skipped_steps\n";
}

std::string MetricsCsvRow(const RunConfig& cfg, const RunOutcome& run) {
  int skipped = 0;
  for (const auto& e : run.report.epochs) skipped += e.skipped_steps;
  std::ostringstream o;
  o << TaskName(cfg.task) << ',' << DistKindName(cfg.train.dist_kind) << ','
    << Num(cfg.train.beta) << ','
    << (std::isinf(cfg.train.eta) ? std::string("inf") : Num(cfg.train.eta))
    << ',' << cfg.model.embed_dim() << ',' << run.seed << ','
    << Num(run.source_metric) << ',' << Num(run.target_metric) << ','
    << run.report.gate_open_epoch << ',' << skipped << "\n";
  return o.str();
}

std::vector<RunOutcome> RunExperiment(const RunConfig& cfg,
                                      const std::string& out_dir, int jobs) {
  fs::create_directories(out_dir);
  const int n = static_cast<int>(cfg.seeds.size());
  std::vector<RunOutcome> runs(n);
  std::vector<bool> done(n, false);
  ParallelFor(n, jobs, [&](int i) {
    const std::uint64_t seed = cfg.seeds[i];
    const fs::path dir = fs::path(out_dir) / ("seed_" + std::to_string(seed));
    fs::create_directories(dir);
    try {
      runs[i] = RunSingle(cfg, seed);
    } catch (const NonFiniteLossError& e) {
      json err;
      err["error"] = "NonFiniteLoss";
      err["message"] = e.what();
      err["epoch"] = e.epoch();
      err["step"] = e.step();
      err["seed"] = seed;
      std::ofstream(dir / "error.json") << err.dump(2) << "\n";
      throw;
    }
    std::ofstream csv(dir / "train_report.csv");
    WriteTrainReportCsv(csv, runs[i].report);
    std::ofstream js(dir / "summary.json");
    js << SummaryJson(cfg, runs[i]).dump(2) << "\n";
    done[i] = true;
  });
  std::ofstream metrics(fs::path(out_dir) / "metrics.csv");
  metrics << MetricsCsvHeader();
  for (int i = 0; i < n; ++i) {
    if (done[i]) metrics << MetricsCsvRow(cfg, runs[i]);
  }
  return runs;
}

SweepResult SweepDim(const RunConfig& cfg, const std::vector<int>& dims,
                     int jobs) {
  SweepResult result;
  for (int dim : dims) {
    for (DistKind kind : cfg.sweep_kinds) {
      for (std::uint64_t seed : cfg.seeds) {
        SweepRow row;
        row.dim = dim;
        row.kind = kind;
        row.seed = seed;
        const RegimeCheck rc = CheckRegime(cfg.train.batch_source, dim);
        row.ratio = rc.ratio;
        row.regime_violation = !rc.ok;
        result.rows.push_back(row);
      }
    }
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  ParallelFor(static_cast<int>(result.rows.size()), jobs, [&](int i) {
    SweepRow& row = result.rows[i];
    if (row.regime_violation || row.dim < 1) {
      row.regime_violation = true;
      row.target_metric = row.det_min = row.det_mean = row.det_max = nan;
      return;
    }
    RunConfig run_cfg = WithEmbedDim(cfg, row.dim);
    run_cfg.train.dist_kind = row.kind;
    const RunOutcome run = RunSingle(run_cfg, row.seed);
    row.target_metric = run.target_metric;
    row.gate_open_epoch = run.report.gate_open_epoch;
    double lo = INFINITY;
    double hi = -INFINITY;
    double sum = 0.0;
    for (const auto& e : run.report.epochs) {
      lo = std::min(lo, e.det_ps);
      hi = std::max(hi, e.det_ps);
      sum += e.det_ps;
    }
    row.det_min = lo;
    row.det_max = hi;
    row.det_mean = sum / static_cast<double>(run.report.epochs.size());
  });

  const bool maximize = cfg.task == Task::kBlobs;
  for (DistKind kind : cfg.sweep_kinds) {
    std::map<int, std::pair<double, int>> per_dim;
    for (const SweepRow& r : result.rows) {
      if (r.kind != kind || r.regime_violation) continue;
      auto& acc = per_dim[r.dim];
      acc.first += r.target_metric;
      acc.second += 1;
    }
    if (per_dim.empty()) continue;
    SweepBest best;
    best.kind = kind;
    bool first = true;
    for (const auto& [dim, acc] : per_dim) {
      const double mean = acc.first / acc.second;
      const bool better = maximize ? mean > best.best_mean_metric
                                   : mean < best.best_mean_metric;
      if (first || better) {
        best.best_dim = dim;
        best.best_mean_metric = mean;
        first = false;
      }
    }
    result.best.push_back(best);
  }
  return result;
}

void WriteSweepCsv(std::ostream& out, const SweepResult& result) {
  out << "dim,dist_kind,seed,regime_violation,ratio,target_metric,det_min,"
         "det_mean,det_max,gate_open_epoch\n";
  for (const SweepRow& r : result.rows) {
    out << r.dim << ',' << DistKindName(r.kind) << ',' << r.seed << ','
        << (r.regime_violation ? 1 : 0) << ',' << Num(r.ratio) << ','
        << Num(r.target_metric) << ',' << Num(r.det_min) << ','
        << Num(r.det_mean) << ',' << Num(r.det_max) << ','
        << r.gate_open_epoch << "\n";
  }
}

void WriteSweepSummaryCsv(std::ostream& out, const SweepResult& result) {
  out << "dist_kind,best_dim,best_mean_target_metric\n";
  for (const SweepBest& b : result.best) {
    out << DistKindName(b.kind) << ',' << b.best_dim << ','
        << Num(b.best_mean_metric) << "\n";
  }
}

}  // namespace spdadapt
