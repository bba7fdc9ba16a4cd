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

// spdadapt command-line tool.
//
//   spdadapt embed <moments> [--a A] [--out FILE]
//   spdadapt dist <P1> <P2> --kind airm|hilbert|log_euclid
//   spdadapt gradcheck [--kind K] [--seed S] [--instances N]
//   spdadapt bound-check [--seed S] [--pairs N] [--out FILE]
//   spdadapt oracle-fr <mu1> <sigma1> <mu2> <sigma2>
//   spdadapt train --config FILE [--out DIR] [--seed S] [--kind K]
//   spdadapt sweep-dim --config FILE --dims 2,4,8 [--out DIR]

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "spdadapt/divergence_bounds.h"
#include "spdadapt/errors.h"
#include "spdadapt/experiment.h"
#include "spdadapt/gradcheck.h"
#include "spdadapt/loss_gradients.h"
#include "spdadapt/matrix_io.h"
#include "spdadapt/run_config.h"
#include "spdadapt/siegel_embedding.h"

namespace {

using namespace spdadapt;

// Moments file: `dim=<n>`, one line with the n mean entries, then n
// covariance rows.
GaussianMoments ReadMomentsFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open file");
  std::string header;
  std::getline(in, header);
  if (header.rfind("dim=", 0) != 0) {
    throw ParseError(path, 1, "expected header 'dim=<n>'");
  }
  const int n = std::stoi(header.substr(4));
  std::string mean_line;
  std::getline(in, mean_line);
  std::istringstream ms(mean_line);
  Vector mean(n);
  for (int i = 0; i < n; ++i) {
    if (!(ms >> mean(i))) throw ParseError(path, 2, "expected mean row");
  }
  std::stringstream rest;
  rest << "dim=" << n << "\n" << in.rdbuf();
  const Matrix cov = ReadMatrix(rest, path);
  return GaussianMoments::Create(mean, cov);
}

void EmitMatrix(const Matrix& m, const std::string& out) {
  if (out.empty()) {
    WriteMatrix(std::cout, m);
  } else {
    WriteMatrixFile(out, m);
  }
}

std::vector<int> ParseDims(const std::string& text) {
  std::vector<int> dims;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) dims.push_back(std::stoi(item));
  }
  return dims;
}

void ApplyOverrides(RunConfig& cfg, const std::string& seed,
                    const std::string& kind) {
  if (!seed.empty()) cfg.seeds = {std::stoull(seed)};
  if (!kind.empty()) {
    cfg.train.dist_kind = ParseDistKind(kind);
    cfg.sweep_kinds = {cfg.train.dist_kind};
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Geometry-aware moment matching for domain adaptation"};
  app.require_subcommand(1);

  std::string in1, in2, out, kind, config, dims_text, seed_text;
  double embed_a = 1.0;
  std::uint64_t seed = 0;
  int instances = 1;
  int pairs = 10000;
  int k_min = 2;
  int k_max = 8;
  int jobs = 1;
  double mu1 = 0, s1 = 1, mu2 = 0, s2 = 1;

  auto* embed = app.add_subcommand("embed", "moments file -> SPD matrix file");
  embed->add_option("moments", in1, "moments file")->required();
  embed->add_option("--a", embed_a, "embedding parameter a > 0");
  embed->add_option("--out", out, "output matrix file (default stdout)");

  auto* dist = app.add_subcommand("dist", "distance between two SPD files");
  dist->add_option("p1", in1)->required();
  dist->add_option("p2", in2)->required();
  std::string dist_kind = "airm";
  dist->add_option("--kind", dist_kind, "airm, hilbert or log_euclid");

  auto* grad = app.add_subcommand("gradcheck", "finite-difference gradient audit");
  grad->add_option("--kind", kind, "distance kind (default: all)");
  grad->add_option("--seed", seed);
  grad->add_option("--instances", instances);

  auto* bound = app.add_subcommand("bound-check", "TV vs 2 tanh(d_H/4) sweep");
  bound->add_option("--seed", seed);
  bound->add_option("--pairs", pairs);
  bound->add_option("--kmin", k_min);
  bound->add_option("--kmax", k_max);
  bound->add_option("--out", out, "CSV file (default stdout)");

  auto* fr = app.add_subcommand("oracle-fr", "univariate Fisher-Rao distance");
  fr->add_option("mu1", mu1)->required();
  fr->add_option("sigma1", s1)->required();
  fr->add_option("mu2", mu2)->required();
  fr->add_option("sigma2", s2)->required();

  auto* train = app.add_subcommand("train", "run an experiment config");
  train->add_option("--config", config)->required();
  train->add_option("--out", out, "output directory (default: out_dir)");
  train->add_option("--seed", seed_text, "single seed overriding the config");
  train->add_option("--kind", kind, "distance kind overriding the config");
  train->add_option("--jobs", jobs, "parallel runs");

  auto* sweep = app.add_subcommand("sweep-dim", "embedding-dimension sweep");
  sweep->add_option("--config", config)->required();
  sweep->add_option("--dims", dims_text, "comma-separated dims")->required();
  sweep->add_option("--out", out, "output directory (default: out_dir)");
  sweep->add_option("--seed", seed_text);
  sweep->add_option("--kind", kind);
  sweep->add_option("--jobs", jobs);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*embed) {
      const GaussianMoments m = ReadMomentsFile(in1);
      EmitMatrix(Embed(m, {embed_a}).matrix(), out);
    } else if (*dist) {
      const SpdMatrix p1 = ValidateSpd(ReadMatrixFile(in1));
      const SpdMatrix p2 = ValidateSpd(ReadMatrixFile(in2));
      double d = 0.0;
      if (dist_kind == "airm") {
        d = DistAirm(p1, p2);
      } else if (dist_kind == "hilbert") {
        d = DistHilbert(p1, p2);
      } else if (dist_kind == "log_euclid") {
        d = DistLogEuclid(p1, p2);
      } else {
        throw DomainError("dist --kind must be airm, hilbert or log_euclid");
      }
      std::cout << FormatDouble(d) << "\n";
    } else if (*grad) {
      std::vector<DistKind> kinds;
      if (kind.empty()) {
        kinds.assign(std::begin(kAllDistKinds), std::end(kAllDistKinds));
      } else {
        kinds.push_back(ParseDistKind(kind));
      }
      double worst = 0.0;
      for (DistKind k : kinds) {
        for (int dim : {2, 3, 5}) {
          GradCheckOptions opt;
          opt.dim = dim;
          opt.instances = instances;
          const GradCheckResult r = GradCheckDistLoss(k, seed, opt);
          std::cout << DistKindName(k) << " n=" << dim
                    << " max_rel_error=" << FormatDouble(r.max_rel_error)
                    << "\n";
          worst = std::max(worst, r.max_rel_error);
        }
      }
      std::cout << "max_rel_error=" << FormatDouble(worst) << "\n";
      return worst <= 1e-5 ? 0 : 1;
    } else if (*bound) {
      const auto rows = BoundSweep(pairs, k_min, k_max, seed);
      std::ofstream file;
      if (!out.empty()) file.open(out);
      std::ostream& os = out.empty() ? std::cout : file;
      os << "k,seed,tv,hilbert,rhs,slack,holds\n";
      bool all = true;
      for (const auto& r : rows) {
        os << r.k << ',' << r.seed << ',' << FormatDouble(r.tv) << ','
           << FormatDouble(r.hilbert) << ',' << FormatDouble(r.rhs) << ','
           << FormatDouble(r.slack) << ',' << (r.holds ? 1 : 0) << "\n";
        all = all && r.holds;
      }
      return all ? 0 : 1;
    } else if (*fr) {
      const double d_f = FisherRaoUnivariate(mu1, s1, mu2, s2);
      Vector m1(1), m2(1);
      m1 << mu1;
      m2 << mu2;
      const Matrix c1 = Matrix::Constant(1, 1, s1 * s1);
      const Matrix c2 = Matrix::Constant(1, 1, s2 * s2);
      const double d_a =
          DistAirm(Embed(GaussianMoments::Create(m1, c1)),
                   Embed(GaussianMoments::Create(m2, c2)));
      std::cout << "fisher_rao=" << FormatDouble(d_f) << "\n"
                << "airm_embedded=" << FormatDouble(d_a) << "\n";
    } else if (*train) {
      RunConfig cfg = ParseRunConfigFile(config);
      ApplyOverrides(cfg, seed_text, kind);
      const std::string dir = out.empty() ? cfg.out_dir : out;
      const auto runs = RunExperiment(cfg, dir, jobs);
      for (const auto& r : runs) {
        std::cout << "seed=" << r.seed
                  << " source_metric=" << FormatDouble(r.source_metric)
                  << " target_metric=" << FormatDouble(r.target_metric)
                  << " gate_open_epoch=" << r.report.gate_open_epoch << "\n";
      }
    } else if (*sweep) {
      RunConfig cfg = ParseRunConfigFile(config);
      ApplyOverrides(cfg, seed_text, kind);
      const std::string dir = out.empty() ? cfg.out_dir : out;
      std::filesystem::create_directories(dir);
      const SweepResult result = SweepDim(cfg, ParseDims(dims_text), jobs);
      std::ofstream rows(std::filesystem::path(dir) / "sweep.csv");
      WriteSweepCsv(rows, result);
      std::ofstream summary(std::filesystem::path(dir) / "sweep_summary.csv");
      WriteSweepSummaryCsv(summary, result);
      WriteSweepSummaryCsv(std::cout, result);
    }
  } catch (const NonFiniteLossError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
