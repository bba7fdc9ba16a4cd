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

#include "spdadapt/datasets.h"

#include <cmath>
#include <cstring>
#include <numbers>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "spdadapt/errors.h"
#include "spdadapt/moment_estimation.h"
#include "spdadapt/run_config.h"

namespace spdadapt {
namespace {

bool SameBytes(const Matrix& a, const Matrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         std::memcmp(a.data(), b.data(), sizeof(double) * a.size()) == 0;
}

TEST(GenBlobsTest, ShapesAndBalancedLabels) {
  BlobsConfig cfg;
  cfg.num_classes = 4;
  cfg.samples_per_class = 50;
  cfg.input_dim = 6;
  const DomainPair d = GenBlobs(cfg);
  EXPECT_EQ(d.source.size(), 200);
  EXPECT_EQ(d.source.inputs.cols(), 6);
  EXPECT_EQ(d.target.size(), 200);
  EXPECT_EQ(d.target_labels.size(), 200u);
  EXPECT_EQ(d.target_test.size(), 200);
  std::vector<int> counts(4, 0);
  for (int y : d.source.labels) ++counts[y];
  for (int c : counts) EXPECT_EQ(c, 50);
}

TEST(GenBlobsTest, NoShiftMeansMatchingMoments) {
  BlobsConfig cfg;
  cfg.seed = 3;
  const DomainPair d = GenBlobs(cfg);
  const EmpiricalMoments s = BatchMoments(d.source.inputs);
  const EmpiricalMoments t = BatchMoments(d.target.inputs);
  EXPECT_LE((s.mean - t.mean).norm(), 0.3);
  EXPECT_LE((s.cov.matrix() - t.cov.matrix()).norm(),
            0.1 * s.cov.matrix().norm());
}

TEST(GenBlobsTest, RigidMapMovesTargetMoments) {
  BlobsConfig cfg;
  cfg.seed = 3;
  cfg.target_rotation = std::numbers::pi / 3.0;
  cfg.target_translation = {1.0, -1.0, 2.0, 2.0};
  const DomainPair d = GenBlobs(cfg);
  const EmpiricalMoments t = BatchMoments(d.target.inputs);
  EXPECT_NEAR(t.mean(2), 2.0, 0.15);
  EXPECT_NEAR(t.mean(3), 2.0, 0.15);
  EXPECT_NEAR(t.mean(4), 0.0, 0.15);
  // Rotating the dominant x0 spread by 60 degrees puts most of it on x1.
  EXPECT_GT(t.cov(1, 1), t.cov(0, 0));
}

TEST(GenBlobsTest, RotationByPiIsNearChanceForSourceOnly) {
  RunConfig cfg = RunConfig::Defaults(Task::kBlobs);
  cfg.blobs.target_rotation = std::numbers::pi;
  cfg.blobs.target_translation.clear();
  cfg.train.beta = 0.0;
  cfg.Finalize();
  double sum = 0.0;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    cfg.blobs.seed = seed;
    cfg.train.seed = seed;
    const DomainPair d = GenBlobs(cfg.blobs);
    const TrainReport r =
        Train(cfg.train, cfg.model, d.source, d.target, &d.target_test);
    EXPECT_GT(r.epochs.back().source_metric, 0.9);
    sum += r.epochs.back().target_metric;
  }
  EXPECT_NEAR(sum / 3.0, 1.0 / 3.0, 0.1);
}

TEST(GenBlobsTest, SameSeedSameBytes) {
  BlobsConfig cfg;
  cfg.seed = 77;
  cfg.target_rotation = 0.4;
  const DomainPair a = GenBlobs(cfg);
  const DomainPair b = GenBlobs(cfg);
  EXPECT_TRUE(SameBytes(a.source.inputs, b.source.inputs));
  EXPECT_TRUE(SameBytes(a.target.inputs, b.target.inputs));
  EXPECT_TRUE(SameBytes(a.target_test.inputs, b.target_test.inputs));
  EXPECT_EQ(a.target_labels, b.target_labels);
  cfg.seed = 78;
  EXPECT_FALSE(SameBytes(GenBlobs(cfg).source.inputs, a.source.inputs));
}

TEST(GenBlobsTest, Validation) {
  BlobsConfig cfg;
  cfg.num_classes = 1;
  EXPECT_THROW(GenBlobs(cfg), DomainError);
  cfg = BlobsConfig();
  cfg.target_translation.assign(11, 0.0);
  EXPECT_THROW(GenBlobs(cfg), DomainError);
}

TEST(GenDenoiseTest, SignalsAreNormalizedMixtures) {
  DenoiseConfig cfg;
  cfg.samples_per_domain = 200;
  const DomainPair d = GenDenoise(cfg);
  ASSERT_EQ(d.source.inputs.rows(), 200);
  ASSERT_EQ(d.source.inputs.cols(), 64);
  for (int i = 0; i < 200; ++i) {
    EXPECT_NEAR(d.source.inputs.row(i).minCoeff(), 0.0, 1e-15);
    EXPECT_NEAR(d.source.inputs.row(i).maxCoeff(), 1.0, 1e-15);
  }
  EXPECT_TRUE(SameBytes(d.source.inputs, d.source.references));
}

TEST(GenDenoiseTest, ZeroNoiseTargetsEqualReferences) {
  DenoiseConfig cfg;
  cfg.samples_per_domain = 50;
  cfg.noise_std = 0.0;
  cfg.noise_mean = 0.0;
  const DomainPair d = GenDenoise(cfg);
  EXPECT_TRUE(SameBytes(d.target.inputs, d.target_references));
  EXPECT_TRUE(SameBytes(d.target_test.inputs, d.target_test.references));
  // With only the offset left, the corruption is an exact shift.
  cfg.noise_mean = 0.4;
  const DomainPair shifted = GenDenoise(cfg);
  EXPECT_LE((shifted.target.inputs.array() - shifted.target_references.array() -
             0.4).abs().maxCoeff(), 1e-15);
}

TEST(GenDenoiseTest, DefaultNoiseDominatesSignalVariance) {
  DenoiseConfig cfg;
  cfg.samples_per_domain = 300;
  const DomainPair d = GenDenoise(cfg);
  double noise_energy = 0.0;
  double signal_var = 0.0;
  for (int i = 0; i < 300; ++i) {
    const Eigen::RowVectorXd clean = d.target_references.row(i);
    noise_energy += (d.target.inputs.row(i) - clean).squaredNorm() / 64.0;
    signal_var += (clean.array() - clean.mean()).square().mean();
  }
  EXPECT_NEAR(noise_energy / 300, 0.4 * 0.4 + 0.7 * 0.7, 0.02);
  EXPECT_GT(noise_energy, 4.0 * signal_var);
}

TEST(GenDenoiseTest, DomainsAreDisjoint) {
  DenoiseConfig cfg;
  cfg.samples_per_domain = 400;
  const DomainPair d = GenDenoise(cfg);
  std::set<std::vector<double>> source_rows;
  for (int i = 0; i < d.source.size(); ++i) {
    const Vector r = d.source.inputs.row(i).transpose();
    source_rows.insert(std::vector<double>(r.data(), r.data() + r.size()));
  }
  for (const Matrix* m : {&d.target_references, &d.target_test.references}) {
    for (int i = 0; i < m->rows(); ++i) {
      const Vector r = m->row(i).transpose();
      EXPECT_EQ(source_rows.count(
                    std::vector<double>(r.data(), r.data() + r.size())),
                0u);
    }
  }
}

TEST(GenDenoiseTest, SameSeedSameBytes) {
  DenoiseConfig cfg;
  cfg.samples_per_domain = 100;
  cfg.seed = 9;
  const DomainPair a = GenDenoise(cfg);
  const DomainPair b = GenDenoise(cfg);
  EXPECT_TRUE(SameBytes(a.source.inputs, b.source.inputs));
  EXPECT_TRUE(SameBytes(a.target.inputs, b.target.inputs));
  EXPECT_TRUE(SameBytes(a.target_test.inputs, b.target_test.inputs));
}

TEST(StripLabelsTest, KeepsInputsOnly) {
  LabeledDataset l;
  l.inputs = Matrix::Random(5, 3);
  l.labels = {0, 1, 0, 1, 1};
  const UnlabeledDataset u = StripLabels(l);
  EXPECT_TRUE(SameBytes(u.inputs, l.inputs));
}

}  // namespace
}  // namespace spdadapt
