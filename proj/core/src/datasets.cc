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

#include <algorithm>
#include <cmath>
#include <numbers>

#include "spdadapt/errors.h"
#include "spdadapt/random.h"

namespace spdadapt {
namespace {

struct BlobsDraw {
  Matrix x;
  std::vector<int> y;
};

// Class-major order: samples_per_class rows of class 0, then class 1, ...
BlobsDraw DrawBlobs(const BlobsConfig& cfg, CounterRng& rng) {
  const int n = cfg.num_classes * cfg.samples_per_class;
  BlobsDraw d;
  d.x.resize(n, cfg.input_dim);
  d.y.resize(n);
  const double mid = 0.5 * (cfg.num_classes - 1);
  int row = 0;
  for (int k = 0; k < cfg.num_classes; ++k) {
    for (int s = 0; s < cfg.samples_per_class; ++s, ++row) {
      for (int j = 0; j < cfg.input_dim; ++j) {
        d.x(row, j) = cfg.cov_scale * rng.Normal();
      }
      d.x(row, 0) += cfg.radius * (k - mid);
      d.y[row] = k;
    }
  }
  return d;
}

void ApplyRigidMap(const BlobsConfig& cfg, Matrix& x) {
  const double c = std::cos(cfg.target_rotation);
  const double s = std::sin(cfg.target_rotation);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const double x0 = x(i, 0);
    const double x1 = x(i, 1);
    x(i, 0) = c * x0 - s * x1;
    x(i, 1) = s * x0 + c * x1;
    for (std::size_t j = 0; j < cfg.target_translation.size(); ++j) {
      x(i, static_cast<Eigen::Index>(j)) += cfg.target_translation[j];
    }
  }
}

Vector DrawSignal(int length, CounterRng& rng) {
  const int components = 1 + static_cast<int>(rng.UniformInt(3));
  Vector s = Vector::Zero(length);
  for (int c = 0; c < components; ++c) {
    const double amp = rng.Uniform(0.5, 1.0);
    const double freq = rng.Uniform(0.5, 4.0);
    const double phase = rng.Uniform(0.0, 2.0 * std::numbers::pi);
    for (int j = 0; j < length; ++j) {
      const double t = static_cast<double>(j) / (length - 1);
      s(j) += amp * std::sin(2.0 * std::numbers::pi * freq * t + phase);
    }
  }
  const double lo = s.minCoeff();
  const double hi = s.maxCoeff();
  return ((s.array() - lo) / (hi - lo)).matrix();
}

Matrix DrawSignals(const DenoiseConfig& cfg, CounterRng& rng) {
  Matrix m(cfg.samples_per_domain, cfg.signal_length);
  for (int i = 0; i < cfg.samples_per_domain; ++i) {
    m.row(i) = DrawSignal(cfg.signal_length, rng).transpose();
  }
  return m;
}

Matrix AddNoise(const DenoiseConfig& cfg, const Matrix& clean,
                CounterRng& rng) {
  Matrix noisy = clean;
  for (Eigen::Index i = 0; i < noisy.rows(); ++i) {
    for (Eigen::Index j = 0; j < noisy.cols(); ++j) {
      noisy(i, j) += cfg.noise_mean + cfg.noise_std * rng.Normal();
    }
  }
  return noisy;
}

}  // namespace

void BlobsConfig::Validate() const {
  if (num_classes < 2) throw DomainError("blobs need at least 2 classes");
  if (samples_per_class < 1) throw DomainError("samples_per_class must be >= 1");
  if (input_dim < 2) throw DomainError("blobs input_dim must be >= 2");
  if (!(cov_scale > 0.0)) throw DomainError("cov_scale must be positive");
  if (static_cast<int>(target_translation.size()) > input_dim) {
    throw DomainError("target_translation is longer than input_dim");
  }
}

void DenoiseConfig::Validate() const {
  if (signal_length < 2) throw DomainError("signal_length must be >= 2");
  if (samples_per_domain < 2) {
    throw DomainError("samples_per_domain must be >= 2");
  }
  if (!(noise_std >= 0.0)) throw DomainError("noise_std must be >= 0");
}

DomainPair GenBlobs(const BlobsConfig& cfg) {
  cfg.Validate();
  DomainPair out;
  CounterRng src_rng(cfg.seed, streams::kBlobsSource);
  BlobsDraw src = DrawBlobs(cfg, src_rng);
  out.source.inputs = std::move(src.x);
  out.source.labels = std::move(src.y);

  CounterRng tgt_rng(cfg.seed, streams::kBlobsTarget);
  BlobsDraw tgt = DrawBlobs(cfg, tgt_rng);
  ApplyRigidMap(cfg, tgt.x);
  out.target.inputs = std::move(tgt.x);
  out.target_labels = std::move(tgt.y);

  CounterRng test_rng(cfg.seed, streams::kBlobsTargetTest);
  BlobsDraw test = DrawBlobs(cfg, test_rng);
  ApplyRigidMap(cfg, test.x);
  out.target_test.inputs = std::move(test.x);
  out.target_test.labels = std::move(test.y);
  return out;
}

DomainPair GenDenoise(const DenoiseConfig& cfg) {
  cfg.Validate();
  DomainPair out;
  CounterRng src_rng(cfg.seed, streams::kDenoiseSource);
  out.source.inputs = DrawSignals(cfg, src_rng);
  out.source.references = out.source.inputs;

  CounterRng tgt_rng(cfg.seed, streams::kDenoiseTarget);
  CounterRng noise_rng(cfg.seed, streams::kDenoiseNoise);
  const Matrix clean_train = DrawSignals(cfg, tgt_rng);
  const Matrix clean_test = DrawSignals(cfg, tgt_rng);
  out.target.inputs = AddNoise(cfg, clean_train, noise_rng);
  out.target_references = clean_train;
  out.target_test.inputs = AddNoise(cfg, clean_test, noise_rng);
  out.target_test.references = clean_test;
  return out;
}

UnlabeledDataset StripLabels(const LabeledDataset& d) {
  return UnlabeledDataset{d.inputs};
}

}  // namespace spdadapt
