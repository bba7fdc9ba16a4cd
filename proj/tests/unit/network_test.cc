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

#include "spdadapt/network.h"

#include <cmath>
#include <cstring>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.h"
#include "spdadapt/errors.h"
#include "spdadapt/random.h"

namespace spdadapt {
namespace {

using ::spdadapt::testing::RelErr;

ModelSpec SmallClassifier() {
  ModelSpec spec;
  spec.input_dim = 5;
  spec.encoder = {{8, Activation::kRelu}, {2, Activation::kTanh}};
  spec.head = {HeadKind::kClassifier, 3, {}};
  return spec;
}

Matrix RandomMatrix(CounterRng& rng, int r, int c) {
  Matrix m(r, c);
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < c; ++j) m(i, j) = rng.Normal();
  }
  return m;
}

std::vector<Dense> RandomStack(CounterRng& rng, int in) {
  const int depth = 1 + static_cast<int>(rng.UniformInt(3));
  std::vector<Dense> layers;
  for (int l = 0; l < depth; ++l) {
    Dense d;
    const int out = 1 + static_cast<int>(rng.UniformInt(8));
    // Fan-in scaling keeps tanh units out of saturation.
    d.weight = RandomMatrix(rng, out, in) / std::sqrt(static_cast<double>(in));
    d.bias = RandomMatrix(rng, out, 1);
    d.activation = static_cast<Activation>(rng.UniformInt(3));
    layers.push_back(d);
    in = out;
  }
  return layers;
}

// Every ReLU pre-activation is away from its kink, so the finite-difference
// stencil stays on one side.
bool AwayFromKinks(const std::vector<Dense>& layers, const StackCache& cache) {
  for (size_t l = 0; l < layers.size(); ++l) {
    if (layers[l].activation != Activation::kRelu) continue;
    if (cache.pre[l].cwiseAbs().minCoeff() < 0.05) return false;
  }
  return true;
}

// Fourth-order central difference of f at offset 0.
template <typename F>
double CentralDiff4(const F& f, double h) {
  return (-f(2 * h) + 8 * f(h) - 8 * f(-h) + f(-2 * h)) / (12 * h);
}

TEST(ActivationTest, NamesRoundTrip) {
  for (Activation a :
       {Activation::kRelu, Activation::kTanh, Activation::kIdentity}) {
    EXPECT_EQ(ParseActivation(ActivationName(a)), a);
  }
  EXPECT_THROW(ParseActivation("sigmoid"), DomainError);
}

TEST(ModelSpecTest, Validate) {
  ModelSpec spec = SmallClassifier();
  EXPECT_NO_THROW(spec.Validate());
  EXPECT_EQ(spec.embed_dim(), 2);
  spec.head.output_dim = 1;
  EXPECT_THROW(spec.Validate(), DomainError);
  spec = SmallClassifier();
  spec.encoder.clear();
  EXPECT_THROW(spec.Validate(), DomainError);
  spec = SmallClassifier();
  spec.input_dim = 0;
  EXPECT_THROW(spec.Validate(), DomainError);
}

TEST(InitModelTest, SameSeedGivesIdenticalBytes) {
  const ModelSpec spec = SmallClassifier();
  const Vector a = InitModel(spec, 17).Flatten();
  const Vector b = InitModel(spec, 17).Flatten();
  ASSERT_EQ(a.size(), b.size());
  EXPECT_EQ(std::memcmp(a.data(), b.data(), sizeof(double) * a.size()), 0);
}

TEST(InitModelTest, DifferentSeedsDiffer) {
  const ModelSpec spec = SmallClassifier();
  EXPECT_NE(InitModel(spec, 1).Flatten(), InitModel(spec, 2).Flatten());
}

TEST(InitModelTest, FanInScaledUniform) {
  const ModelSpec spec = SmallClassifier();
  const ModelParams p = InitModel(spec, 3);
  ASSERT_EQ(p.encoder.size(), 2u);
  ASSERT_EQ(p.head.size(), 1u);
  for (const auto* stack : {&p.encoder, &p.head}) {
    for (const Dense& d : *stack) {
      const double limit = 1.0 / std::sqrt(static_cast<double>(d.in()));
      EXPECT_LE(d.weight.cwiseAbs().maxCoeff(), limit);
      EXPECT_LE(d.bias.cwiseAbs().maxCoeff(), limit);
    }
  }
  EXPECT_EQ(p.size(), 5 * 8 + 8 + 8 * 2 + 2 + 2 * 3 + 3);
}

TEST(InitModelTest, EncoderOutputShape) {
  ModelSpec spec;
  spec.input_dim = 64;
  spec.encoder = {{32, Activation::kRelu}, {2, Activation::kIdentity}};
  spec.head = {HeadKind::kDecoder, 64, {{32, Activation::kRelu}}};
  const ModelParams p = InitModel(spec, 0);
  const Matrix z = ForwardStack(p.encoder, Matrix::Ones(9, 64));
  EXPECT_EQ(z.rows(), 9);
  EXPECT_EQ(z.cols(), 2);
  EXPECT_EQ(ForwardStack(p.head, z).cols(), 64);
}

TEST(ModelParamsTest, FlattenAssignRoundTrip) {
  ModelParams p = InitModel(SmallClassifier(), 4);
  Vector flat = p.Flatten();
  flat *= 2.0;
  p.Assign(flat);
  EXPECT_EQ(p.Flatten(), flat);
  EXPECT_EQ(p.ZerosLike().Flatten(), Vector::Zero(flat.size()));
  EXPECT_THROW(p.Assign(Vector::Zero(3)), DimensionMismatchError);
}

TEST(BackwardStackTest, MatchesFiniteDifferences) {
  CounterRng rng(11, 0);
  int instances = 0;
  while (instances < 60) {
    const int in = 1 + static_cast<int>(rng.UniformInt(8));
    const int b = 1 + static_cast<int>(rng.UniformInt(5));
    std::vector<Dense> layers = RandomStack(rng, in);
    const Matrix x = RandomMatrix(rng, b, in);
    StackCache cache;
    const Matrix y = ForwardStack(layers, x, &cache);
    if (!AwayFromKinks(layers, cache)) continue;
    ++instances;
    // Scalar objective: <w, y>.
    const Matrix w = RandomMatrix(rng, y.rows(), y.cols());
    const auto objective = [&](const std::vector<Dense>& ls, const Matrix& xx) {
      return ForwardStack(ls, xx).cwiseProduct(w).sum();
    };
    std::vector<Dense> grads = layers;
    for (Dense& g : grads) {
      g.weight.setZero();
      g.bias.setZero();
    }
    const Matrix gx = BackwardStack(layers, cache, w, &grads);
    const double h = 1e-3;
    double worst = 0.0;
    for (size_t l = 0; l < layers.size(); ++l) {
      for (int i = 0; i < layers[l].weight.size(); ++i) {
        const double fd = CentralDiff4(
            [&](double t) {
              auto ls = layers;
              ls[l].weight.data()[i] += t;
              return objective(ls, x);
            },
            h);
        worst = std::max(worst, RelErr(grads[l].weight.data()[i], fd));
      }
      for (int i = 0; i < layers[l].bias.size(); ++i) {
        const double fd = CentralDiff4(
            [&](double t) {
              auto ls = layers;
              ls[l].bias(i) += t;
              return objective(ls, x);
            },
            h);
        worst = std::max(worst, RelErr(grads[l].bias(i), fd));
      }
    }
    for (int i = 0; i < x.size(); ++i) {
      const double fd = CentralDiff4(
          [&](double t) {
            Matrix xx = x;
            xx.data()[i] += t;
            return objective(layers, xx);
          },
          h);
      worst = std::max(worst, RelErr(gx.data()[i], fd));
    }
    EXPECT_LE(worst, 1e-5) << "instance " << instances;
  }
}

TEST(BackwardStackTest, AccumulatesIntoGrads) {
  CounterRng rng(12, 0);
  std::vector<Dense> layers = RandomStack(rng, 3);
  const Matrix x = RandomMatrix(rng, 4, 3);
  StackCache cache;
  const Matrix y = ForwardStack(layers, x, &cache);
  std::vector<Dense> once = layers;
  for (Dense& g : once) {
    g.weight.setZero();
    g.bias.setZero();
  }
  std::vector<Dense> twice = once;
  const Matrix w = Matrix::Ones(y.rows(), y.cols());
  BackwardStack(layers, cache, w, &once);
  BackwardStack(layers, cache, w, &twice);
  BackwardStack(layers, cache, w, &twice);
  for (size_t l = 0; l < layers.size(); ++l) {
    EXPECT_LE((twice[l].weight - 2.0 * once[l].weight).norm(), 1e-12);
  }
}

TEST(SoftmaxCrossEntropyTest, ValueAndGradient) {
  Matrix logits(2, 3);
  logits << 0, 0, 0, 1000, 0, 0;
  const TaskLoss l = SoftmaxCrossEntropy(logits, {1, 0});
  EXPECT_NEAR(l.value, 0.5 * std::log(3.0), 1e-12);
  EXPECT_TRUE(l.grad.allFinite());
  CounterRng rng(13, 0);
  const Matrix z = RandomMatrix(rng, 5, 4);
  const std::vector<int> y = {0, 3, 2, 1, 3};
  const TaskLoss t = SoftmaxCrossEntropy(z, y);
  for (int i = 0; i < z.size(); ++i) {
    Matrix up = z;
    Matrix down = z;
    up.data()[i] += 1e-6;
    down.data()[i] -= 1e-6;
    const double fd = (SoftmaxCrossEntropy(up, y).value -
                       SoftmaxCrossEntropy(down, y).value) / 2e-6;
    EXPECT_LE(RelErr(t.grad.data()[i], fd), 1e-5);
  }
  EXPECT_THROW(SoftmaxCrossEntropy(z, {0, 1}), DimensionMismatchError);
  EXPECT_THROW(SoftmaxCrossEntropy(z, {0, 1, 2, 3, 4}), DomainError);
}

TEST(MeanSquaredErrorTest, ValueAndGradient) {
  Matrix out(2, 2);
  Matrix ref(2, 2);
  out << 1, 2, 3, 4;
  ref << 1, 1, 1, 1;
  const TaskLoss l = MeanSquaredError(out, ref);
  EXPECT_DOUBLE_EQ(l.value, (0 + 1 + 4 + 9) / 4.0);
  EXPECT_DOUBLE_EQ(l.grad(1, 1), 2.0 * 3.0 / 4.0);
  EXPECT_EQ(MeanSquaredError(ref, ref).value, 0.0);
}

TEST(ArgmaxRowsTest, PicksLargest) {
  Matrix s(3, 3);
  s << 0, 1, 0, 5, -1, 2, 0, 0, 9;
  EXPECT_EQ(ArgmaxRows(s), (std::vector<int>{1, 0, 2}));
}

}  // namespace
}  // namespace spdadapt
