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

#include "spdadapt/errors.h"
#include "spdadapt/random.h"

namespace spdadapt {
namespace {

Matrix Activate(const Matrix& z, Activation a) {
  switch (a) {
    case Activation::kRelu:
      return z.cwiseMax(0.0);
    case Activation::kTanh:
      return z.array().tanh().matrix();
    case Activation::kIdentity:
      return z;
  }
  return z;
}

// d act(z) / dz applied elementwise to an upstream gradient.
Matrix ActivationBackward(const Matrix& z, const Matrix& grad, Activation a) {
  switch (a) {
    case Activation::kRelu:
      return (z.array() > 0.0).select(grad, 0.0);
    case Activation::kTanh: {
      const Eigen::ArrayXXd t = z.array().tanh();
      return (grad.array() * (1.0 - t * t)).matrix();
    }
    case Activation::kIdentity:
      return grad;
  }
  return grad;
}

Dense MakeDense(int in, int out, Activation act, CounterRng& rng) {
  Dense d;
  d.activation = act;
  d.weight.resize(out, in);
  d.bias.resize(out);
  const double limit = 1.0 / std::sqrt(static_cast<double>(in));
  for (int i = 0; i < out; ++i) {
    for (int j = 0; j < in; ++j) d.weight(i, j) = rng.Uniform(-limit, limit);
  }
  for (int i = 0; i < out; ++i) d.bias(i) = rng.Uniform(-limit, limit);
  return d;
}

template <typename Fn>
void ForEachBlock(const ModelParams& p, Fn&& fn) {
  for (const auto* stack : {&p.encoder, &p.head}) {
    for (const Dense& d : *stack) {
      fn(d.weight.data(), d.weight.size());
      fn(d.bias.data(), d.bias.size());
    }
  }
}

template <typename Fn>
void ForEachBlockMut(ModelParams& p, Fn&& fn) {
  for (auto* stack : {&p.encoder, &p.head}) {
    for (Dense& d : *stack) {
      fn(d.weight.data(), d.weight.size());
      fn(d.bias.data(), d.bias.size());
    }
  }
}

}  // namespace

const char* ActivationName(Activation a) {
  switch (a) {
    case Activation::kRelu:
      return "relu";
    case Activation::kTanh:
      return "tanh";
    case Activation::kIdentity:
      return "identity";
  }
  return "?";
}

Activation ParseActivation(const std::string& name) {
  if (name == "relu") return Activation::kRelu;
  if (name == "tanh") return Activation::kTanh;
  if (name == "identity") return Activation::kIdentity;
  throw DomainError("unknown activation '" + name + "'");
}

void ModelSpec::Validate() const {
  if (input_dim < 1) throw DomainError("input_dim must be positive");
  if (encoder.empty()) throw DomainError("encoder needs at least one layer");
  for (const LayerSpec& l : encoder) {
    if (l.width < 1) throw DomainError("encoder widths must be positive");
  }
  if (embed_dim() < 1) throw DomainError("embed_dim must be positive");
  if (head.output_dim < 1) throw DomainError("head output_dim must be positive");
  if (head.kind == HeadKind::kClassifier && head.output_dim < 2) {
    throw DomainError("classifier needs at least 2 classes");
  }
  for (const LayerSpec& l : head.hidden) {
    if (l.width < 1) throw DomainError("decoder widths must be positive");
  }
}

int ModelParams::size() const {
  int n = 0;
  ForEachBlock(*this, [&](const double*, Eigen::Index len) {
    n += static_cast<int>(len);
  });
  return n;
}

Vector ModelParams::Flatten() const {
  Vector flat(size());
  Eigen::Index at = 0;
  ForEachBlock(*this, [&](const double* data, Eigen::Index len) {
    flat.segment(at, len) = Eigen::Map<const Vector>(data, len);
    at += len;
  });
  return flat;
}

void ModelParams::Assign(const Vector& flat) {
  if (flat.size() != size()) {
    throw DimensionMismatchError("parameter vector has the wrong length");
  }
  Eigen::Index at = 0;
  ForEachBlockMut(*this, [&](double* data, Eigen::Index len) {
    Eigen::Map<Vector>(data, len) = flat.segment(at, len);
    at += len;
  });
}

ModelParams ModelParams::ZerosLike() const {
  ModelParams z = *this;
  ForEachBlockMut(z, [](double* data, Eigen::Index len) {
    Eigen::Map<Vector>(data, len).setZero();
  });
  return z;
}

ModelParams InitModel(const ModelSpec& spec, std::uint64_t seed) {
  spec.Validate();
  CounterRng rng(seed, streams::kInit);
  ModelParams p;
  int in = spec.input_dim;
  for (const LayerSpec& l : spec.encoder) {
    p.encoder.push_back(MakeDense(in, l.width, l.activation, rng));
    in = l.width;
  }
  for (const LayerSpec& l : spec.head.hidden) {
    p.head.push_back(MakeDense(in, l.width, l.activation, rng));
    in = l.width;
  }
  p.head.push_back(
      MakeDense(in, spec.head.output_dim, Activation::kIdentity, rng));
  return p;
}

Matrix ForwardStack(const std::vector<Dense>& layers, const Matrix& x,
                    StackCache* cache) {
  if (cache != nullptr) {
    cache->inputs.clear();
    cache->pre.clear();
  }
  Matrix a = x;
  for (const Dense& d : layers) {
    Matrix z = a * d.weight.transpose();
    z.rowwise() += d.bias.transpose();
    if (cache != nullptr) {
      cache->inputs.push_back(a);
      cache->pre.push_back(z);
    }
    a = Activate(z, d.activation);
  }
  return a;
}

Matrix BackwardStack(const std::vector<Dense>& layers, const StackCache& cache,
                     const Matrix& grad_out, std::vector<Dense>* grads) {
  Matrix g = grad_out;
  for (int i = static_cast<int>(layers.size()) - 1; i >= 0; --i) {
    const Dense& d = layers[i];
    const Matrix gz = ActivationBackward(cache.pre[i], g, d.activation);
    if (grads != nullptr) {
      (*grads)[i].weight += gz.transpose() * cache.inputs[i];
      (*grads)[i].bias += gz.colwise().sum().transpose();
    }
    g = gz * d.weight;
  }
  return g;
}

TaskLoss SoftmaxCrossEntropy(const Matrix& logits,
                             const std::vector<int>& labels) {
  const Eigen::Index b = logits.rows();
  if (static_cast<Eigen::Index>(labels.size()) != b) {
    throw DimensionMismatchError("label count does not match batch size");
  }
  TaskLoss out;
  out.grad.resize(b, logits.cols());
  double total = 0.0;
  for (Eigen::Index i = 0; i < b; ++i) {
    const double m = logits.row(i).maxCoeff();
    const Eigen::RowVectorXd e = (logits.row(i).array() - m).exp().matrix();
    const double s = e.sum();
    const int y = labels[i];
    if (y < 0 || y >= logits.cols()) throw DomainError("label out of range");
    total += -(logits(i, y) - m - std::log(s));
    out.grad.row(i) = e / s;
    out.grad(i, y) -= 1.0;
  }
  out.value = total / static_cast<double>(b);
  out.grad /= static_cast<double>(b);
  return out;
}

TaskLoss MeanSquaredError(const Matrix& output, const Matrix& reference) {
  if (output.rows() != reference.rows() || output.cols() != reference.cols()) {
    throw DimensionMismatchError("reconstruction shape mismatch");
  }
  const double count = static_cast<double>(output.size());
  const Matrix diff = output - reference;
  return {diff.squaredNorm() / count, 2.0 * diff / count};
}

std::vector<int> ArgmaxRows(const Matrix& scores) {
  std::vector<int> out(scores.rows());
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    Eigen::Index j = 0;
    scores.row(i).maxCoeff(&j);
    out[i] = static_cast<int>(j);
  }
  return out;
}

}  // namespace spdadapt
