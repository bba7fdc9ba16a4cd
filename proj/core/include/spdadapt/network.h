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

// Small fully connected networks with hand-written backward passes.
//
// A layer maps a batch X (b x in) to act(X W^T + 1 bias^T). The encoder is a
// stack of such layers ending at the embedding width; the head is either a
// linear classifier (softmax cross-entropy) or a decoder stack ending in a
// linear output layer.

#ifndef SPDADAPT_NETWORK_H_
#define SPDADAPT_NETWORK_H_

#include <cstdint>
#include <string>
#include <vector>

#include "spdadapt/spd_geometry.h"

namespace spdadapt {

enum class Activation { kRelu, kTanh, kIdentity };

const char* ActivationName(Activation a);
Activation ParseActivation(const std::string& name);

struct LayerSpec {
  int width = 0;
  Activation activation = Activation::kIdentity;
};

enum class HeadKind { kClassifier, kDecoder };

struct HeadSpec {
  HeadKind kind = HeadKind::kClassifier;
  // Number of classes (classifier) or reconstruction width (decoder).
  int output_dim = 0;
  // Decoder hidden layers; the final linear layer to output_dim is implied.
  std::vector<LayerSpec> hidden;
};

struct ModelSpec {
  int input_dim = 0;
  // The last layer's width is the embedding dimension.
  std::vector<LayerSpec> encoder;
  HeadSpec head;

  int embed_dim() const { return encoder.empty() ? 0 : encoder.back().width; }
  // Throws DomainError describing the first violated constraint.
  void Validate() const;
};

struct Dense {
  Matrix weight;  // out x in
  Vector bias;    // out
  Activation activation = Activation::kIdentity;

  int in() const { return static_cast<int>(weight.cols()); }
  int out() const { return static_cast<int>(weight.rows()); }
};

struct ModelParams {
  std::vector<Dense> encoder;
  std::vector<Dense> head;

  int size() const;
  Vector Flatten() const;
  // Inverse of Flatten; `flat` must have size() entries.
  void Assign(const Vector& flat);
  // Same shapes, all zeros.
  ModelParams ZerosLike() const;
};

// Weights and biases ~ U(-1/sqrt(fan_in), 1/sqrt(fan_in)), drawn in layer
// order (encoder, then head), weights row-major before biases, from stream
// streams::kInit of `seed`.
ModelParams InitModel(const ModelSpec& spec, std::uint64_t seed);

// Per-layer activations kept for the backward pass.
struct StackCache {
  std::vector<Matrix> inputs;  // input to each layer
  std::vector<Matrix> pre;     // pre-activation of each layer
};

Matrix ForwardStack(const std::vector<Dense>& layers, const Matrix& x,
                    StackCache* cache = nullptr);

// Accumulates parameter gradients into `grads` (same shapes as `layers`) and
// returns the gradient with respect to the stack input.
Matrix BackwardStack(const std::vector<Dense>& layers, const StackCache& cache,
                     const Matrix& grad_out, std::vector<Dense>* grads);

struct TaskLoss {
  double value = 0.0;
  Matrix grad;  // with respect to the head output
};

// Mean over the batch of -log softmax(logits)[label].
TaskLoss SoftmaxCrossEntropy(const Matrix& logits,
                             const std::vector<int>& labels);

// Mean over all entries of (output - reference)^2.
TaskLoss MeanSquaredError(const Matrix& output, const Matrix& reference);

std::vector<int> ArgmaxRows(const Matrix& scores);

}  // namespace spdadapt

#endif  // SPDADAPT_NETWORK_H_
