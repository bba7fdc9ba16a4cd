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

#include "spdadapt/optimizer.h"

#include <cmath>

#include "spdadapt/errors.h"

namespace spdadapt {

const char* OptimizerName(OptimizerKind k) {
  return k == OptimizerKind::kAdam ? "adam" : "sgd";
}

OptimizerKind ParseOptimizer(const std::string& name) {
  if (name == "adam") return OptimizerKind::kAdam;
  if (name == "sgd") return OptimizerKind::kSgd;
  throw DomainError("unknown optimizer '" + name + "' (expected adam or sgd)");
}

Optimizer::Optimizer(OptimizerKind kind, double learn_rate, int num_params)
    : kind_(kind),
      lr_(learn_rate),
      m_(Vector::Zero(num_params)),
      v_(Vector::Zero(num_params)) {
  if (!(learn_rate > 0.0)) throw DomainError("learn_rate must be positive");
}

void Optimizer::Step(Vector& params, const Vector& grad) {
  if (params.size() != m_.size() || grad.size() != m_.size()) {
    throw DimensionMismatchError("optimizer state size mismatch");
  }
  ++t_;
  if (kind_ == OptimizerKind::kSgd) {
    params -= lr_ * grad;
    return;
  }
  m_ = kBeta1 * m_ + (1.0 - kBeta1) * grad;
  v_ = kBeta2 * v_ + (1.0 - kBeta2) * grad.cwiseAbs2();
  const double c1 = 1.0 - std::pow(kBeta1, t_);
  const double c2 = 1.0 - std::pow(kBeta2, t_);
  params.array() -=
      lr_ * (m_.array() / c1) / ((v_.array() / c2).sqrt() + kEps);
}

}  // namespace spdadapt
