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

#ifndef SPDADAPT_OPTIMIZER_H_
#define SPDADAPT_OPTIMIZER_H_

#include <string>

#include "spdadapt/spd_geometry.h"

namespace spdadapt {

enum class OptimizerKind { kAdam, kSgd };

const char* OptimizerName(OptimizerKind k);
OptimizerKind ParseOptimizer(const std::string& name);

// Adam (beta1 = 0.9, beta2 = 0.999, eps = 1e-8, bias-corrected) or plain SGD
// over a flat parameter vector.
class Optimizer {
 public:
  Optimizer(OptimizerKind kind, double learn_rate, int num_params);

  void Step(Vector& params, const Vector& grad);

  int steps() const { return t_; }

 private:
  static constexpr double kBeta1 = 0.9;
  static constexpr double kBeta2 = 0.999;
  static constexpr double kEps = 1e-8;

  OptimizerKind kind_;
  double lr_;
  Vector m_;
  Vector v_;
  int t_ = 0;
};

}  // namespace spdadapt

#endif  // SPDADAPT_OPTIMIZER_H_
