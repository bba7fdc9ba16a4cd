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

// Random-instance audit of the analytic DistLoss gradients against central
// finite differences.

#ifndef SPDADAPT_GRADCHECK_H_
#define SPDADAPT_GRADCHECK_H_

#include <cstdint>

#include "spdadapt/loss_gradients.h"

namespace spdadapt {

struct GradCheckOptions {
  int batch = 40;
  int dim = 3;
  int coords = 50;      // feature coordinates probed per instance
  int instances = 1;
  double rel_step = 1e-5;  // h = rel_step * max(1, |z|)
};

struct GradCheckResult {
  double max_rel_error = 0.0;
  int probes = 0;
};

// Relative error |a - b| / max(|a|, |b|, floor). The floor keeps coordinates
// whose true derivative is ~0 from reporting noise as huge relative error.
double RelativeError(double analytic, double numeric, double floor = 1e-7);

GradCheckResult GradCheckDistLoss(DistKind kind, std::uint64_t seed,
                                  const GradCheckOptions& options = {});

}  // namespace spdadapt

#endif  // SPDADAPT_GRADCHECK_H_
