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

#include "spdadapt/gradcheck.h"

#include <algorithm>
#include <cmath>

#include "spdadapt/random.h"

namespace spdadapt {

double RelativeError(double analytic, double numeric, double floor) {
  const double denom =
      std::max({std::abs(analytic), std::abs(numeric), floor});
  return std::abs(analytic - numeric) / denom;
}

GradCheckResult GradCheckDistLoss(DistKind kind, std::uint64_t seed,
                                  const GradCheckOptions& options) {
  GradCheckResult result;
  for (int inst = 0; inst < options.instances; ++inst) {
    CounterRng rng(seed + static_cast<std::uint64_t>(inst),
                   streams::kGradcheck);
    const int b = options.batch;
    const int n = options.dim;
    // Anisotropic, shifted batches so the moments differ generically.
    Matrix zs(b, n);
    Matrix zt(b, n);
    for (int i = 0; i < b; ++i) {
      for (int j = 0; j < n; ++j) {
        zs(i, j) = (1.0 + 0.3 * j) * rng.Normal() + 0.2 * j;
        zt(i, j) = (0.7 + 0.5 * j) * rng.Normal() - 0.4 + 0.1 * j;
      }
    }
    const LossEval eval = DistLoss(zs, zt, kind);
    for (int c = 0; c < options.coords; ++c) {
      const bool source = rng.UniformInt(2) == 0;
      const int i = static_cast<int>(rng.UniformInt(b));
      const int j = static_cast<int>(rng.UniformInt(n));
      Matrix& z = source ? zs : zt;
      const double orig = z(i, j);
      const double h = options.rel_step * std::max(1.0, std::abs(orig));
      z(i, j) = orig + h;
      const double up = DistLossValue(zs, zt, kind);
      z(i, j) = orig - h;
      const double down = DistLossValue(zs, zt, kind);
      z(i, j) = orig;
      const double numeric = (up - down) / (2.0 * h);
      const double analytic =
          source ? eval.grad_source(i, j) : eval.grad_target(i, j);
      result.max_rel_error =
          std::max(result.max_rel_error, RelativeError(analytic, numeric));
      ++result.probes;
    }
  }
  return result;
}

}  // namespace spdadapt
