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

// Discrete total variation, the Hilbert projective metric on the positive
// cone, the tanh bound linking them, and closed-form Fisher-Rao distances
// used as oracles for the Siegel-embedding lower bound.

#ifndef SPDADAPT_DIVERGENCE_BOUNDS_H_
#define SPDADAPT_DIVERGENCE_BOUNDS_H_

#include <cstdint>
#include <vector>

#include "spdadapt/spd_geometry.h"

namespace spdadapt {

// Strictly positive probability vector summing to 1 within 1e-12.
class DiscreteDist {
 public:
  // Throws NonInteriorPointError for entries <= 0 and DomainError when the
  // entries do not sum to 1.
  static DiscreteDist Create(std::vector<double> probs);
  // Normalizes a positive vector first.
  static DiscreteDist Normalized(std::vector<double> weights);

  int size() const { return static_cast<int>(probs_.size()); }
  const std::vector<double>& probs() const { return probs_; }
  double operator[](int i) const { return probs_[i]; }

 private:
  explicit DiscreteDist(std::vector<double> p) : probs_(std::move(p)) {}
  std::vector<double> probs_;
};

// sum_i |p_i - q_i|, i.e. twice the largest event-probability gap.
double TvDiscrete(const DiscreteDist& p, const DiscreteDist& q);

// log(max_i(p_i/q_i) / min_i(p_i/q_i)). Accepts any strictly positive
// vectors, normalized or not (the metric is projective).
double HilbertDiscrete(const std::vector<double>& p,
                       const std::vector<double>& q);
double HilbertDiscrete(const DiscreteDist& p, const DiscreteDist& q);

struct BoundCheck {
  double lhs = 0.0;    // TV distance
  double rhs = 0.0;    // 2 tanh(d_H / 4)
  bool holds = false;  // lhs <= rhs + 1e-12
  double slack = 0.0;  // rhs - lhs
  double hilbert = 0.0;
};

BoundCheck CheckTargetBound(const DiscreteDist& p, const DiscreteDist& q);

// Closed-form Fisher-Rao distance between N(mu1, sigma1^2) and
// N(mu2, sigma2^2):
//   sqrt(2) * acosh(1 + ((mu1-mu2)^2 / 2 + (sigma1-sigma2)^2) / (2 s1 s2)).
// Throws DomainError for non-positive sigmas.
double FisherRaoUnivariate(double mu1, double sigma1, double mu2,
                           double sigma2);

// Fisher-Rao distance between zero-mean (equal-mean) Gaussians with
// covariances S1, S2: sqrt(1/2 sum_i log^2 lambda_i(S1^{-1} S2)).
double FisherRaoFixedMean(const SpdMatrix& s1, const SpdMatrix& s2);

// Symmetric Dirichlet(1, ..., 1) draw of size k, each probability floored at
// 1e-6 and renormalized. Deterministic in (seed, stream).
DiscreteDist SampleDirichletFloor(int k, std::uint64_t seed,
                                  std::uint64_t stream);

struct BoundSweepRow {
  int k = 0;
  std::uint64_t seed = 0;
  double tv = 0.0;
  double hilbert = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  bool holds = false;
};

// `pairs` random discrete pairs with support sizes cycling through
// [k_min, k_max]. Row i uses seed (base_seed + i).
std::vector<BoundSweepRow> BoundSweep(int pairs, int k_min, int k_max,
                                      std::uint64_t base_seed);

}  // namespace spdadapt

#endif  // SPDADAPT_DIVERGENCE_BOUNDS_H_
