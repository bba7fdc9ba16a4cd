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

#include "spdadapt/divergence_bounds.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "spdadapt/errors.h"
#include "spdadapt/random.h"

namespace spdadapt {
namespace {

constexpr double kNormTol = 1e-12;
constexpr double kBoundTol = 1e-12;
constexpr double kDirichletFloor = 1e-6;

void RequireSameSupport(std::size_t a, std::size_t b) {
  if (a != b || a == 0) {
    throw SupportMismatchError("support sizes differ: " + std::to_string(a) +
                               " vs " + std::to_string(b));
  }
}

}  // namespace

DiscreteDist DiscreteDist::Create(std::vector<double> probs) {
  if (probs.empty()) throw DomainError("empty distribution");
  for (double p : probs) {
    if (!(p > 0.0) || !std::isfinite(p)) {
      throw NonInteriorPointError("probabilities must be strictly positive");
    }
  }
  const double total = std::accumulate(probs.begin(), probs.end(), 0.0);
  if (std::abs(total - 1.0) > kNormTol) {
    throw DomainError("probabilities sum to " + std::to_string(total));
  }
  return DiscreteDist(std::move(probs));
}

DiscreteDist DiscreteDist::Normalized(std::vector<double> weights) {
  for (double w : weights) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw NonInteriorPointError("weights must be strictly positive");
    }
  }
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  for (double& w : weights) w /= total;
  return DiscreteDist(std::move(weights));
}

double TvDiscrete(const DiscreteDist& p, const DiscreteDist& q) {
  RequireSameSupport(p.size(), q.size());
  double tv = 0.0;
  for (int i = 0; i < p.size(); ++i) tv += std::abs(p[i] - q[i]);
  return tv;
}

double HilbertDiscrete(const std::vector<double>& p,
                       const std::vector<double>& q) {
  RequireSameSupport(p.size(), q.size());
  double lo = INFINITY;
  double hi = -INFINITY;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!(p[i] > 0.0) || !(q[i] > 0.0)) {
      throw NonInteriorPointError(
          "Hilbert metric needs strictly positive entries");
    }
    const double r = std::log(p[i]) - std::log(q[i]);
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  return hi - lo;
}

double HilbertDiscrete(const DiscreteDist& p, const DiscreteDist& q) {
  return HilbertDiscrete(p.probs(), q.probs());
}

BoundCheck CheckTargetBound(const DiscreteDist& p, const DiscreteDist& q) {
  BoundCheck c;
  c.lhs = TvDiscrete(p, q);
  c.hilbert = HilbertDiscrete(p, q);
  c.rhs = 2.0 * std::tanh(c.hilbert / 4.0);
  c.slack = c.rhs - c.lhs;
  c.holds = c.lhs <= c.rhs + kBoundTol;
  return c;
}

double FisherRaoUnivariate(double mu1, double sigma1, double mu2,
                           double sigma2) {
  if (!(sigma1 > 0.0) || !(sigma2 > 0.0)) {
    throw DomainError("standard deviations must be positive");
  }
  const double dm = mu1 - mu2;
  const double ds = sigma1 - sigma2;
  const double arg = 1.0 + (0.5 * dm * dm + ds * ds) / (2.0 * sigma1 * sigma2);
  return std::sqrt(2.0) * std::acosh(arg);
}

double FisherRaoFixedMean(const SpdMatrix& s1, const SpdMatrix& s2) {
  const Vector lambda = PencilEigenvalues(s1, s2);
  double sum = 0.0;
  for (double l : lambda) sum += std::log(l) * std::log(l);
  return std::sqrt(0.5 * sum);
}

DiscreteDist SampleDirichletFloor(int k, std::uint64_t seed,
                                  std::uint64_t stream) {
  if (k < 1) throw DomainError("support size must be positive");
  CounterRng rng(seed, stream);
  // Dirichlet(1, ..., 1) = normalized unit exponentials.
  std::vector<double> w(k);
  for (double& x : w) x = -std::log(1.0 - rng.Uniform());
  double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& x : w) x = std::max(x / total, kDirichletFloor);
  total = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& x : w) x /= total;
  return DiscreteDist::Normalized(std::move(w));
}

std::vector<BoundSweepRow> BoundSweep(int pairs, int k_min, int k_max,
                                      std::uint64_t base_seed) {
  if (k_min < 1 || k_max < k_min) throw DomainError("invalid support range");
  std::vector<BoundSweepRow> rows;
  rows.reserve(pairs);
  const int span = k_max - k_min + 1;
  for (int i = 0; i < pairs; ++i) {
    BoundSweepRow row;
    row.k = k_min + i % span;
    row.seed = base_seed + static_cast<std::uint64_t>(i);
    const DiscreteDist p =
        SampleDirichletFloor(row.k, row.seed, streams::kDirichlet);
    const DiscreteDist q =
        SampleDirichletFloor(row.k, row.seed, streams::kDirichlet + 1);
    const BoundCheck c = CheckTargetBound(p, q);
    row.tv = c.lhs;
    row.hilbert = c.hilbert;
    row.rhs = c.rhs;
    row.slack = c.slack;
    row.holds = c.holds;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace spdadapt
