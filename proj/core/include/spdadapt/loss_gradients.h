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

// Moment-matching adaptation losses and their exact gradients with respect to
// every feature row of the source and target batches.
//
// Gradients are chained by hand: distance -> embedded matrices -> moments ->
// rows. All "gradients" of a function of a symmetric matrix X are the
// symmetric matrices G with dL = sum_ij G_ij dX_ij over full-matrix
// perturbations.

#ifndef SPDADAPT_LOSS_GRADIENTS_H_
#define SPDADAPT_LOSS_GRADIENTS_H_

#include <string>

#include "spdadapt/moment_estimation.h"
#include "spdadapt/siegel_embedding.h"
#include "spdadapt/spd_geometry.h"

namespace spdadapt {

enum class DistKind { kAirm, kHilbert, kMeanEuclid, kCoralFrob, kLogEuclid };

inline constexpr DistKind kAllDistKinds[] = {
    DistKind::kAirm, DistKind::kHilbert, DistKind::kMeanEuclid,
    DistKind::kCoralFrob, DistKind::kLogEuclid};

// "airm", "hilbert", "mean_euclid", "coral_frob", "log_euclid".
const char* DistKindName(DistKind kind);
// Throws DomainError for unknown names.
DistKind ParseDistKind(const std::string& name);
bool IsGeometric(DistKind kind);

// Below this affine-invariant distance the airm gradient is defined as zero.
inline constexpr double kDistEps = 1e-8;
// Relative eigenvalue gap under which an extreme eigenvalue is treated as
// repeated.
inline constexpr double kDegenerateGap = 1e-9;

struct LossEval {
  double value = 0.0;
  Matrix grad_source;  // b_S x n
  Matrix grad_target;  // b_T x n
};

enum class DegeneracyPolicy {
  // Throw DegenerateSpectrumError / NearZeroDistanceError.
  kThrow,
  // Hilbert: average eigenvector outer products over the repeated extreme
  // eigenspace. Airm: zero gradient when d < kDistEps.
  kResolve,
};

struct SpdPairGrad {
  SymMatrix d_p1 = SymMatrix::Zero(0);
  SymMatrix d_p2 = SymMatrix::Zero(0);
};

// Gradient of DistAirm or DistHilbert with respect to both arguments.
SpdPairGrad GradSpdPair(const SpdMatrix& p1, const SpdMatrix& p2,
                        DistKind kind,
                        DegeneracyPolicy policy = DegeneracyPolicy::kThrow);

struct EmbedGrad {
  Vector dmean;
  SymMatrix dcov = SymMatrix::Zero(0);
};

// Pulls an upstream gradient on f_a(mean, cov) back to (mean, cov).
EmbedGrad GradEmbed(const Vector& mean, const SymMatrix& upstream,
                    const EmbeddingParams& params = {});

// Pulls gradients on (mean, unbiased covariance) back to the batch rows.
Matrix GradMoments(const Matrix& rows, const Vector& dmean,
                   const Matrix& dcov);

// Gradient of ||Log(S) - Log(T)||_F^2 with respect to S, for SPD S and the
// fixed symmetric difference D = Log(S) - Log(T): 2 * DLog_S[D].
SymMatrix LogFrechetAdjoint(const SpdMatrix& s, const SymMatrix& direction);

// Adaptation loss between two feature batches.
//   airm, hilbert: distance between f_a(moments(zs)) and f_a(moments(zt)).
//   mean_euclid:   ||mu_S - mu_T||^2
//   coral_frob:    ||Sigma_S - Sigma_T||_F^2
//   log_euclid:    ||Log Sigma_S - Log Sigma_T||_F^2
// Throws GateClosedError when a matrix that must be SPD is not.
LossEval DistLoss(const Matrix& zs, const Matrix& zt, DistKind kind,
                  const EmbeddingParams& params = {});
LossEval DistLoss(const FeatureBatch& zs, const FeatureBatch& zt,
                  DistKind kind, const EmbeddingParams& params = {});

// Loss value only; same computation as DistLoss without the backward pass.
double DistLossValue(const Matrix& zs, const Matrix& zt, DistKind kind,
                     const EmbeddingParams& params = {});

}  // namespace spdadapt

#endif  // SPDADAPT_LOSS_GRADIENTS_H_
