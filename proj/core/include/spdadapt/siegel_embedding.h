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

// Calvo-Oller / Siegel embedding of Gaussian moments into P(n+1):
//
//            [ Sigma + a mu mu^T   a mu ]
//   f_a  ->  [                          ]
//            [ a mu^T              a    ]
//
// a = 1 is the canonical embedding used everywhere in training.

#ifndef SPDADAPT_SIEGEL_EMBEDDING_H_
#define SPDADAPT_SIEGEL_EMBEDDING_H_

#include "spdadapt/spd_geometry.h"

namespace spdadapt {

struct EmbeddingParams {
  double a = 1.0;
};

// Moments as estimated from data. The covariance is symmetric but may be
// singular (e.g. a collapsed batch); no SPD guarantee.
struct EmpiricalMoments {
  Vector mean;
  SymMatrix cov = SymMatrix::Zero(0);

  int dim() const { return static_cast<int>(mean.size()); }
};

// Validated (mu, Sigma) with Sigma in P(n).
class GaussianMoments {
 public:
  // Throws DimensionMismatchError, DomainError (non-finite mean), or the
  // ValidateSpd errors for the covariance.
  static GaussianMoments Create(const Vector& mean, const Matrix& cov,
                                double spd_tol = kDefaultSpdTol);
  static GaussianMoments FromEmpirical(const EmpiricalMoments& m,
                                       double spd_tol = kDefaultSpdTol);

  int dim() const { return static_cast<int>(mean_.size()); }
  const Vector& mean() const { return mean_; }
  const SpdMatrix& cov() const { return cov_; }

 private:
  GaussianMoments(Vector mean, SpdMatrix cov)
      : mean_(std::move(mean)), cov_(std::move(cov)) {}
  Vector mean_;
  SpdMatrix cov_;
};

// Block matrix f_a(mean, cov) with no validation. Used by gradient code and
// the determinant gate, which must handle singular covariances.
Matrix EmbedMatrix(const Vector& mean, const Matrix& cov,
                   const EmbeddingParams& params = {});

// f_a(mu, Sigma) as a validated SPD matrix of dimension dim + 1.
SpdMatrix Embed(const GaussianMoments& m, const EmbeddingParams& params = {});

// Inverse of Embed. Throws NotInImageError if the corner entry differs from
// a by more than 1e-9 or the recovered covariance is not SPD.
GaussianMoments Unembed(const SpdMatrix& p,
                        const EmbeddingParams& params = {});

struct GateResult {
  bool open = false;
  double det = 0.0;
};

// det f_a(mu, Sigma) = a * det(Sigma) by the Schur complement, evaluated via
// a Cholesky factorization of Sigma. open = det > eta. Any numerical failure
// (non-PD Sigma, non-finite input) yields det = 0 and a closed gate.
GateResult SchurGate(const EmpiricalMoments& m, double eta,
                     const EmbeddingParams& params = {});

}  // namespace spdadapt

#endif  // SPDADAPT_SIEGEL_EMBEDDING_H_
