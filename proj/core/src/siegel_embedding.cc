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

#include "spdadapt/siegel_embedding.h"

#include <cmath>
#include <string>

#include <Eigen/Cholesky>

#include "spdadapt/errors.h"

namespace spdadapt {
namespace {

constexpr double kCornerTol = 1e-9;

void RequirePositiveA(const EmbeddingParams& params) {
  if (!(params.a > 0.0) || !std::isfinite(params.a)) {
    throw DomainError("embedding parameter a must be positive, got " +
                      std::to_string(params.a));
  }
}

}  // namespace

GaussianMoments GaussianMoments::Create(const Vector& mean, const Matrix& cov,
                                        double spd_tol) {
  if (cov.rows() != mean.size()) {
    throw DimensionMismatchError("mean has length " +
                                 std::to_string(mean.size()) +
                                 " but covariance is " +
                                 std::to_string(cov.rows()) + "x" +
                                 std::to_string(cov.cols()));
  }
  if (!mean.allFinite()) throw DomainError("mean has non-finite entries");
  return GaussianMoments(mean, ValidateSpd(cov, spd_tol));
}

GaussianMoments GaussianMoments::FromEmpirical(const EmpiricalMoments& m,
                                               double spd_tol) {
  return Create(m.mean, m.cov.matrix(), spd_tol);
}

Matrix EmbedMatrix(const Vector& mean, const Matrix& cov,
                   const EmbeddingParams& params) {
  RequirePositiveA(params);
  const Eigen::Index n = mean.size();
  const double a = params.a;
  Matrix p(n + 1, n + 1);
  p.topLeftCorner(n, n) = cov + a * mean * mean.transpose();
  p.topRightCorner(n, 1) = a * mean;
  p.bottomLeftCorner(1, n) = a * mean.transpose();
  p(n, n) = a;
  return p;
}

SpdMatrix Embed(const GaussianMoments& m, const EmbeddingParams& params) {
  Matrix p = EmbedMatrix(m.mean(), m.cov().matrix(), params);
  return ValidateSpd(0.5 * (p + p.transpose()));
}

GaussianMoments Unembed(const SpdMatrix& p, const EmbeddingParams& params) {
  RequirePositiveA(params);
  const int n = p.dim() - 1;
  if (n < 1) throw NotInImageError("embedded matrix must be at least 2x2");
  const double a = params.a;
  const double corner = p(n, n);
  if (std::abs(corner - a) > kCornerTol) {
    throw NotInImageError("corner entry " + std::to_string(corner) +
                          " differs from a = " + std::to_string(a));
  }
  const Vector mean = p.matrix().topRightCorner(n, 1) / a;
  Matrix cov = p.matrix().topLeftCorner(n, n) - a * mean * mean.transpose();
  cov = 0.5 * (cov + cov.transpose());
  try {
    return GaussianMoments::Create(mean, cov);
  } catch (const NotPositiveDefiniteError& e) {
    throw NotInImageError(std::string("recovered covariance: ") + e.what());
  } catch (const NotSymmetricError& e) {
    throw NotInImageError(std::string("recovered covariance: ") + e.what());
  }
}

GateResult SchurGate(const EmpiricalMoments& m, double eta,
                     const EmbeddingParams& params) {
  GateResult result;
  if (!(params.a > 0.0) || m.cov.dim() != m.dim() || m.dim() == 0) {
    return result;
  }
  const Matrix& cov = m.cov.matrix();
  if (!cov.allFinite() || !m.mean.allFinite()) return result;
  Eigen::LLT<Matrix> llt(cov);
  if (llt.info() != Eigen::Success) return result;
  const Vector diag = llt.matrixLLT().diagonal();
  double det = params.a;
  for (double d : diag) det *= d * d;
  if (!std::isfinite(det)) return result;
  result.det = det;
  result.open = det > eta;
  return result;
}

}  // namespace spdadapt
