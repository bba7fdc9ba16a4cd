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

#include "spdadapt/loss_gradients.h"

#include <cmath>
#include <string>

#include "spdadapt/errors.h"

namespace spdadapt {
namespace {

struct PairValueGrad {
  double value = 0.0;
  SpdPairGrad grad;
};

// Mean of v_i v_i^T over the index range [first, last).
Matrix AverageOuter(const Matrix& v, int first, int last) {
  Matrix out = Matrix::Zero(v.rows(), v.rows());
  for (int i = first; i < last; ++i) out += v.col(i) * v.col(i).transpose();
  return out / static_cast<double>(last - first);
}

// For a generalized eigenpair P2 v = lambda P1 v with v^T P1 v = 1:
//   d lambda / d P2 = v v^T,   d lambda / d P1 = -lambda v v^T.
PairValueGrad AirmValueGrad(const SpdMatrix& p1, const SpdMatrix& p2,
                            DegeneracyPolicy policy) {
  const PencilEigen eig = PencilEig(p1, p2);
  const int n = static_cast<int>(eig.values.size());
  Vector logs(n);
  for (int i = 0; i < n; ++i) logs(i) = std::log(eig.values(i));
  PairValueGrad out;
  out.value = std::sqrt(0.5 * logs.squaredNorm());
  if (out.value < kDistEps) {
    if (policy == DegeneracyPolicy::kThrow) {
      throw NearZeroDistanceError("affine-invariant distance " +
                                  std::to_string(out.value) +
                                  " is below the gradient cutoff");
    }
    out.grad = {SymMatrix::Zero(n), SymMatrix::Zero(n)};
    return out;
  }
  // d value / d lambda_i = log(lambda_i) / (2 d lambda_i).
  const Vector w1 = -logs / (2.0 * out.value);
  Vector w2(n);
  for (int i = 0; i < n; ++i) w2(i) = -w1(i) / eig.values(i);
  const Matrix& v = eig.vectors;
  out.grad.d_p1 = SymMatrix::Symmetrize(v * w1.asDiagonal() * v.transpose());
  out.grad.d_p2 = SymMatrix::Symmetrize(v * w2.asDiagonal() * v.transpose());
  return out;
}

PairValueGrad HilbertValueGrad(const SpdMatrix& p1, const SpdMatrix& p2,
                               DegeneracyPolicy policy) {
  const PencilEigen eig = PencilEig(p1, p2);
  const int n = static_cast<int>(eig.values.size());
  const double lmin = eig.values(0);
  const double lmax = eig.values(n - 1);
  PairValueGrad out;
  out.value = std::max(0.0, std::log(lmax) - std::log(lmin));

  int min_end = 1;
  while (min_end < n && eig.values(min_end) - lmin <= kDegenerateGap * lmin) {
    ++min_end;
  }
  int max_begin = n - 1;
  while (max_begin > 0 &&
         lmax - eig.values(max_begin - 1) <= kDegenerateGap * lmax) {
    --max_begin;
  }
  const bool degenerate = min_end > 1 || max_begin < n - 1;
  if (degenerate && policy == DegeneracyPolicy::kThrow) {
    throw DegenerateSpectrumError(
        "extreme generalized eigenvalue is repeated; Hilbert distance is not "
        "differentiable here");
  }
  const Matrix vmax = AverageOuter(eig.vectors, max_begin, n);
  const Matrix vmin = AverageOuter(eig.vectors, 0, min_end);
  // d = log lambda_max - log lambda_min.
  out.grad.d_p1 = SymMatrix::Symmetrize(vmin - vmax);
  out.grad.d_p2 = SymMatrix::Symmetrize(vmax / lmax - vmin / lmin);
  return out;
}

PairValueGrad PairValueAndGrad(const SpdMatrix& p1, const SpdMatrix& p2,
                               DistKind kind, DegeneracyPolicy policy) {
  switch (kind) {
    case DistKind::kAirm:
      return AirmValueGrad(p1, p2, policy);
    case DistKind::kHilbert:
      return HilbertValueGrad(p1, p2, policy);
    default:
      throw DomainError(std::string("not an SPD-pair distance: ") +
                        DistKindName(kind));
  }
}

SpdMatrix RequireSpd(const Matrix& m, const char* what) {
  try {
    return ValidateSpd(0.5 * (m + m.transpose()));
  } catch (const NotPositiveDefiniteError& e) {
    throw GateClosedError(std::string(what) + ": " + e.what());
  } catch (const ConvergenceError& e) {
    throw GateClosedError(std::string(what) + ": " + e.what());
  }
}

void RequireCompatible(const Matrix& zs, const Matrix& zt) {
  if (zs.cols() != zt.cols()) {
    throw DimensionMismatchError(
        "source and target batches have different feature dimensions (" +
        std::to_string(zs.cols()) + " vs " + std::to_string(zt.cols()) + ")");
  }
}

// Shared forward/backward. grads may be null for a value-only evaluation.
double Evaluate(const Matrix& zs, const Matrix& zt, DistKind kind,
                const EmbeddingParams& params, LossEval* grads) {
  RequireCompatible(zs, zt);
  const EmpiricalMoments ms = BatchMoments(zs);
  const EmpiricalMoments mt = BatchMoments(zt);
  const int n = ms.dim();

  Vector dmean_s = Vector::Zero(n);
  Vector dmean_t = Vector::Zero(n);
  Matrix dcov_s = Matrix::Zero(n, n);
  Matrix dcov_t = Matrix::Zero(n, n);
  double value = 0.0;

  switch (kind) {
    case DistKind::kAirm:
    case DistKind::kHilbert: {
      const SpdMatrix ps =
          RequireSpd(EmbedMatrix(ms.mean, ms.cov.matrix(), params),
                     "embedded source moments");
      const SpdMatrix pt =
          RequireSpd(EmbedMatrix(mt.mean, mt.cov.matrix(), params),
                     "embedded target moments");
      if (grads == nullptr) {
        return kind == DistKind::kAirm ? DistAirm(ps, pt)
                                       : DistHilbert(ps, pt);
      }
      const PairValueGrad pg =
          PairValueAndGrad(ps, pt, kind, DegeneracyPolicy::kResolve);
      value = pg.value;
      const EmbedGrad es = GradEmbed(ms.mean, pg.grad.d_p1, params);
      const EmbedGrad et = GradEmbed(mt.mean, pg.grad.d_p2, params);
      dmean_s = es.dmean;
      dcov_s = es.dcov.matrix();
      dmean_t = et.dmean;
      dcov_t = et.dcov.matrix();
      break;
    }
    case DistKind::kMeanEuclid: {
      const Vector diff = ms.mean - mt.mean;
      value = diff.squaredNorm();
      dmean_s = 2.0 * diff;
      dmean_t = -2.0 * diff;
      break;
    }
    case DistKind::kCoralFrob: {
      const Matrix diff = ms.cov.matrix() - mt.cov.matrix();
      value = diff.squaredNorm();
      dcov_s = 2.0 * diff;
      dcov_t = -2.0 * diff;
      break;
    }
    case DistKind::kLogEuclid: {
      const SpdMatrix cs = RequireSpd(ms.cov.matrix(), "source covariance");
      const SpdMatrix ct = RequireSpd(mt.cov.matrix(), "target covariance");
      const Matrix diff = MatrixLog(cs).matrix() - MatrixLog(ct).matrix();
      value = diff.squaredNorm();
      if (grads == nullptr) return value;
      const SymMatrix d = SymMatrix::Symmetrize(diff);
      dcov_s = LogFrechetAdjoint(cs, d).matrix();
      dcov_t = -LogFrechetAdjoint(ct, d).matrix();
      break;
    }
  }
  if (grads != nullptr) {
    grads->value = value;
    grads->grad_source = GradMoments(zs, dmean_s, dcov_s);
    grads->grad_target = GradMoments(zt, dmean_t, dcov_t);
  }
  return value;
}

}  // namespace

const char* DistKindName(DistKind kind) {
  switch (kind) {
    case DistKind::kAirm:
      return "airm";
    case DistKind::kHilbert:
      return "hilbert";
    case DistKind::kMeanEuclid:
      return "mean_euclid";
    case DistKind::kCoralFrob:
      return "coral_frob";
    case DistKind::kLogEuclid:
      return "log_euclid";
  }
  return "?";
}

DistKind ParseDistKind(const std::string& name) {
  for (DistKind k : kAllDistKinds) {
    if (name == DistKindName(k)) return k;
  }
  throw DomainError("unknown distance kind '" + name +
                    "' (expected airm, hilbert, mean_euclid, coral_frob or "
                    "log_euclid)");
}

bool IsGeometric(DistKind kind) {
  return kind == DistKind::kAirm || kind == DistKind::kHilbert;
}

SpdPairGrad GradSpdPair(const SpdMatrix& p1, const SpdMatrix& p2,
                        DistKind kind, DegeneracyPolicy policy) {
  return PairValueAndGrad(p1, p2, kind, policy).grad;
}

EmbedGrad GradEmbed(const Vector& mean, const SymMatrix& upstream,
                    const EmbeddingParams& params) {
  const int n = static_cast<int>(mean.size());
  if (upstream.dim() != n + 1) {
    throw DimensionMismatchError("upstream gradient must be (n+1)x(n+1)");
  }
  const double a = params.a;
  const Matrix& g = upstream.matrix();
  const Matrix top_left = g.topLeftCorner(n, n);
  EmbedGrad out;
  out.dcov = SymMatrix::Symmetrize(top_left);
  out.dmean = a * (top_left + top_left.transpose()) * mean +
              a * (g.topRightCorner(n, 1) + g.bottomLeftCorner(1, n).transpose());
  return out;
}

Matrix GradMoments(const Matrix& rows, const Vector& dmean,
                   const Matrix& dcov) {
  const Eigen::Index b = rows.rows();
  if (b < 2) throw BatchTooSmallError(static_cast<int>(b));
  if (dmean.size() != rows.cols() || dcov.rows() != rows.cols() ||
      dcov.cols() != rows.cols()) {
    throw DimensionMismatchError("moment gradients do not match batch width");
  }
  const Vector mean = rows.colwise().mean().transpose();
  const Matrix centered = rows.rowwise() - mean.transpose();
  const Matrix sym = 0.5 * (dcov + dcov.transpose());
  Matrix out = centered * sym * (2.0 / static_cast<double>(b - 1));
  out.rowwise() += (dmean / static_cast<double>(b)).transpose();
  return out;
}

SymMatrix LogFrechetAdjoint(const SpdMatrix& s, const SymMatrix& direction) {
  const SymEigen eig = EigSym(s.matrix());
  const int n = s.dim();
  // Divided differences of log on the spectrum (Daleckii-Krein).
  Matrix f(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double li = eig.values(i);
      const double lj = eig.values(j);
      if (std::abs(li - lj) <= 1e-12 * std::max(li, lj)) {
        f(i, j) = 2.0 / (li + lj);
      } else {
        f(i, j) = (std::log(li) - std::log(lj)) / (li - lj);
      }
    }
  }
  const Matrix& q = eig.vectors;
  const Matrix inner = (q.transpose() * direction.matrix() * q).cwiseProduct(f);
  return SymMatrix::Symmetrize(2.0 * q * inner * q.transpose());
}

LossEval DistLoss(const Matrix& zs, const Matrix& zt, DistKind kind,
                  const EmbeddingParams& params) {
  LossEval out;
  Evaluate(zs, zt, kind, params, &out);
  return out;
}

LossEval DistLoss(const FeatureBatch& zs, const FeatureBatch& zt,
                  DistKind kind, const EmbeddingParams& params) {
  return DistLoss(zs.data(), zt.data(), kind, params);
}

double DistLossValue(const Matrix& zs, const Matrix& zt, DistKind kind,
                     const EmbeddingParams& params) {
  return Evaluate(zs, zt, kind, params, nullptr);
}

}  // namespace spdadapt
