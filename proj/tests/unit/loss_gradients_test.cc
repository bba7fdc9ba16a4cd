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

#include <gtest/gtest.h>

#include "oracles.h"
#include "spdadapt/errors.h"
#include "spdadapt/gradcheck.h"
#include "spdadapt/random.h"

namespace spdadapt {
namespace {

using ::spdadapt::testing::RandomSpd;
using ::spdadapt::testing::RandomSym;
using ::spdadapt::testing::RelErr;

// Rows drawn from N(shift, A A^T) so the batches have distinct moments.
Matrix RandomBatch(CounterRng& rng, int b, int n, double shift) {
  // Mixing by the Cholesky factor of a condition-10 SPD matrix keeps the
  // batch covariance well away from singular.
  const Matrix a = RandomSpd(rng, n, 10.0).llt().matrixL();
  Matrix z(b, n);
  for (int i = 0; i < b; ++i) {
    Vector g(n);
    for (int j = 0; j < n; ++j) g(j) = rng.Normal();
    z.row(i) = (a * g).transpose();
    z.row(i).array() += shift;
  }
  return z;
}

double FdLoss(const Matrix& zs, const Matrix& zt, DistKind kind, bool source,
              int i, int j) {
  Matrix s = zs;
  Matrix t = zt;
  Matrix& target = source ? s : t;
  const double h = 1e-5 * std::max(1.0, std::abs(target(i, j)));
  const double orig = target(i, j);
  target(i, j) = orig + h;
  const double up = DistLossValue(s, t, kind);
  target(i, j) = orig - h;
  const double down = DistLossValue(s, t, kind);
  return (up - down) / (2.0 * h);
}

// Derivative of f along the symmetric coordinate pair (i, j), (j, i).
template <typename F>
double FdSym(const Matrix& p, int i, int j, F&& f) {
  const double h = 1e-5 * std::max(1.0, std::abs(p(i, j)));
  Matrix up = p;
  Matrix down = p;
  up(i, j) += h;
  down(i, j) -= h;
  if (i != j) {
    up(j, i) += h;
    down(j, i) -= h;
  }
  return (f(up) - f(down)) / (2.0 * h);
}

double Contract(const Matrix& g, int i, int j) {
  return i == j ? g(i, i) : g(i, j) + g(j, i);
}

TEST(DistKindTest, NamesRoundTrip) {
  for (DistKind k : kAllDistKinds) EXPECT_EQ(ParseDistKind(DistKindName(k)), k);
  EXPECT_THROW(ParseDistKind("frobenius"), DomainError);
  EXPECT_TRUE(IsGeometric(DistKind::kAirm));
  EXPECT_TRUE(IsGeometric(DistKind::kHilbert));
  EXPECT_FALSE(IsGeometric(DistKind::kLogEuclid));
}

TEST(DistLossTest, OneDimensionalAirm) {
  const double r = 1.0 / std::sqrt(2.0);
  const double e = std::exp(1.0);
  Matrix zs(2, 1);
  Matrix zt(2, 1);
  zs << r, -r;
  zt << e * r, -e * r;
  EXPECT_NEAR(DistLoss(zs, zt, DistKind::kAirm).value, std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(DistLoss(zs, zt, DistKind::kHilbert).value, 2.0, 1e-12);
}

TEST(DistLossTest, BaselinesByHand) {
  Matrix zs(2, 1);
  Matrix zt(2, 1);
  zs << 1, 3;   // mean 2, var 2
  zt << -1, 3;  // mean 1, var 8
  EXPECT_NEAR(DistLoss(zs, zt, DistKind::kMeanEuclid).value, 1.0, 1e-14);
  EXPECT_NEAR(DistLoss(zs, zt, DistKind::kCoralFrob).value, 36.0, 1e-12);
  EXPECT_NEAR(DistLoss(zs, zt, DistKind::kLogEuclid).value,
              std::pow(std::log(4.0), 2), 1e-12);
}

TEST(DistLossTest, ZeroAtCoincidence) {
  CounterRng rng(1, 0);
  const Matrix z = RandomBatch(rng, 40, 3, 0.5);
  for (DistKind k : kAllDistKinds) {
    const LossEval le = DistLoss(z, z, k);
    EXPECT_LE(le.value, 1e-12) << DistKindName(k);
    EXPECT_LE((le.grad_source + le.grad_target).cwiseAbs().maxCoeff(), 1e-12)
        << DistKindName(k);
    EXPECT_TRUE(le.grad_source.allFinite());
  }
}

TEST(DistLossTest, SymmetricInArguments) {
  CounterRng rng(2, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix zs = RandomBatch(rng, 40, 3, 0.0);
    const Matrix zt = RandomBatch(rng, 30, 3, 1.0);
    for (DistKind k : kAllDistKinds) {
      EXPECT_NEAR(DistLoss(zs, zt, k).value, DistLoss(zt, zs, k).value, 1e-10)
          << DistKindName(k);
    }
  }
}

TEST(DistLossTest, GradientShapes) {
  CounterRng rng(3, 0);
  const Matrix zs = RandomBatch(rng, 40, 2, 0.0);
  const Matrix zt = RandomBatch(rng, 25, 2, 1.0);
  for (DistKind k : kAllDistKinds) {
    const LossEval le = DistLoss(FeatureBatch::Create(Domain::kSource, zs),
                                 FeatureBatch::Create(Domain::kTarget, zt), k);
    EXPECT_EQ(le.grad_source.rows(), 40);
    EXPECT_EQ(le.grad_source.cols(), 2);
    EXPECT_EQ(le.grad_target.rows(), 25);
    EXPECT_EQ(le.grad_target.cols(), 2);
  }
}

TEST(DistLossTest, EndToEndFiniteDifferences) {
  for (int n : {2, 3, 5}) {
    for (DistKind k : kAllDistKinds) {
      CounterRng rng(100 + n, static_cast<int>(k));
      const Matrix zs = RandomBatch(rng, 40, n, 0.0);
      const Matrix zt = RandomBatch(rng, 40, n, 0.7);
      const LossEval le = DistLoss(zs, zt, k);
      double worst = 0.0;
      for (int probe = 0; probe < 50; ++probe) {
        const bool source = rng.UniformInt(2) == 0;
        const int i = static_cast<int>(rng.UniformInt(40));
        const int j = static_cast<int>(rng.UniformInt(n));
        const double analytic =
            source ? le.grad_source(i, j) : le.grad_target(i, j);
        worst = std::max(worst,
                         RelErr(analytic, FdLoss(zs, zt, k, source, i, j)));
      }
      EXPECT_LE(worst, 1e-5) << DistKindName(k) << " n=" << n;
    }
  }
}

TEST(DistLossTest, LibraryGradCheckAgrees) {
  GradCheckOptions opts;
  opts.instances = 2;
  for (int n : {2, 3, 5}) {
    opts.dim = n;
    for (DistKind k : kAllDistKinds) {
      const GradCheckResult r = GradCheckDistLoss(k, 7, opts);
      EXPECT_EQ(r.probes, 100);
      EXPECT_LE(r.max_rel_error, 1e-5) << DistKindName(k) << " n=" << n;
    }
  }
}

TEST(DistLossTest, DescentStepReducesGeometricLoss) {
  for (DistKind k : {DistKind::kAirm, DistKind::kHilbert}) {
    int decreased = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      CounterRng rng(seed, 77);
      const int n = 2 + static_cast<int>(seed % 3);
      const Matrix zs = RandomBatch(rng, 40, n, 0.0);
      const Matrix zt = RandomBatch(rng, 40, n, 1.0);
      const LossEval le = DistLoss(zs, zt, k);
      const Matrix stepped = zt - 1e-3 * le.grad_target;
      if (DistLossValue(zs, stepped, k) < le.value) ++decreased;
    }
    EXPECT_EQ(decreased, 100) << DistKindName(k);
  }
}

TEST(DistLossTest, CollapsedBatchClosesGate) {
  CounterRng rng(4, 0);
  const Matrix zs = RandomBatch(rng, 30, 2, 0.0);
  Matrix zt(30, 2);
  zt.setConstant(1.0);
  for (DistKind k :
       {DistKind::kAirm, DistKind::kHilbert, DistKind::kLogEuclid}) {
    EXPECT_THROW(DistLoss(zs, zt, k), GateClosedError) << DistKindName(k);
  }
  EXPECT_NO_THROW(DistLoss(zs, zt, DistKind::kCoralFrob));
  EXPECT_NO_THROW(DistLoss(zs, zt, DistKind::kMeanEuclid));
}

TEST(DistLossTest, DimensionMismatch) {
  EXPECT_THROW(DistLoss(Matrix::Ones(4, 2), Matrix::Ones(4, 3),
                        DistKind::kMeanEuclid),
               DimensionMismatchError);
}

TEST(GradSpdPairTest, IdenticalPairHilbertIsDegenerate) {
  CounterRng rng(5, 0);
  const SpdMatrix p = ValidateSpd(RandomSpd(rng, 3));
  EXPECT_THROW(GradSpdPair(p, p, DistKind::kHilbert), DegenerateSpectrumError);
  const SpdPairGrad g =
      GradSpdPair(p, p, DistKind::kHilbert, DegeneracyPolicy::kResolve);
  EXPECT_LE(g.d_p1.matrix().norm(), 1e-12);
}

TEST(GradSpdPairTest, NearZeroAirm) {
  const SpdMatrix p = SpdMatrix::Identity(3);
  EXPECT_THROW(GradSpdPair(p, p, DistKind::kAirm), NearZeroDistanceError);
  const SpdPairGrad g =
      GradSpdPair(p, p, DistKind::kAirm, DegeneracyPolicy::kResolve);
  EXPECT_EQ(g.d_p1.matrix(), Matrix::Zero(3, 3));
  EXPECT_EQ(g.d_p2.matrix(), Matrix::Zero(3, 3));
}

TEST(GradSpdPairTest, MatchesFiniteDifferences) {
  CounterRng rng(6, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix p1 = RandomSpd(rng, 4, 20.0);
    const Matrix p2 = RandomSpd(rng, 4, 20.0);
    for (DistKind k : {DistKind::kAirm, DistKind::kHilbert}) {
      const auto dist = [k](const Matrix& a, const Matrix& b) {
        return k == DistKind::kAirm ? DistAirm(ValidateSpd(a), ValidateSpd(b))
                                    : DistHilbert(ValidateSpd(a),
                                                  ValidateSpd(b));
      };
      const SpdPairGrad g =
          GradSpdPair(ValidateSpd(p1), ValidateSpd(p2), k);
      double worst = 0.0;
      for (int i = 0; i < 4; ++i) {
        for (int j = i; j < 4; ++j) {
          const double fd1 = FdSym(p1, i, j, [&](const Matrix& m) {
            return dist(m, p2);
          });
          const double fd2 = FdSym(p2, i, j, [&](const Matrix& m) {
            return dist(p1, m);
          });
          worst = std::max(worst, RelErr(Contract(g.d_p1.matrix(), i, j), fd1));
          worst = std::max(worst, RelErr(Contract(g.d_p2.matrix(), i, j), fd2));
        }
      }
      EXPECT_LE(worst, 1e-5) << DistKindName(k) << " trial " << trial;
    }
  }
}

TEST(GradSpdPairTest, HilbertEulerIdentity) {
  CounterRng rng(7, 0);
  for (int trial = 0; trial < 100; ++trial) {
    const SpdMatrix p1 = ValidateSpd(RandomSpd(rng, 5));
    const SpdMatrix p2 = ValidateSpd(RandomSpd(rng, 5));
    const SpdPairGrad g = GradSpdPair(p1, p2, DistKind::kHilbert);
    const double euler = (g.d_p1.matrix().cwiseProduct(p1.matrix())).sum() +
                         (g.d_p2.matrix().cwiseProduct(p2.matrix())).sum();
    EXPECT_NEAR(euler, 0.0, 1e-10);
  }
}

TEST(GradSpdPairTest, RejectsBaselineKinds) {
  const SpdMatrix p = SpdMatrix::Identity(2);
  EXPECT_THROW(GradSpdPair(p, p, DistKind::kCoralFrob), DomainError);
}

TEST(GradEmbedTest, ZeroUpstream) {
  Vector mu(3);
  mu << 1, 2, 3;
  const EmbedGrad g = GradEmbed(mu, SymMatrix::Zero(4));
  EXPECT_EQ(g.dmean, Vector::Zero(3));
  EXPECT_EQ(g.dcov.matrix(), Matrix::Zero(3, 3));
}

TEST(GradEmbedTest, ZeroMeanUsesOnlyOffDiagonalBlock) {
  CounterRng rng(8, 0);
  Matrix u = RandomSym(rng, 4);
  const Vector mu = Vector::Zero(3);
  const EmbedGrad g1 = GradEmbed(mu, SymMatrix::Symmetrize(u));
  u.topLeftCorner(3, 3) = RandomSym(rng, 3);
  u(3, 3) = 17.0;
  const EmbedGrad g2 = GradEmbed(mu, SymMatrix::Symmetrize(u));
  EXPECT_LE((g1.dmean - g2.dmean).norm(), 1e-15);
  EXPECT_LE((g1.dmean - 2.0 * u.topRightCorner(3, 1)).norm(), 1e-14);
}

TEST(GradEmbedTest, MatchesFiniteDifferences) {
  CounterRng rng(9, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + trial % 4;
    const double a = std::exp(rng.Uniform(-1, 1));
    const EmbeddingParams params{a};
    Vector mu(n);
    for (int i = 0; i < n; ++i) mu(i) = rng.Normal();
    const Matrix cov = RandomSpd(rng, n);
    const SymMatrix u = SymMatrix::Symmetrize(RandomSym(rng, n + 1));
    const auto f = [&](const Vector& m, const Matrix& c) {
      return EmbedMatrix(m, c, params).cwiseProduct(u.matrix()).sum();
    };
    const EmbedGrad g = GradEmbed(mu, u, params);
    for (int i = 0; i < n; ++i) {
      const double h = 1e-5;
      Vector up = mu;
      Vector down = mu;
      up(i) += h;
      down(i) -= h;
      const double fd = (f(up, cov) - f(down, cov)) / (2 * h);
      EXPECT_LE(RelErr(g.dmean(i), fd), 1e-6);
    }
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        const double fd =
            FdSym(cov, i, j, [&](const Matrix& c) { return f(mu, c); });
        EXPECT_LE(RelErr(Contract(g.dcov.matrix(), i, j), fd), 1e-6);
      }
    }
  }
}

TEST(GradMomentsTest, MeanOnlyChain) {
  CounterRng rng(10, 0);
  const Matrix z = RandomBatch(rng, 8, 3, 0.0);
  Vector dmean(3);
  dmean << 1, -2, 4;
  const Matrix g = GradMoments(z, dmean, Matrix::Zero(3, 3));
  for (int i = 0; i < 8; ++i) {
    EXPECT_LE((g.row(i).transpose() - dmean / 8.0).norm(), 1e-15);
  }
}

TEST(GradMomentsTest, CovarianceOnlyGradientsSumToZero) {
  CounterRng rng(11, 0);
  const Matrix z = RandomBatch(rng, 12, 3, 2.0);
  const Matrix g = GradMoments(z, Vector::Zero(3), RandomSym(rng, 3));
  EXPECT_LE(g.colwise().sum().norm(), 1e-12);
}

TEST(GradMomentsTest, MatchesFiniteDifferences) {
  CounterRng rng(12, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + trial % 4;
    const int b = 3 + trial;
    const Matrix z = RandomBatch(rng, b, n, 0.3);
    Vector dmean(n);
    for (int i = 0; i < n; ++i) dmean(i) = rng.Normal();
    // Deliberately asymmetric: only the symmetric part matters.
    Matrix dcov(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) dcov(i, j) = rng.Normal();
    }
    const auto f = [&](const Matrix& rows) {
      const EmpiricalMoments m = BatchMoments(rows);
      return dmean.dot(m.mean) + dcov.cwiseProduct(m.cov.matrix()).sum();
    };
    const Matrix g = GradMoments(z, dmean, dcov);
    for (int i = 0; i < b; ++i) {
      for (int j = 0; j < n; ++j) {
        const double h = 1e-5 * std::max(1.0, std::abs(z(i, j)));
        Matrix up = z;
        Matrix down = z;
        up(i, j) += h;
        down(i, j) -= h;
        EXPECT_LE(RelErr(g(i, j), (f(up) - f(down)) / (2 * h)), 1e-6);
      }
    }
  }
}

TEST(LogFrechetAdjointTest, GradientOfSquaredLogDistance) {
  CounterRng rng(13, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + trial % 4;
    const Matrix s = RandomSpd(rng, n, 50.0);
    const Matrix c = RandomSpd(rng, n, 50.0);
    const Matrix log_c = MatrixLog(ValidateSpd(c)).matrix();
    const auto f = [&](const Matrix& m) {
      return (MatrixLog(ValidateSpd(m)).matrix() - log_c).squaredNorm();
    };
    const SymMatrix d = SymMatrix::Symmetrize(
        MatrixLog(ValidateSpd(s)).matrix() - log_c);
    const Matrix g = LogFrechetAdjoint(ValidateSpd(s), d).matrix();
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        EXPECT_LE(RelErr(Contract(g, i, j), FdSym(s, i, j, f)), 1e-6);
      }
    }
  }
}

TEST(LogFrechetAdjointTest, RepeatedEigenvalues) {
  // At S = 2I the derivative of log is I / 2.
  const SpdMatrix s = ValidateSpd(2.0 * Matrix::Identity(3, 3));
  CounterRng rng(14, 0);
  const SymMatrix d = SymMatrix::Symmetrize(RandomSym(rng, 3));
  EXPECT_LE((LogFrechetAdjoint(s, d).matrix() - d.matrix()).norm(), 1e-12);
}

}  // namespace
}  // namespace spdadapt
