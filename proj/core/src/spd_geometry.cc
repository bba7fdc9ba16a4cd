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

#include "spdadapt/spd_geometry.h"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "spdadapt/errors.h"

namespace spdadapt {
namespace {

void RequireSquare(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw DimensionMismatchError("expected a non-empty square matrix, got " +
                                 std::to_string(m.rows()) + "x" +
                                 std::to_string(m.cols()));
  }
}

void RequireSameDim(int a, int b) {
  if (a != b) {
    throw DimensionMismatchError("dimension mismatch: " + std::to_string(a) +
                                 " vs " + std::to_string(b));
  }
}

double Asymmetry(const Matrix& m) {
  return (m - m.transpose()).cwiseAbs().maxCoeff();
}

// Whitens P2 by the Cholesky factor of P1: returns L^{-1} P2 L^{-T} and L.
Matrix WhitenedPencil(const SpdMatrix& p1, const SpdMatrix& p2,
                      Eigen::LLT<Matrix>* llt) {
  RequireSameDim(p1.dim(), p2.dim());
  llt->compute(p1.matrix());
  if (llt->info() != Eigen::Success) {
    throw NotPositiveDefiniteError(EigvalsSym(p1.sym())(0));
  }
  const auto l = llt->matrixL();
  Matrix c = l.solve(p2.matrix());
  c = l.solve(c.transpose()).eval();
  // c is symmetric in exact arithmetic.
  return 0.5 * (c + c.transpose());
}

}  // namespace

SymMatrix SymMatrix::FromMatrix(const Matrix& m) {
  RequireSquare(m);
  const double scale = m.cwiseAbs().maxCoeff();
  const double asym = Asymmetry(m);
  if (asym > kSymmetryTol * scale) throw NotSymmetricError(asym);
  return Symmetrize(m);
}

SymMatrix SymMatrix::Symmetrize(const Matrix& m) {
  RequireSquare(m);
  return SymMatrix(0.5 * (m + m.transpose()));
}

SymMatrix SymMatrix::Zero(int dim) {
  return SymMatrix(Matrix::Zero(dim, dim));
}

SpdMatrix SpdMatrix::Identity(int dim) {
  return SpdMatrix(Matrix::Identity(dim, dim));
}

SpdMatrix ValidateSpd(const Matrix& m, double spd_tol) {
  const SymMatrix sym = SymMatrix::FromMatrix(m);
  const int n = sym.dim();
  const Vector eig = EigvalsSym(sym);
  const double lambda_min = eig(0);
  const double threshold = std::max(0.0, spd_tol * sym.matrix().trace() / n);
  if (!(lambda_min > threshold)) throw NotPositiveDefiniteError(lambda_min);
  return SpdMatrix(sym.matrix());
}

SymEigen EigSym(const Matrix& m) {
  RequireSquare(m);
  Eigen::SelfAdjointEigenSolver<Matrix> solver;
  solver.compute(m, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceError("symmetric eigensolver did not converge within " +
                           std::to_string(kEigenIterationsPerValue) +
                           " sweeps per eigenvalue");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

Vector EigvalsSym(const SymMatrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver;
  solver.compute(m.matrix(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceError("symmetric eigensolver did not converge within " +
                           std::to_string(kEigenIterationsPerValue) +
                           " sweeps per eigenvalue");
  }
  return solver.eigenvalues();
}

PencilEigen PencilEig(const SpdMatrix& p1, const SpdMatrix& p2) {
  Eigen::LLT<Matrix> llt;
  const Matrix c = WhitenedPencil(p1, p2, &llt);
  SymEigen eig = EigSym(c);
  // v = L^{-T} w gives v^T P1 v = w^T w = 1.
  Matrix v = llt.matrixU().solve(eig.vectors);
  return {std::move(eig.values), std::move(v)};
}

Vector PencilEigenvalues(const SpdMatrix& p1, const SpdMatrix& p2) {
  Eigen::LLT<Matrix> llt;
  return EigvalsSym(SymMatrix::Symmetrize(WhitenedPencil(p1, p2, &llt)));
}

SymMatrix MatrixLog(const SpdMatrix& p) {
  const SymEigen eig = EigSym(p.matrix());
  const Vector logs = eig.values.array().log().matrix();
  return SymMatrix::Symmetrize(eig.vectors * logs.asDiagonal() *
                               eig.vectors.transpose());
}

SpdMatrix MatrixExp(const SymMatrix& v) {
  const SymEigen eig = EigSym(v.matrix());
  const Vector exps = eig.values.array().exp().matrix();
  const Matrix e = eig.vectors * exps.asDiagonal() * eig.vectors.transpose();
  return ValidateSpd(0.5 * (e + e.transpose()), 0.0);
}

double DistAirm(const SpdMatrix& p1, const SpdMatrix& p2) {
  const Vector lambda = PencilEigenvalues(p1, p2);
  double sum = 0.0;
  for (double l : lambda) {
    const double log_l = std::log(l);
    sum += log_l * log_l;
  }
  return std::sqrt(0.5 * sum);
}

double DistHilbert(const SpdMatrix& p1, const SpdMatrix& p2) {
  const Vector lambda = PencilEigenvalues(p1, p2);
  const double d = std::log(lambda(lambda.size() - 1)) - std::log(lambda(0));
  return std::max(0.0, d);
}

double DistLogEuclid(const SpdMatrix& p1, const SpdMatrix& p2) {
  RequireSameDim(p1.dim(), p2.dim());
  return (MatrixLog(p1).matrix() - MatrixLog(p2).matrix()).norm();
}

double InnerAffine(const SpdMatrix& p, const SymMatrix& v1,
                   const SymMatrix& v2) {
  RequireSameDim(p.dim(), v1.dim());
  RequireSameDim(p.dim(), v2.dim());
  Eigen::LLT<Matrix> llt(p.matrix());
  const Matrix a = llt.solve(v1.matrix());
  const Matrix b = llt.solve(v2.matrix());
  return (a.cwiseProduct(b.transpose())).sum();
}

}  // namespace spdadapt
