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

// Linear algebra and Riemannian distances on the manifold of symmetric
// positive-definite (SPD) matrices.
//
// All eigenvalue work goes through a symmetric solver (Householder
// tridiagonalization followed by implicit symmetric QR). Generalized
// eigenvalues of a pair (P1, P2), i.e. the spectrum of P1^{-1} P2, are
// obtained from the congruent symmetric matrix L^{-1} P2 L^{-T} where
// P1 = L L^T, so no nonsymmetric product is ever formed.

#ifndef SPDADAPT_SPD_GEOMETRY_H_
#define SPDADAPT_SPD_GEOMETRY_H_

#include <Eigen/Core>

namespace spdadapt {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Relative positive-definiteness threshold: a matrix is accepted as SPD when
// lambda_min > kDefaultSpdTol * trace / dim.
inline constexpr double kDefaultSpdTol = 1e-10;

// Symmetry tolerance relative to max |M_ij|.
inline constexpr double kSymmetryTol = 1e-12;

// A real symmetric matrix (tangent vector on the SPD manifold).
class SymMatrix {
 public:
  // Checks symmetry to kSymmetryTol, then stores (M + M^T) / 2.
  // Throws NotSymmetricError or DimensionMismatchError (non-square).
  static SymMatrix FromMatrix(const Matrix& m);
  // Stores (M + M^T) / 2 without any tolerance check. M must be square.
  static SymMatrix Symmetrize(const Matrix& m);
  static SymMatrix Zero(int dim);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }

 private:
  explicit SymMatrix(Matrix m) : m_(std::move(m)) {}
  Matrix m_;
};

// A validated element of P(n). Only ValidateSpd creates one.
class SpdMatrix {
 public:
  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }
  SymMatrix sym() const { return SymMatrix::Symmetrize(m_); }

  static SpdMatrix Identity(int dim);

 private:
  friend SpdMatrix ValidateSpd(const Matrix& m, double spd_tol);
  explicit SpdMatrix(Matrix m) : m_(std::move(m)) {}
  Matrix m_;
};

// Returns an SpdMatrix iff `m` is square, symmetric within kSymmetryTol and
// lambda_min((M + M^T)/2) > spd_tol * trace / dim.
// Throws DimensionMismatchError, NotSymmetricError, NotPositiveDefiniteError.
SpdMatrix ValidateSpd(const Matrix& m, double spd_tol = kDefaultSpdTol);

struct SymEigen {
  Vector values;   // ascending
  Matrix vectors;  // orthonormal columns, vectors.col(i) pairs values(i)
};

// Implicit QR sweep cap per eigenvalue (the solver's fixed limit) before
// ConvergenceError.
inline constexpr int kEigenIterationsPerValue = 30;

// Full eigendecomposition of a symmetric matrix. Only the lower triangle is
// read. Throws ConvergenceError when the QR iteration cap is exceeded.
SymEigen EigSym(const Matrix& m);

// Ascending eigenvalues of a symmetric matrix.
Vector EigvalsSym(const SymMatrix& m);

// Generalized eigenpairs P2 v = lambda P1 v, ascending in lambda, with
// eigenvectors normalized so that V^T P1 V = I.
struct PencilEigen {
  Vector values;
  Matrix vectors;
};
PencilEigen PencilEig(const SpdMatrix& p1, const SpdMatrix& p2);

// Eigenvalues of P1^{-1} P2, ascending.
Vector PencilEigenvalues(const SpdMatrix& p1, const SpdMatrix& p2);

SymMatrix MatrixLog(const SpdMatrix& p);
// exp of a symmetric matrix via its eigendecomposition; the result is SPD.
SpdMatrix MatrixExp(const SymMatrix& v);

// Affine-invariant distance sqrt(1/2 * sum_i log^2 lambda_i(P1^{-1} P2)).
double DistAirm(const SpdMatrix& p1, const SpdMatrix& p2);

// Hilbert projective distance log(lambda_max / lambda_min) of P1^{-1} P2.
double DistHilbert(const SpdMatrix& p1, const SpdMatrix& p2);

// Log-Euclidean distance ||Log(P1) - Log(P2)||_F.
double DistLogEuclid(const SpdMatrix& p1, const SpdMatrix& p2);

// Affine-invariant metric tr(P^{-1} V1 P^{-1} V2) at base point P.
double InnerAffine(const SpdMatrix& p, const SymMatrix& v1,
                   const SymMatrix& v2);

}  // namespace spdadapt

#endif  // SPDADAPT_SPD_GEOMETRY_H_
