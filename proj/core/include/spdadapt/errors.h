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

#ifndef SPDADAPT_ERRORS_H_
#define SPDADAPT_ERRORS_H_

#include <stdexcept>
#include <string>

namespace spdadapt {

// Base class for every error raised by the library. Callers that only need
// to know "something numerical went wrong" can catch this one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotSymmetricError : public Error {
 public:
  explicit NotSymmetricError(double asymmetry)
      : Error("matrix is not symmetric (max |M - M^T| = " +
              std::to_string(asymmetry) + ")"),
        asymmetry_(asymmetry) {}
  double asymmetry() const { return asymmetry_; }

 private:
  double asymmetry_;
};

class NotPositiveDefiniteError : public Error {
 public:
  explicit NotPositiveDefiniteError(double lambda_min)
      : Error("matrix is not positive definite (lambda_min = " +
              std::to_string(lambda_min) + ")"),
        lambda_min_(lambda_min) {}
  double lambda_min() const { return lambda_min_; }

 private:
  double lambda_min_;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatchError : public Error {
 public:
  using Error::Error;
};

// Raised by Unembed when the matrix is not f_a(mu, Sigma) for any valid
// moments.
class NotInImageError : public Error {
 public:
  using Error::Error;
};

class BatchTooSmallError : public Error {
 public:
  explicit BatchTooSmallError(int rows)
      : Error("feature batch needs at least 2 rows, got " +
              std::to_string(rows)) {}
};

// The embedded source or target matrix is not SPD; the adaptation term cannot
// be evaluated for this step.
class GateClosedError : public Error {
 public:
  using Error::Error;
};

class DegenerateSpectrumError : public Error {
 public:
  using Error::Error;
};

class NearZeroDistanceError : public Error {
 public:
  using Error::Error;
};

class SupportMismatchError : public Error {
 public:
  using Error::Error;
};

class NonInteriorPointError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class RegimeViolationError : public Error {
 public:
  RegimeViolationError(int batch, int dim)
      : Error("batch size " + std::to_string(batch) +
              " is below 10x the embedding dimension " + std::to_string(dim)),
        batch_(batch),
        dim_(dim) {}
  int batch() const { return batch_; }
  int dim() const { return dim_; }

 private:
  int batch_;
  int dim_;
};

class NonFiniteLossError : public Error {
 public:
  NonFiniteLossError(int epoch, int step, const std::string& what)
      : Error("non-finite " + what + " at epoch " + std::to_string(epoch) +
              ", step " + std::to_string(step)),
        epoch_(epoch),
        step_(step) {}
  int epoch() const { return epoch_; }
  int step() const { return step_; }

 private:
  int epoch_;
  int step_;
};

// Config and file parsing failures. `line` is 1-based, 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& source, int line, const std::string& message)
      : Error(source + (line > 0 ? ":" + std::to_string(line) : "") + ": " +
              message),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace spdadapt

#endif  // SPDADAPT_ERRORS_H_
