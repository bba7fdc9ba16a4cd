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

#ifndef SPDADAPT_MOMENT_ESTIMATION_H_
#define SPDADAPT_MOMENT_ESTIMATION_H_

#include <iosfwd>
#include <string>

#include "spdadapt/siegel_embedding.h"
#include "spdadapt/spd_geometry.h"

namespace spdadapt {

enum class Domain { kSource, kTarget };

const char* DomainName(Domain d);

// b x n matrix of encoded samples, one row per sample.
class FeatureBatch {
 public:
  // Throws BatchTooSmallError (b < 2) or DomainError (non-finite entries).
  static FeatureBatch Create(Domain domain, Matrix data);

  Domain domain() const { return domain_; }
  const Matrix& data() const { return data_; }
  int rows() const { return static_cast<int>(data_.rows()); }
  int dim() const { return static_cast<int>(data_.cols()); }

 private:
  FeatureBatch(Domain domain, Matrix data)
      : domain_(domain), data_(std::move(data)) {}
  Domain domain_;
  Matrix data_;
};

// Row mean and the unbiased (1 / (b - 1)) covariance, two-pass, exactly
// symmetric. Throws BatchTooSmallError when b < 2.
EmpiricalMoments BatchMoments(const FeatureBatch& batch);
EmpiricalMoments BatchMoments(const Matrix& rows);

struct RegimeCheck {
  bool ok = false;
  double ratio = 0.0;  // b / n
};

// The batch must hold at least ten samples per embedding dimension.
RegimeCheck CheckRegime(int batch_size, int dim);

// CSV with a `domain,b,n` header line, one metadata line, then b rows of n
// comma-separated values.
void WriteFeatureBatchCsv(std::ostream& out, const FeatureBatch& batch);
FeatureBatch ReadFeatureBatchCsv(std::istream& in,
                                 const std::string& source = "<stream>");

}  // namespace spdadapt

#endif  // SPDADAPT_MOMENT_ESTIMATION_H_
