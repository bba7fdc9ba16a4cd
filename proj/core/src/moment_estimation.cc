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

#include "spdadapt/moment_estimation.h"

#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "spdadapt/errors.h"
#include "spdadapt/matrix_io.h"

namespace spdadapt {
namespace {

std::vector<std::string> SplitCsv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

const char* DomainName(Domain d) {
  return d == Domain::kSource ? "source" : "target";
}

FeatureBatch FeatureBatch::Create(Domain domain, Matrix data) {
  if (data.rows() < 2) throw BatchTooSmallError(static_cast<int>(data.rows()));
  if (!data.allFinite()) throw DomainError("feature batch has non-finite entries");
  return FeatureBatch(domain, std::move(data));
}

EmpiricalMoments BatchMoments(const FeatureBatch& batch) {
  return BatchMoments(batch.data());
}

EmpiricalMoments BatchMoments(const Matrix& rows) {
  const Eigen::Index b = rows.rows();
  if (b < 2) throw BatchTooSmallError(static_cast<int>(b));
  EmpiricalMoments m;
  m.mean = rows.colwise().mean().transpose();
  const Matrix centered = rows.rowwise() - m.mean.transpose();
  const Matrix cov =
      (centered.transpose() * centered) / static_cast<double>(b - 1);
  m.cov = SymMatrix::Symmetrize(cov);
  return m;
}

RegimeCheck CheckRegime(int batch_size, int dim) {
  RegimeCheck r;
  if (batch_size <= 0 || dim <= 0) return r;
  r.ratio = static_cast<double>(batch_size) / dim;
  r.ok = batch_size >= 10 * dim;
  return r;
}

void WriteFeatureBatchCsv(std::ostream& out, const FeatureBatch& batch) {
  out << "domain,b,n\n"
      << DomainName(batch.domain()) << ',' << batch.rows() << ','
      << batch.dim() << "\n";
  const Matrix& d = batch.data();
  for (Eigen::Index i = 0; i < d.rows(); ++i) {
    for (Eigen::Index j = 0; j < d.cols(); ++j) {
      if (j > 0) out << ',';
      out << FormatDouble(d(i, j));
    }
    out << "\n";
  }
}

FeatureBatch ReadFeatureBatchCsv(std::istream& in, const std::string& source) {
  std::string line;
  int line_no = 0;
  if (!std::getline(in, line)) throw ParseError(source, 1, "empty file");
  ++line_no;
  if (Trim(line) != "domain,b,n") {
    throw ParseError(source, line_no, "expected header 'domain,b,n'");
  }
  if (!std::getline(in, line)) throw ParseError(source, 2, "missing metadata");
  ++line_no;
  const auto meta = SplitCsv(Trim(line));
  if (meta.size() != 3) {
    throw ParseError(source, line_no, "metadata needs domain,b,n");
  }
  Domain domain;
  if (meta[0] == "source") {
    domain = Domain::kSource;
  } else if (meta[0] == "target") {
    domain = Domain::kTarget;
  } else {
    throw ParseError(source, line_no, "domain must be source or target");
  }
  int b = 0;
  int n = 0;
  try {
    b = std::stoi(meta[1]);
    n = std::stoi(meta[2]);
  } catch (const std::exception&) {
    throw ParseError(source, line_no, "b and n must be integers");
  }
  if (b < 0 || n <= 0) throw ParseError(source, line_no, "invalid b or n");
  Matrix data(b, n);
  for (int i = 0; i < b; ++i) {
    if (!std::getline(in, line)) {
      throw ParseError(source, line_no + 1, "expected " + std::to_string(b) +
                                                " data rows");
    }
    ++line_no;
    const auto fields = SplitCsv(Trim(line));
    if (static_cast<int>(fields.size()) != n) {
      throw ParseError(source, line_no,
                       "expected " + std::to_string(n) + " values");
    }
    for (int j = 0; j < n; ++j) {
      try {
        size_t used = 0;
        data(i, j) = std::stod(fields[j], &used);
        if (used != fields[j].size()) throw std::invalid_argument(fields[j]);
      } catch (const std::exception&) {
        throw ParseError(source, line_no, "not a number: '" + fields[j] + "'");
      }
    }
  }
  return FeatureBatch::Create(domain, std::move(data));
}

}  // namespace spdadapt
