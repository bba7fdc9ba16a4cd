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

#include "spdadapt/matrix_io.h"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "spdadapt/errors.h"

namespace spdadapt {

std::string FormatDouble(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.*g", kPrintDigits, x);
  return buf;
}

void WriteMatrix(std::ostream& out, const Matrix& m) {
  out << "dim=" << m.rows() << "\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ' ';
      out << FormatDouble(m(i, j));
    }
    out << "\n";
  }
}

Matrix ReadMatrix(std::istream& in, const std::string& source) {
  std::string line;
  int line_no = 0;
  int dim = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (line.rfind("dim=", 0) != 0) {
      throw ParseError(source, line_no, "expected header 'dim=<n>'");
    }
    try {
      size_t used = 0;
      dim = std::stoi(line.substr(4), &used);
    } catch (const std::exception&) {
      throw ParseError(source, line_no, "bad dimension in header");
    }
    break;
  }
  if (dim <= 0) throw ParseError(source, line_no, "missing or invalid header");

  Matrix m(dim, dim);
  int row = 0;
  while (row < dim && std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream fields(line);
    std::vector<double> values;
    std::string token;
    while (fields >> token) {
      try {
        size_t used = 0;
        values.push_back(std::stod(token, &used));
        if (used != token.size()) throw std::invalid_argument(token);
      } catch (const std::exception&) {
        throw ParseError(source, line_no, "not a number: '" + token + "'");
      }
    }
    if (static_cast<int>(values.size()) != dim) {
      throw ParseError(source, line_no,
                       "expected " + std::to_string(dim) + " values, got " +
                           std::to_string(values.size()));
    }
    for (int j = 0; j < dim; ++j) m(row, j) = values[j];
    ++row;
  }
  if (row != dim) {
    throw ParseError(source, line_no,
                     "expected " + std::to_string(dim) + " rows, got " +
                         std::to_string(row));
  }
  return m;
}

Matrix ReadMatrixFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open file");
  return ReadMatrix(in, path);
}

void WriteMatrixFile(const std::string& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) throw ParseError(path, 0, "cannot open file for writing");
  WriteMatrix(out, m);
}

}  // namespace spdadapt
