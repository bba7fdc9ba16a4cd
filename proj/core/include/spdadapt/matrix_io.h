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

// Plain-text matrix format:
//
//   dim=<n>
//   <row 0: n space-separated decimals>
//   ...
//   <row n-1>
//
// Values are printed with 17 significant digits so a write/read cycle is
// exact for doubles.

#ifndef SPDADAPT_MATRIX_IO_H_
#define SPDADAPT_MATRIX_IO_H_

#include <iosfwd>
#include <string>

#include "spdadapt/spd_geometry.h"

namespace spdadapt {

inline constexpr int kPrintDigits = 17;

// Formats a double with kPrintDigits significant digits ("%.17g").
std::string FormatDouble(double x);

void WriteMatrix(std::ostream& out, const Matrix& m);
// Throws ParseError with the offending line number.
Matrix ReadMatrix(std::istream& in, const std::string& source = "<stream>");

Matrix ReadMatrixFile(const std::string& path);
void WriteMatrixFile(const std::string& path, const Matrix& m);

}  // namespace spdadapt

#endif  // SPDADAPT_MATRIX_IO_H_
