//
// Copyright 2026 The dpmf Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// Machine-readable tables: CSV with RFC 4180 quoting and JSON arrays of row
// objects. Floating-point values are printed with 12 significant digits in
// the C locale.

#ifndef DPMF_REPORT_IO_H_
#define DPMF_REPORT_IO_H_

#include <cstdint>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "dpmf/error_analysis.h"

namespace dpmf {

// std::monostate is a missing value: an empty CSV field, null in JSON.
using Cell = std::variant<std::monostate, bool, int64_t, double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

// Shortest of fixed or scientific notation with 12 significant digits.
// Non-finite values print as "nan", "inf" and "-inf".
std::string FormatDouble(double value);

// Quotes `field` if it contains a comma, quote, CR or LF.
std::string CsvEscape(const std::string& field);

void WriteCsv(const Table& table, std::ostream& out);
void WriteJson(const Table& table, std::ostream& out);

// Columns: n, alpha, beta, b, k, p, kind, sens, b_fro, expected_error,
// lower_bound, exact_sens, note.
Table ErrorRowsToTable(const std::vector<ErrorRow>& rows);

}  // namespace dpmf

#endif  // DPMF_REPORT_IO_H_
