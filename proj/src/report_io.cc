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

#include "dpmf/report_io.h"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <type_traits>

#include "json.hpp"

namespace dpmf {
namespace {

constexpr int kSignificantDigits = 12;

std::string CellText(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return "";
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else if constexpr (std::is_same_v<T, int64_t>) {
          return std::to_string(v);
        } else if constexpr (std::is_same_v<T, double>) {
          return FormatDouble(v);
        } else {
          return v;
        }
      },
      cell);
}

nlohmann::ordered_json CellJson(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> nlohmann::ordered_json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return nullptr;
        } else if constexpr (std::is_same_v<T, double>) {
          if (!std::isfinite(v)) return nullptr;
          // Round through the text form so JSON and CSV agree.
          return std::strtod(FormatDouble(v).c_str(), nullptr);
        } else {
          return v;
        }
      },
      cell);
}

template <typename T>
Cell Optional(const std::optional<T>& v) {
  if (!v.has_value()) return std::monostate{};
  if constexpr (std::is_same_v<T, int>) {
    return static_cast<int64_t>(*v);
  } else {
    return *v;
  }
}

}  // namespace

std::string FormatDouble(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  auto result = std::to_chars(buf, buf + sizeof(buf), value,
                              std::chars_format::general, kSignificantDigits);
  return std::string(buf, result.ptr);
}

std::string CsvEscape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

void WriteCsv(const Table& table, std::ostream& out) {
  for (size_t i = 0; i < table.columns.size(); ++i) {
    if (i > 0) out << ',';
    out << CsvEscape(table.columns[i]);
  }
  out << '\n';
  for (const std::vector<Cell>& row : table.rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out << ',';
      out << CsvEscape(CellText(row[i]));
    }
    out << '\n';
  }
}

void WriteJson(const Table& table, std::ostream& out) {
  nlohmann::ordered_json array = nlohmann::ordered_json::array();
  for (const std::vector<Cell>& row : table.rows) {
    nlohmann::ordered_json object = nlohmann::ordered_json::object();
    for (size_t i = 0; i < row.size() && i < table.columns.size(); ++i) {
      object[table.columns[i]] = CellJson(row[i]);
    }
    array.push_back(std::move(object));
  }
  out << array.dump(2) << '\n';
}

Table ErrorRowsToTable(const std::vector<ErrorRow>& rows) {
  Table table;
  table.columns = {"n",     "alpha",          "beta",        "b",
                   "k",     "p",              "kind",        "sens",
                   "b_fro", "expected_error", "lower_bound", "exact_sens",
                   "note"};
  for (const ErrorRow& r : rows) {
    table.rows.push_back({static_cast<int64_t>(r.n), r.alpha, r.beta,
                          static_cast<int64_t>(r.b), static_cast<int64_t>(r.k),
                          Optional(r.p), std::string(KindName(r.kind)),
                          Optional(r.sens), Optional(r.b_frobenius),
                          Optional(r.expected_error), Optional(r.lower_bound),
                          Optional(r.exact_sens), r.note});
  }
  return table;
}

}  // namespace dpmf
