// Copyright 2026 The Underfit Authors.
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

#include "underfit/csv.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "underfit/errors.hpp"

namespace underfit {

namespace {

double parse_cell(const std::string& cell, const std::string& path, std::size_t line) {
  if (cell.empty()) {
    throw ParseError(path + ":" + std::to_string(line) + ": empty cell");
  }
  const char* begin = cell.c_str();
  char* end = nullptr;
  const double value = std::strtod(begin, &end);
  while (end && *end == ' ') ++end;
  if (end == begin || (end && *end != '\0')) {
    throw ParseError(path + ":" + std::to_string(line) + ": bad number '" + cell + "'");
  }
  if (!std::isfinite(value)) {
    throw ParseError(path + ":" + std::to_string(line) + ": non-finite value '" + cell + "'");
  }
  return value;
}

}  // namespace

Matd read_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");

  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      std::size_t first = cell.find_first_not_of(' ');
      std::size_t last = cell.find_last_not_of(' ');
      if (first == std::string::npos) {
        cell.clear();
      } else {
        cell = cell.substr(first, last - first + 1);
      }
      row.push_back(parse_cell(cell, path, lineno));
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ParseError(path + ":" + std::to_string(lineno) + ": ragged row, expected " +
                       std::to_string(rows.front().size()) + " columns, got " +
                       std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError(path + ": empty matrix");

  Matd m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  }
  return m;
}

void write_matrix_csv(const std::string& path, const Matd& m) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.precision(17);
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << m(i, j);
    }
    out << '\n';
  }
  if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace underfit
